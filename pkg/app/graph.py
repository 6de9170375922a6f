"""
LangGraph orchestration of the analysis pipeline.

One node per stage, run in sequence:

    validate -> quadrics -> normalizing -> bpf -> eliminate -> hilbert -> growth

Every node reads what earlier nodes produced from the shared state and fills
in its own section. A stage that fails records "<module>: <message>" under its
section name in state["errors"] and later stages that depend on it are
skipped, so a partial report is always produced.
"""

import logging
from functools import lru_cache
from typing import Any, Optional, Sequence

from langgraph.graph import END, StateGraph

from .errors import ToolkitError
from .models import AnalysisOptions, AnalysisReport, AnalysisState
from .tools.geometry import is_base_point_free
from .tools.gsca import build_gsca, eliminate_y
from .tools.ncgb import growth_estimate, hilbert_function
from .tools.scalars import FieldSpec, Matrix
from .tools.skewring import (
    MuMatrix,
    QuadricSystem,
    find_normalizing_sequence,
    mu_symmetry_violations,
    mu_violations,
)

logger = logging.getLogger(__name__)


def _fail(state: AnalysisState, section: str, error: ToolkitError) -> AnalysisState:
    logger.info("stage %s failed: %s", section, error.diagnostic)
    state["errors"][section] = error.diagnostic
    return state


def _precedence(options: AnalysisOptions) -> Optional[Sequence[int]]:
    if options.precedence is None:
        return None
    return [i - 1 for i in options.precedence]


def validate(state: AnalysisState) -> AnalysisState:
    """Build mu and the matrices; record every broken axiom."""
    field = state["field"]
    try:
        rows = [[field.convert(x) for x in row] for row in state["mu_rows"]]
        matrices = [Matrix.from_rows(field, [[field.convert(x) for x in r] for r in m]) for m in state["matrix_rows"]]
    except ToolkitError as e:
        return _fail(state, "validate", e)

    problems = mu_violations(field, rows)
    state["mu_violations"] = [message for _, message in problems]
    if problems:
        state["errors"]["validate"] = f"skewring: {problems[0][1]}"
        return state
    mu = MuMatrix(field, tuple(tuple(r) for r in rows))
    state["mu"] = mu
    state["matrices"] = matrices

    violations = []
    try:
        for k, m in enumerate(matrices, 1):
            violations.extend(f"M_{k}: M_{i}{j} != mu_{i}{j} * M_{j}{i}" for i, j in mu_symmetry_violations(m, mu))
    except ToolkitError as e:
        return _fail(state, "validate", e)
    state["symmetry_violations"] = violations
    if violations:
        state["errors"]["validate"] = f"skewring: {violations[0]}"
    return state


def _ready(state: AnalysisState) -> bool:
    return state.get("mu") is not None and not state["symmetry_violations"]


def quadrics(state: AnalysisState) -> AnalysisState:
    if not _ready(state):
        return state
    try:
        state["quadric_system"] = QuadricSystem.build(state["mu"], state["matrices"])
    except ToolkitError as e:
        return _fail(state, "quadrics", e)
    return state


def normalizing(state: AnalysisState) -> AnalysisState:
    """Search for a normalizing sequence spanning span{q_1..q_n} in S."""
    system = state.get("quadric_system")
    if system is None:
        return state
    options = state["options"]
    try:
        state["normalizing"] = find_normalizing_sequence(
            system.monic,
            system.ring,
            degree_bound=options.max_degree,
            budget=options.budget,
            coefficients=options.coefficients,
            precedence=_precedence(options),
        )
    except ToolkitError as e:
        return _fail(state, "normalizing", e)
    state["notes"].append("normalizing condition checked for the quadric system in S; the A-side condition is not directly decided")
    return state


def bpf(state: AnalysisState) -> AnalysisState:
    system = state.get("quadric_system")
    if system is None:
        return state
    try:
        verdict = is_base_point_free(system, state["options"].mode)
    except ToolkitError as e:
        return _fail(state, "bpf", e)
    state["bpf"] = verdict
    state["notes"].extend(verdict.notes)
    return state


def eliminate(state: AnalysisState) -> AnalysisState:
    if not _ready(state):
        return state
    try:
        gsca = build_gsca(state["mu"], state["matrices"])
        state["gsca"] = gsca
        state["elimination"] = eliminate_y(gsca)
    except ToolkitError as e:
        return _fail(state, "eliminate", e)
    return state


def hilbert(state: AnalysisState) -> AnalysisState:
    """Hilbert data of K<x>/(x_relations), the quotient target that surjects onto A."""
    elimination = state.get("elimination")
    if elimination is None:
        return state
    options = state["options"]
    try:
        state["hilbert"] = hilbert_function(
            elimination.presentation, options.max_degree, _precedence(options)
        )
    except ToolkitError as e:
        return _fail(state, "hilbert", e)
    state["notes"].append("Hilbert data is for the eliminated quotient K<x>/(x_relations), which surjects onto A")
    return state


def growth(state: AnalysisState) -> AnalysisState:
    data = state.get("hilbert")
    if data is None:
        return state
    try:
        state["growth"] = growth_estimate(data)
    except ToolkitError as e:
        return _fail(state, "growth", e)
    return state


@lru_cache(maxsize=1)
def build_graph():
    """
    Build and compile the analysis graph.

    Returns:
        Compiled StateGraph over AnalysisState
    """
    workflow = StateGraph(AnalysisState)

    workflow.add_node("validate", validate)
    workflow.add_node("quadrics", quadrics)
    workflow.add_node("normalizing", normalizing)
    workflow.add_node("bpf", bpf)
    workflow.add_node("eliminate", eliminate)
    workflow.add_node("hilbert", hilbert)
    workflow.add_node("growth", growth)

    workflow.set_entry_point("validate")

    workflow.add_edge("validate", "quadrics")
    workflow.add_edge("quadrics", "normalizing")
    workflow.add_edge("normalizing", "bpf")
    workflow.add_edge("bpf", "eliminate")
    workflow.add_edge("eliminate", "hilbert")
    workflow.add_edge("hilbert", "growth")
    workflow.add_edge("growth", END)

    return workflow.compile()


def analyze(
    field: FieldSpec,
    mu: Sequence[Sequence[Any]],
    matrices: Sequence[Sequence[Sequence[Any]]],
    options: Optional[AnalysisOptions] = None,
) -> AnalysisReport:
    """
    Run the full pipeline on one (mu, M_1..M_n) instance.

    Entries may be strings, ints or field scalars. The report never claims
    regularity; it bundles the evidence each stage produced.
    """
    options = options or AnalysisOptions()
    initial: AnalysisState = {
        "field": field,
        "mu_rows": mu,
        "matrix_rows": matrices,
        "options": options,
        "mu": None,
        "matrices": None,
        "mu_violations": [],
        "symmetry_violations": [],
        "quadric_system": None,
        "normalizing": None,
        "bpf": None,
        "gsca": None,
        "elimination": None,
        "hilbert": None,
        "growth": None,
        "errors": {},
        "notes": [],
    }
    final = build_graph().invoke(initial)
    return AnalysisReport(
        n=len(mu),
        field_label=field.label,
        options=options,
        mu_valid=final["mu"] is not None,
        mu_violations=final["mu_violations"],
        matrices_mu_symmetric=final["mu"] is not None and not final["symmetry_violations"],
        symmetry_violations=final["symmetry_violations"],
        quadric_system=final["quadric_system"],
        normalizing=final["normalizing"],
        bpf=final["bpf"],
        elimination=final["elimination"],
        hilbert=final["hilbert"],
        growth=final["growth"],
        errors=final["errors"],
        notes=final["notes"],
    )
