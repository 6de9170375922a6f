"""
Rendering of results as JSON documents and human-readable text.

JSON output is a stable envelope {"tool", "version", "command",
"elapsed_seconds", "result"}; everything inside "result" is a pure function of
the inputs, so reports can be compared after dropping the timing field. A
section that could not be computed is rendered as {"status": "unknown",
"reason": ...} instead of being left out.
"""

import json
from typing import Any, Dict, List, Optional

from . import __version__
from .models import AnalysisReport, GrowthEstimate, HilbertData, ValidationReport

TOOL_NAME = "gsca"


def envelope(command: str, result: Dict[str, Any], elapsed: float) -> Dict[str, Any]:
    return {
        "tool": TOOL_NAME,
        "version": __version__,
        "command": command,
        "elapsed_seconds": round(elapsed, 3),
        "result": result,
    }


def dumps(document: Dict[str, Any]) -> str:
    return json.dumps(document, indent=2, ensure_ascii=False)


def _unknown(reason: Optional[str]) -> Dict[str, Any]:
    return {"status": "unknown", "reason": reason or "not computed"}


def _words(algebra, words) -> List[str]:
    return [algebra.format_word(w) or "1" for w in words]


def _vectors(field, vectors) -> List[List[str]]:
    return [[field.format(x) for x in v] for v in vectors]


# ---------- sections ----------


def validation_json(report: ValidationReport) -> Dict[str, Any]:
    return report.model_dump()


def instance_validation_json(
    mu_violations: List[str], symmetry_violations: List[str], first_entry: Optional[List[int]]
) -> Dict[str, Any]:
    return {
        "mu_valid": not mu_violations,
        "mu_violations": mu_violations,
        "matrices_mu_symmetric": not mu_violations and not symmetry_violations,
        "symmetry_violations": symmetry_violations,
        "first_violation": first_entry,
    }


def quadric_system_json(system) -> Dict[str, Any]:
    return {
        "n": system.mu.n,
        "field": system.mu.field.label,
        "raw": [str(q) for q in system.raw],
        "monic": [str(q) for q in system.monic],
    }


def quadric_system_text(system) -> str:
    lines = [f"quadric system (n = {system.mu.n}, field {system.mu.field.label})", "raw:"]
    lines.extend(f"  q{k} = {q}" for k, q in enumerate(system.raw, 1))
    lines.append("monic:")
    lines.extend(f"  q{k} = {q}" for k, q in enumerate(system.monic, 1))
    return "\n".join(lines) + "\n"


def certificate_json(certificate) -> Dict[str, Any]:
    algebra = certificate.element.algebra
    field = algebra.field
    return {
        "element": str(certificate.element),
        "ideal": [str(g) for g in certificate.ideal],
        "degree": certificate.degree,
        "degree_checked": certificate.degree_checked,
        "verdict": certificate.verdict,
        "degenerate": certificate.degenerate,
        "note": certificate.note,
        "basis_words": _words(algebra, certificate.basis_words),
        "left_span": _vectors(field, certificate.left_span),
        "right_span": _vectors(field, certificate.right_span),
        "identities": certificate.identities(),
        "obstruction": certificate.obstruction,
        "precedence": (
            [i + 1 for i in certificate.precedence] if certificate.precedence is not None else None
        ),
    }


def normalizing_json(result) -> Dict[str, Any]:
    verdict = {"found": "true", "not_found_exhaustive": "false"}.get(result.status, "unknown")
    return {
        "status": result.status,
        "verdict": verdict,
        "sequence": [str(r) for r in result.sequence],
        "certificates": [certificate_json(c) for c in result.certificates],
        "tests_used": result.tests_used,
        "budget": result.budget,
        "exhaustive": result.exhaustive,
        "phase": result.phase,
        "properness": "satisfied-by-grading",
        "notes": list(result.notes),
    }


def bpf_json(verdict) -> Dict[str, Any]:
    return {
        "base_point_free": verdict.base_point_free,
        "certified": verdict.certified,
        "mode": verdict.mode,
        "label": verdict.label,
        "witness": str(verdict.witness) if verdict.witness is not None else None,
        "points_scanned": verdict.points_scanned,
        "components": [
            {
                "support": c.label(),
                "consistent": c.consistent,
                "empty": c.empty,
                "violated_triple": list(c.violated_triple) if c.violated_triple else None,
                "polynomials": list(c.polynomials),
                "groebner_basis": c.groebner_basis,
            }
            for c in verdict.components
        ],
        "notes": list(verdict.notes),
    }


def elimination_json(eliminated) -> Dict[str, Any]:
    return {
        "y_definitions": {f"y{k}": str(f) for k, f in enumerate(eliminated.y_definitions, 1)},
        "x_relations": [str(r) for r in eliminated.x_relations],
    }


def hilbert_json(data: HilbertData) -> Dict[str, Any]:
    return data.model_dump()


def growth_json(estimate: GrowthEstimate) -> Dict[str, Any]:
    return estimate.model_dump()


def analysis_json(report: AnalysisReport) -> Dict[str, Any]:
    errors = report.errors

    def section(value, render, name):
        return render(value) if value is not None else _unknown(errors.get(name))

    return {
        "n": report.n,
        "field": report.field_label,
        "options": report.options.model_dump(),
        "mu_valid": report.mu_valid,
        "mu_violations": report.mu_violations,
        "matrices_mu_symmetric": report.matrices_mu_symmetric,
        "symmetry_violations": report.symmetry_violations,
        "quadrics": section(report.quadric_system, quadric_system_json, "quadrics"),
        "normalizing_verdict": report.normalizing_verdict,
        "normalizing": section(report.normalizing, normalizing_json, "normalizing"),
        "bpf_verdict": report.bpf_verdict,
        "bpf": section(report.bpf, bpf_json, "bpf"),
        "elimination": section(report.elimination, elimination_json, "eliminate"),
        "hilbert": section(report.hilbert, hilbert_json, "hilbert"),
        "growth": section(report.growth, growth_json, "growth"),
        "regularity": "not decided (evidence bundle only)",
        "errors": dict(errors),
        "notes": list(report.notes),
    }


# ---------- text ----------


def normalizing_text(result) -> str:
    lines = [f"normalizing sequence: {result.status} ({result.tests_used}/{result.budget} tests)"]
    for k, (r, certificate) in enumerate(zip(result.sequence, result.certificates), 1):
        lines.append(f"  r{k} = {r}")
        lines.extend(f"    {identity}" for identity in certificate.identities())
        if certificate.note:
            lines.append(f"    {certificate.note}")
    lines.extend(f"  note: {note}" for note in result.notes)
    return "\n".join(lines) + "\n"


def bpf_text(verdict) -> str:
    state = "base-point free" if verdict.base_point_free else "not base-point free"
    lines = [f"{state} [{verdict.mode}, {verdict.label}]"]
    if verdict.witness is not None:
        lines.append(f"  witness: {verdict.witness}")
    for c in verdict.components:
        if not c.consistent:
            lines.append(f"  support {c.label()}: no Z points (mu inconsistent at {c.violated_triple})")
        else:
            lines.append(f"  support {c.label()}: {'empty' if c.empty else 'base points'}  basis {c.groebner_basis}")
    if verdict.points_scanned:
        lines.append(f"  points scanned: {verdict.points_scanned}")
    lines.extend(f"  note: {note}" for note in verdict.notes)
    return "\n".join(lines) + "\n"


def hilbert_text(data: HilbertData, estimate: Optional[GrowthEstimate] = None) -> str:
    lines = [f"hilbert function (N = {data.degree_bound}): {', '.join(str(d) for d in data.dims)}"]
    if estimate is not None:
        growth = estimate.classification
        if estimate.delta is not None:
            growth += f"({estimate.delta})"
        lines.append(f"growth: {growth} [{estimate.label}]")
    return "\n".join(lines) + "\n"


def validation_text(document: Dict[str, Any]) -> str:
    if "graded" in document:
        lines = [
            f"graded: {document['graded']}",
            f"quadratic: {document['quadratic']}",
            f"generated in degree one: {document['generated_in_degree_one']}",
        ]
        lines.extend(f"  {reason}" for reason in document["reasons"])
        return "\n".join(lines) + "\n"
    lines = [
        f"mu valid: {document['mu_valid']}",
        f"matrices mu-symmetric: {document['matrices_mu_symmetric']}",
    ]
    lines.extend(f"  {v}" for v in document["mu_violations"] + document["symmetry_violations"])
    return "\n".join(lines) + "\n"


def analysis_text(report: AnalysisReport) -> str:
    out = [f"analysis (n = {report.n}, field {report.field_label}, N = {report.options.max_degree})"]
    out.append(f"mu valid: {report.mu_valid}; matrices mu-symmetric: {report.matrices_mu_symmetric}")
    if report.quadric_system is not None:
        out.append(quadric_system_text(report.quadric_system).rstrip("\n"))
    if report.normalizing is not None:
        out.append(normalizing_text(report.normalizing).rstrip("\n"))
    if report.bpf is not None:
        out.append(bpf_text(report.bpf).rstrip("\n"))
    if report.elimination is not None:
        out.append("eliminated presentation:")
        for k, f in enumerate(report.elimination.y_definitions, 1):
            out.append(f"  y{k} = {f}")
        out.extend(f"  {r} = 0" for r in report.elimination.x_relations)
    if report.hilbert is not None:
        out.append(hilbert_text(report.hilbert, report.growth).rstrip("\n"))
    for section, message in report.errors.items():
        out.append(f"error [{section}]: {message}")
    out.extend(f"note: {note}" for note in report.notes)
    out.append("regularity: not decided (evidence bundle only)")
    return "\n".join(out) + "\n"
