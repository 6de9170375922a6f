"""
Pydantic models for reports, options and instance files.

These models are the external contract of the toolkit: the CLI reads
instance and grid files into them and every verdict travels back out through
them. Algebraic values (polynomials, bases, certificates) stay in the
app.tools modules; models that aggregate them declare those fields as Any.
"""

import re
from typing import Any, Dict, List, Literal, Optional, Sequence, TypedDict

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .config import BPF_MODE_PATTERN, config


class ValidationReport(BaseModel):
    """Verdicts on the grading axioms of a presentation."""

    graded: bool = Field(..., description="All relations homogeneous for the declared degrees")
    quadratic: bool = Field(..., description="Graded, degree-1 generators, degree-2 relations")
    generated_in_degree_one: bool = Field(..., description="Every generator has degree 1")
    reasons: List[str] = Field(default_factory=list, description="Human-readable violations")


class HilbertData(BaseModel):
    """dim_K A_0, ..., dim_K A_N of a graded quotient."""

    dims: List[int] = Field(..., description="Dimensions of the graded pieces, degree 0 first")
    degree_bound: int = Field(..., ge=0, description="Degree up to which the data is certified")
    order: str = Field("deglex", description="Term order used by the completion")

    @field_validator("dims")
    @classmethod
    def _connected(cls, v: List[int]) -> List[int]:
        if not v or v[0] != 1:
            raise ValueError("dims[0] must be 1 (A_0 = K)")
        if any(d < 0 for d in v):
            raise ValueError("dimensions are non-negative")
        return v


class GrowthEstimate(BaseModel):
    """Finite-window growth classification; always an estimate, never a proof."""

    classification: Literal["polynomial", "exponential", "inconclusive"]
    delta: Optional[int] = Field(None, description="Observed polynomial degree of growth")
    differences: List[List[int]] = Field(default_factory=list, description="Finite differences")
    tail_ratios: List[str] = Field(default_factory=list, description="dims[i+1]/dims[i], last half")
    window_start: int = Field(0, description="First index of the observed tail")
    label: str = "estimate"


class BpfMode(BaseModel):
    """Exact decision, or an exhaustive scan over F_{p^k}."""

    model_config = ConfigDict(frozen=True)

    # "exact" uses commutative Gröbner bases; "scan" enumerates Z over F_{p^k}
    kind: Literal["exact", "scan"] = "exact"

    # Scan characteristic, an odd prime; None in exact mode
    p: Optional[int] = None

    # Extension degree of the scan field
    k: int = 1

    @classmethod
    def parse(cls, text: str) -> "BpfMode":
        text = text.strip()
        if not re.match(BPF_MODE_PATTERN, text):
            raise ValueError(f"BPF mode must be 'exact' or 'scan:p[,k]', got {text!r}")
        if text == "exact":
            return cls()
        p, _, k = text[len("scan:") :].partition(",")
        return cls(kind="scan", p=int(p), k=int(k or 1))

    def __str__(self) -> str:
        if self.kind == "exact":
            return "exact"
        return f"scan:{self.p},{self.k}"


class AnalysisOptions(BaseModel):
    """Per-run knobs; defaults come from the environment configuration."""

    # Degree bound N for completion, Hilbert data and normality tests
    max_degree: int = Field(default_factory=lambda: config.MAX_DEGREE, ge=2)

    # Mode string as given; parsed by BpfMode
    bpf_mode: str = Field(default_factory=lambda: config.BPF_MODE)

    # Normality tests the normalizing-sequence search may spend
    budget: int = Field(default_factory=lambda: config.SEARCH_BUDGET, ge=1)

    # Coefficient test set for searches over the rationals
    coefficients: List[str] = Field(default_factory=config.coefficient_strings)

    # Applies to completion, Hilbert data and normality certificates alike
    precedence: Optional[List[int]] = Field(
        None, description="1-based generator order for deglex, smallest first"
    )

    @field_validator("bpf_mode")
    @classmethod
    def _mode(cls, v: str) -> str:
        BpfMode.parse(v)
        return v

    @property
    def mode(self) -> BpfMode:
        return BpfMode.parse(self.bpf_mode)


class PresentationSpec(BaseModel):
    """A bare presentation: generator names, their degrees and relation strings."""

    generators: List[str]

    # Omitted degrees mean every generator has degree 1
    degrees: Optional[List[int]] = None
    relations: List[str] = Field(default_factory=list)


class FieldDescriptor(BaseModel):
    # p is required for "prime" and ignored for "rationals"
    kind: Literal["rationals", "prime"] = "rationals"
    p: Optional[int] = None


class InstanceFile(BaseModel):
    """
    Self-describing JSON instance.

    Either GSCA data (n, mu, matrices) or a bare presentation. Scalar entries
    are strings so values stay exact; entries may use the named parameters.
    """

    field: FieldDescriptor = Field(default_factory=FieldDescriptor)
    n: Optional[int] = Field(None, ge=1)

    # Evaluated in file order; later parameters may refer to earlier ones
    parameters: Dict[str, str] = Field(default_factory=dict)

    # Row-major scalar expressions, n x n
    mu: Optional[List[List[str]]] = None
    matrices: Optional[List[List[List[str]]]] = None
    presentation: Optional[PresentationSpec] = None

    # AnalysisOptions fields; command-line flags override them
    options: Dict[str, Any] = Field(default_factory=dict)

    @model_validator(mode="after")
    def _shape(self) -> "InstanceFile":
        if self.presentation is not None:
            return self
        if self.n is None or self.mu is None or self.matrices is None:
            raise ValueError("an instance needs n, mu and matrices (or a presentation)")
        n = self.n
        if len(self.mu) != n or any(len(row) != n for row in self.mu):
            raise ValueError(f"mu must be {n}x{n}")
        if len(self.matrices) != n:
            raise ValueError(f"exactly n = {n} matrices are required")
        for k, m in enumerate(self.matrices, 1):
            if len(m) != n or any(len(row) != n for row in m):
                raise ValueError(f"matrix M_{k} must be {n}x{n}")
        for name in self.parameters:
            if not re.match(r"^[A-Za-z_][A-Za-z0-9_]*$", name):
                raise ValueError(f"invalid parameter name {name!r}")
        return self

    @property
    def is_presentation(self) -> bool:
        return self.presentation is not None


class GridSpec(BaseModel):
    """A base instance plus finite value lists for some of its parameters."""

    base: InstanceFile

    # Parameter name -> values; points are the product in file order
    grid: Dict[str, List[str]] = Field(default_factory=dict)


class AnalysisReport(BaseModel):
    """
    Evidence bundle for one (mu, M_1..M_n) instance.

    No regularity verdict is ever given: the report carries Hilbert data,
    a growth estimate, the normalizing-sequence search and the BPF decision,
    each with the certificate or witness that justifies it.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    n: int
    field_label: str
    options: AnalysisOptions

    # validate stage
    mu_valid: bool = False
    mu_violations: List[str] = Field(default_factory=list)
    matrices_mu_symmetric: bool = False
    symmetry_violations: List[str] = Field(default_factory=list)

    # Stage results; None when the stage did not run or failed
    quadric_system: Optional[Any] = None  # skewring.QuadricSystem
    normalizing: Optional[Any] = None  # skewring.NormalizingSearchResult
    bpf: Optional[Any] = None  # geometry.BpfVerdict
    elimination: Optional[Any] = None  # gsca.EliminatedAlgebra
    hilbert: Optional[HilbertData] = None
    growth: Optional[GrowthEstimate] = None
    errors: Dict[str, str] = Field(default_factory=dict, description="Per-section error markers")
    notes: List[str] = Field(default_factory=list)

    @property
    def normalizing_verdict(self) -> str:
        if self.normalizing is None:
            return "unknown"
        return {"found": "true", "not_found_exhaustive": "false"}.get(
            self.normalizing.status, "unknown"
        )

    @property
    def bpf_verdict(self) -> str:
        if self.bpf is None:
            return "unknown"
        if not self.bpf.base_point_free:
            return "false"
        return "true" if self.bpf.certified else "unknown"


class AnalysisState(TypedDict):
    """
    State flowing through the analysis graph.

    Each node reads what earlier stages produced and fills in its own section;
    a stage that cannot run leaves its section as None and records the reason
    in errors under the section name.
    """

    # inputs
    field: Any  # scalars.FieldSpec
    mu_rows: Sequence[Sequence[Any]]
    matrix_rows: Sequence[Sequence[Sequence[Any]]]
    options: AnalysisOptions

    # validate
    mu: Optional[Any]  # skewring.MuMatrix
    matrices: Optional[List[Any]]  # scalars.Matrix
    mu_violations: List[str]
    symmetry_violations: List[str]

    # stages
    quadric_system: Optional[Any]
    normalizing: Optional[Any]
    bpf: Optional[Any]
    gsca: Optional[Any]
    elimination: Optional[Any]
    hilbert: Optional[HilbertData]
    growth: Optional[GrowthEstimate]

    errors: Dict[str, str]
    notes: List[str]
