"""
Configuration management for the skew Clifford toolkit.

All settings come from environment variables (optionally loaded from a .env
file) with defaults suitable for desk-scale runs. Command-line flags and
instance-file options override these values per run.
"""

import os

# python-dotenv is optional at runtime; production shells set variables directly
try:
    from dotenv import load_dotenv

    load_dotenv()
except ImportError:
    pass


# Mode strings accepted here and by models.BpfMode
BPF_MODE_PATTERN = r"^(exact|scan:\d+(,\d+)?)$"


class Config:
    """
    Toolkit configuration loaded from environment variables.

    Class attributes give global read access; tests adjust them in place and
    restore them afterwards.
    """

    # Default degree bound N for completion, Hilbert data and normality tests
    MAX_DEGREE: int = int(os.getenv("GSCA_MAX_DEGREE", "6"))

    # Default BPF mode: "exact" or "scan:p" / "scan:p,k"
    BPF_MODE: str = os.getenv("GSCA_BPF_MODE", "exact")

    # Number of normality tests a normalizing-sequence search may spend
    SEARCH_BUDGET: int = int(os.getenv("GSCA_SEARCH_BUDGET", "500"))

    # Coefficients tried when searching over the rationals
    COEFFICIENTS: str = os.getenv("GSCA_COEFFICIENTS", "0,1,-1,2,-2")

    # Exact BPF is a desk-scale procedure
    EXACT_MAX_N: int = int(os.getenv("GSCA_EXACT_MAX_N", "4"))

    # Largest finite-field enumeration spent looking for a rational witness
    WITNESS_LIMIT: int = int(os.getenv("GSCA_WITNESS_LIMIT", "100000"))

    # Worker processes for grid search (1 = run in-process)
    WORKERS: int = int(os.getenv("GSCA_WORKERS", "1"))

    # Level for the CLI handler on stderr; -v and -vv lower it
    LOG_LEVEL: str = os.getenv("GSCA_LOG_LEVEL", "WARNING")

    @classmethod
    def coefficient_strings(cls) -> list:
        # comma-separated, blanks dropped
        return [c.strip() for c in cls.COEFFICIENTS.split(",") if c.strip()]

    @classmethod
    def validate(cls) -> None:
        """
        Validate configuration on import so bad settings fail before any work starts.

        Raises:
            ValueError: If a setting is out of range or unparsable
        """
        import re

        if cls.MAX_DEGREE < 2:
            raise ValueError("GSCA_MAX_DEGREE must be at least 2")

        if not re.match(BPF_MODE_PATTERN, cls.BPF_MODE):
            raise ValueError("GSCA_BPF_MODE must be 'exact' or 'scan:p[,k]'")

        if cls.SEARCH_BUDGET < 1:
            raise ValueError("GSCA_SEARCH_BUDGET must be positive")

        if cls.EXACT_MAX_N < 1 or cls.WITNESS_LIMIT < 1 or cls.WORKERS < 1:
            raise ValueError("GSCA_EXACT_MAX_N, GSCA_WITNESS_LIMIT and GSCA_WORKERS must be positive")

        for item in cls.coefficient_strings():
            if not re.match(r"^[+-]?\d+(/\d+)?$", item):
                raise ValueError(f"GSCA_COEFFICIENTS contains an invalid entry: {item!r}")

        if cls.LOG_LEVEL.upper() not in {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}:
            raise ValueError("GSCA_LOG_LEVEL must be a standard logging level name")


config = Config()
config.validate()
