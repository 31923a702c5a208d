"""Certifier for termination proofs of higher-order rewrite systems.

The package checks weakly monotonic polynomial interpretations against
algebraic functional systems: every rewrite rule must strictly decrease
under the interpretation.  It also ships a small bounded synthesizer
that searches for such interpretations, a parser for the trace format,
and a command line front end.
"""

from .checker import (
    CertResult,
    CheckLimits,
    Constraint,
    ProofTrace,
    Proven,
    RuleReport,
    Unknown,
    Verdict,
    certify,
    check_constraint,
    derive_constraints,
)
from .core import (
    AFS,
    App,
    Arrow,
    BaseType,
    Lam,
    RewriteRule,
    Signature,
    SimpleType,
    Symbol,
    Term,
    Var,
    infer_type,
)
from .interp import (
    Interpretation,
    NormalPoly,
    interpret_term,
    normalize,
    render_poly,
)
from .synth import SearchBounds, synthesize
from .trace import (
    ElaborationError,
    TraceError,
    TraceSyntaxError,
    elaborate,
    parse_trace,
    render_trace,
)

__version__ = "0.1.0"

__all__ = [
    "AFS",
    "App",
    "Arrow",
    "BaseType",
    "CertResult",
    "CheckLimits",
    "Constraint",
    "ElaborationError",
    "Interpretation",
    "Lam",
    "NormalPoly",
    "ProofTrace",
    "Proven",
    "RewriteRule",
    "RuleReport",
    "SearchBounds",
    "Signature",
    "SimpleType",
    "Symbol",
    "Term",
    "TraceError",
    "TraceSyntaxError",
    "Unknown",
    "Var",
    "Verdict",
    "certify",
    "check_constraint",
    "derive_constraints",
    "elaborate",
    "infer_type",
    "interpret_term",
    "normalize",
    "parse_trace",
    "render_poly",
    "render_trace",
    "synthesize",
    "__version__",
]
