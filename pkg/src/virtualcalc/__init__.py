"""Calculus with virtual numbers: infinitesimals and infinities as first-class values.

>>> from virtualcalc import INF, DEL, read_virtual, format_virtual
>>> format_virtual((INF + DEL) ** 2)
'inf^2 + 2 + del^2'
"""
from .calculus import (
    InfinitesimalFamily,
    check_continuity_at,
    check_differentiable_at,
    check_uniform_continuity,
    derivative_at,
    differentiability_report,
    sine_quotient_check,
    taylor_expand,
)
from .classify import (
    Finitude,
    between,
    classify,
    cmp_reals,
    confront,
    contains,
    is_finite,
    is_infinite,
    is_infinitesimal,
    is_interior_point,
    near,
    neighbour,
    standard_part,
)
from .config import Settings, current, settings
from .errors import (
    CenterOnBoundary,
    DegenerateInterval,
    DomainError,
    ExprSyntaxError,
    NoStandardPart,
    NonSmoothNode,
    NotDerivable,
    NotIntegrable,
    NotInterior,
    NotInvertible,
    NotPositive,
    ParseError,
    PointwiseZero,
    UnknownIdentifier,
    UnknownSuite,
    UnsupportedExpression,
    UnsupportedSet,
    VirtualCalcError,
)
from .integrate import Measure, TagScheme, element_check, ftc_check, geom_measure, integrate
from .kernels import BACKEND
from .lift import evaluate, extend_apply
from .magnitude import compare_magnitude, in_order_of, leading_order, negligible
from .normal_form import format_virtual, read_virtual
from .props import run_props
from .realfun import DomainDescriptor, diff_expr, eval_real, parse_domain, parse_expr
from .verdict import Truth, Verdict
from .vnum import (
    DEL,
    INF,
    Series,
    Seq,
    VirtualNumber,
    alternate_sign,
    alternate_sign_neg,
    from_rule,
    make_real,
    rel_ext,
    sample,
    schedule,
    to_seq,
)

__version__ = "0.1.0"
