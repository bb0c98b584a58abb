"""Text normal form for series values, e.g. ``inf^2 + 2 + del^2`` or ``(+-)1``.

Terms are listed by increasing exponent.  Exact non-integer coefficients print
as fractions (``3*del/2``), approximate ones with ``repr``, so reading a normal
form back restores the exact/approximate split.  A parity split prints as
``P + (+-)Q`` with ``P`` the mean of the branches and ``Q`` half their
difference.
"""
from __future__ import annotations

from fractions import Fraction

from .series import Laurent
from .vnum import Seq, Series, VirtualNumber


def _base(k: int) -> str:
    if k == 0:
        return ""
    if k > 0:
        return "del" if k == 1 else f"del^{k}"
    return "inf" if k == -1 else f"inf^{-k}"


def _term(c, k: int) -> str:
    """Unsigned text of ``|c| * del^k``."""
    base = _base(k)
    if isinstance(c, Fraction):
        p, q = abs(c.numerator), c.denominator
        if not base:
            return str(p) if q == 1 else f"{p}/{q}"
        head = base if p == 1 else f"{p}*{base}"
        return head if q == 1 else f"{head}/{q}"
    mag = repr(abs(float(c)))
    return mag if not base else f"{mag}*{base}"


def _big_o(t: int) -> str:
    k = t + 1
    return "O(1)" if k == 0 else f"O({_base(k)})"


def format_laurent(lp: Laurent, with_tail: bool = True) -> str:
    parts = []
    for k, c in lp.items():
        neg = c < 0
        body = _term(c, k)
        if not parts:
            parts.append(("-" if neg else "") + body)
        else:
            parts.append((" - " if neg else " + ") + body)
    if with_tail and lp.trunc is not None:
        parts.append((" + " if parts else "") + _big_o(lp.trunc))
    return "".join(parts) or "0"


def format_virtual(a: VirtualNumber) -> str:
    if isinstance(a, Seq):
        return f"<seq {a.gen.description}>"
    if not isinstance(a, Series):
        raise TypeError(f"not a virtual number: {a!r}")
    e, o = a.even, a.odd
    if a.parity_free:
        return format_laurent(e)
    t = e.trunc if o.trunc is None else o.trunc if e.trunc is None else min(e.trunc, o.trunc)
    half = Fraction(1, 2)
    p = (e + o).scale(half).truncate(t)
    q = (e - o).scale(half).truncate(t)
    sign = "+-"
    if q.terms and all(c < 0 for c in q.terms.values()):
        q, sign = -q, "-+"
    qs = format_laurent(q, with_tail=False)
    if len(q.terms) > 1:
        qs = f"({qs})"
    out = f"({sign}){qs}"
    if p.terms:
        out = f"{format_laurent(p, with_tail=False)} + {out}"
    if t is not None:
        out += f" + {_big_o(t)}"
    return out


def read_virtual(text: str) -> VirtualNumber:
    """Inverse of :func:`format_virtual`; also accepts any closed expression.

    Decimal literals read back as approximate scalars, fractions as exact.
    """
    from .lift import evaluate
    from .realfun import parse_expr

    return evaluate(parse_expr(text, decimals_exact=False))
