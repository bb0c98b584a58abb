"""Truncated Laurent polynomials in the infinitesimal ``del``.

A :class:`Laurent` is a finite map ``exponent -> coefficient`` plus an optional
truncation order ``trunc``.  Exponent ``k`` stands for ``del**k``; negative
exponents are powers of ``inf = 1/del``.  When ``trunc`` is an integer every
exponent above it is unknown (the value carries an ``O(del**(trunc+1))`` tail);
``trunc=None`` marks an exact polynomial.

Coefficients are scalars: :class:`fractions.Fraction` (exact) or ``float``
(approximate).  Python's numeric tower already gives the scalar policy we want:
``Fraction op float`` is a ``float``.
"""
from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational
from typing import Callable, Iterable, Union

from .config import SCALAR_TOL
from .errors import NotInvertible

Scalar = Union[Fraction, float]


def scalar(x) -> Scalar:
    """Coerce ``x`` to a scalar: rationals become Fractions, anything else float."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        return Fraction(int(x))
    if isinstance(x, Rational):
        return Fraction(x)
    return float(x)


def is_exact(c) -> bool:
    return isinstance(c, Fraction)


def _min_trunc(*ts):
    known = [t for t in ts if t is not None]
    return min(known) if known else None


class Laurent:
    __slots__ = ("terms", "trunc")

    def __init__(self, terms: dict[int, Scalar] | None = None, trunc: int | None = None):
        # Callers hand over ownership of ``terms``; it is never mutated afterwards.
        self.terms = terms if terms is not None else {}
        self.trunc = trunc

    # -- construction ---------------------------------------------------
    @classmethod
    def from_terms(cls, items: Iterable[tuple[int, object]], trunc: int | None = None) -> Laurent:
        terms: dict[int, Scalar] = {}
        for k, c in items:
            c = scalar(c)
            terms[k] = terms.get(k, 0) + c
        terms = {k: c for k, c in terms.items() if c != 0 and (trunc is None or k <= trunc)}
        return cls(terms, trunc)

    @classmethod
    def const(cls, c) -> Laurent:
        c = scalar(c)
        return cls({0: c} if c != 0 else {}, None)

    @classmethod
    def monomial(cls, c, k: int) -> Laurent:
        c = scalar(c)
        return cls({k: c} if c != 0 else {}, None)

    @classmethod
    def big_o(cls, k: int) -> Laurent:
        """The unknown remainder ``O(del**k)``."""
        return cls({}, k - 1)

    # -- inspection -----------------------------------------------------
    @property
    def exact(self) -> bool:
        """True when no truncation occurred and every coefficient is exact."""
        return self.trunc is None and all(type(c) is Fraction for c in self.terms.values())

    @property
    def approximate(self) -> bool:
        return any(type(c) is not Fraction for c in self.terms.values())

    def is_zero(self) -> bool:
        """Exactly zero (no terms and no unknown tail)."""
        return not self.terms and self.trunc is None

    def is_null(self) -> bool:
        """No known nonzero terms (exact zero or a bare ``O(.)`` tail)."""
        return not self.terms

    @property
    def valuation(self) -> int | None:
        return min(self.terms) if self.terms else None

    def lower_bound(self) -> float:
        """Least exponent that can carry a nonzero coefficient."""
        if self.terms:
            return min(self.terms)
        return math.inf if self.trunc is None else self.trunc + 1

    def lead(self) -> tuple[int, Scalar] | None:
        if not self.terms:
            return None
        k = min(self.terms)
        return k, self.terms[k]

    def coeff(self, k: int) -> Scalar:
        return self.terms.get(k, Fraction(0))

    def items(self) -> list[tuple[int, Scalar]]:
        return sorted(self.terms.items())

    def __repr__(self):
        return f"Laurent({self.items()!r}, trunc={self.trunc})"

    def __eq__(self, other):
        if not isinstance(other, Laurent):
            return NotImplemented
        return self.trunc == other.trunc and self.terms == other.terms

    def __hash__(self):
        return hash((frozenset(self.terms.items()), self.trunc))

    def agrees_with(self, other: Laurent) -> bool:
        """Equal on every exponent known in both operands."""
        return (self - other).is_null()

    # -- arithmetic -----------------------------------------------------
    def truncate(self, t: int | None) -> Laurent:
        if t is None or (self.trunc is not None and self.trunc <= t):
            return self
        return Laurent({k: c for k, c in self.terms.items() if k <= t}, t)

    def __neg__(self) -> Laurent:
        return Laurent({k: -c for k, c in self.terms.items()}, self.trunc)

    def __add__(self, other: Laurent) -> Laurent:
        if not isinstance(other, Laurent):
            return NotImplemented
        t = _min_trunc(self.trunc, other.trunc)
        a, b = self.terms, other.terms
        out: dict[int, Scalar] = {}
        for k in a.keys() | b.keys():
            if t is not None and k > t:
                continue
            x, y = a.get(k), b.get(k)
            if x is None:
                out[k] = y
                continue
            if y is None:
                out[k] = x
                continue
            r = x + y
            if r == 0:
                continue
            if type(r) is float and abs(r) <= SCALAR_TOL * max(abs(x), abs(y)):
                continue  # cancellation at float resolution
            out[k] = r
        return Laurent(out, t)

    def __sub__(self, other: Laurent) -> Laurent:
        if not isinstance(other, Laurent):
            return NotImplemented
        return self + (-other)

    def scale(self, c) -> Laurent:
        c = scalar(c)
        if c == 0:
            return Laurent({}, None) if self.trunc is None else Laurent({}, self.trunc)
        return Laurent({k: v * c for k, v in self.terms.items()}, self.trunc)

    def shift(self, s: int) -> Laurent:
        """Multiply by ``del**s``."""
        return Laurent(
            {k + s: c for k, c in self.terms.items()},
            None if self.trunc is None else self.trunc + s,
        )

    def mul(self, other: Laurent, cap: int | None = None) -> Laurent:
        """Product, optionally discarding exponents above ``cap``."""
        if self.is_zero() or other.is_zero():
            return Laurent({}, None)
        la, lb = self.lower_bound(), other.lower_bound()
        cands = []
        if self.trunc is not None:
            cands.append(self.trunc + lb)
        if other.trunc is not None:
            cands.append(other.trunc + la)
        t = min(cands) if cands else None
        if t is not None:
            t = int(t)
        t = _min_trunc(t, cap)
        acc: dict[int, Scalar] = {}
        mag: dict[int, float] = {}
        floaty = False
        b_items = list(other.terms.items())
        for i, x in self.terms.items():
            for j, y in b_items:
                k = i + j
                if t is not None and k > t:
                    continue
                p = x * y
                if k in acc:
                    acc[k] += p
                else:
                    acc[k] = p
                if type(p) is float:
                    floaty = True
                    mag[k] = mag.get(k, 0.0) + abs(p)
        out = {}
        for k, c in acc.items():
            if c == 0:
                continue
            if floaty and type(c) is float and abs(c) <= SCALAR_TOL * mag.get(k, abs(c)):
                continue
            out[k] = c
        return Laurent(out, t)

    def __mul__(self, other: Laurent) -> Laurent:
        if not isinstance(other, Laurent):
            return NotImplemented
        return self.mul(other)

    def inverse(self, order: int) -> Laurent:
        """Multiplicative inverse with ``order`` exponents of relative precision.

        Monomials invert exactly.  Otherwise the result is known up to
        ``min(order, trunc - v) - v`` where ``v`` is the valuation.
        """
        lead = self.lead()
        if lead is None:
            raise NotInvertible("series is zero up to its truncation order")
        v, a = lead
        inv_a = Fraction(1) / a
        if len(self.terms) == 1 and self.trunc is None:
            return Laurent({-v: inv_a}, None)
        r = self.shift(-v).scale(inv_a) - Laurent.const(1)
        return geometric_inverse(r, order).shift(-v).scale(inv_a)

    def pow(self, n: int, order: int) -> Laurent:
        if n < 0:
            return self.pow(-n, order).inverse(order)
        result = Laurent.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # -- evaluation -----------------------------------------------------
    def evaluate(self, n: int) -> float:
        """Value of the representative sequence at index ``n`` (``del = 1/n``)."""
        if not self.terms:
            return 0.0
        if all(type(c) is Fraction for c in self.terms.values()):
            total = Fraction(0)
            for k, c in self.terms.items():
                total += c * n**-k if k <= 0 else c / n**k
            return float(total)
        fn = float(n)
        return math.fsum(float(c) * fn ** (-k) for k, c in self.terms.items())


def horner(coeffs: list[Scalar], eps: Laurent, order: int) -> Laurent:
    """``sum(coeffs[k] * eps**k)`` truncated at exponent ``order``."""
    acc = Laurent.const(coeffs[-1])
    for c in reversed(coeffs[:-1]):
        acc = acc.mul(eps, cap=order) + Laurent.const(c)
    return acc.truncate(_min_trunc(order, acc.trunc))


def taylor_compose(coeff: Callable[[int], Scalar], eps: Laurent, order: int) -> Laurent:
    """Compose a power series ``sum coeff(k) t**k`` with ``t = eps``.

    ``eps`` must be infinitesimal (every known exponent >= 1).  Terms are kept
    up to exponent ``order``; the result inherits ``eps``'s unknown tail.
    """
    if eps.is_zero():
        return Laurent.const(coeff(0))
    lb = eps.lower_bound()
    if lb < 1:
        raise ValueError("taylor_compose needs an infinitesimal argument")
    if not eps.terms:
        # bare O(del**(trunc+1)) argument: only the constant survives
        return Laurent.const(coeff(0)).truncate(_min_trunc(order, eps.trunc))
    kmax = max(0, order // int(lb))
    coeffs = [coeff(k) for k in range(kmax + 1)]
    result = horner(coeffs, eps, order)
    return result.truncate(_min_trunc(order, eps.trunc, result.trunc))


def geometric_inverse(r: Laurent, order: int) -> Laurent:
    """``1/(1 + r)`` for infinitesimal ``r``."""
    return taylor_compose(lambda k: Fraction((-1) ** k), r, order)
