"""Independent reference values computed with sympy.

Nothing here imports virtualcalc.  ``del`` is the symbol ``d`` and ``inf`` is
``1/d``, so a virtual expression becomes a Laurent expansion at ``d = 0``.
"""
import sympy as sp

d = sp.Symbol("d", positive=True)
x = sp.Symbol("x", real=True)
INF = 1 / d


def laurent(expr, order=8):
    """Coefficients ``{k: c}`` of ``expr`` in powers of ``d`` below ``d**order``."""
    ser = sp.series(sp.simplify(expr), d, 0, order).removeO()
    poly = sp.expand(ser)
    out = {}
    for term in sp.Add.make_args(poly):
        c, k = term.as_coeff_exponent(d)
        if c != 0:
            out[int(k)] = sp.Rational(c)
    return out


def valuation(expr, order=12):
    terms = laurent(expr, order)
    return min(terms) if terms else None


def limit_at_infinity(expr_in_n):
    n = sp.Symbol("n", positive=True)
    return sp.limit(expr_in_n.subs(x, n), n, sp.oo)


def definite(f, a, b):
    return sp.integrate(f, (x, a, b))


def arc_length(f, a, b):
    return sp.integrate(sp.sqrt(1 + sp.diff(f, x) ** 2), (x, a, b))


def surface(f, a, b):
    return sp.integrate(sp.simplify(2 * sp.pi * f * sp.sqrt(1 + sp.diff(f, x) ** 2)), (x, a, b))


def taylor_coefficients(f, x0, n):
    return [sp.diff(f, x, k).subs(x, x0) / sp.factorial(k) for k in range(n + 1)]
