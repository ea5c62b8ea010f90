"""Integration and differentiation along a time parameter.

Values are anything with ``scale`` and ``+`` (polynomials, operators,
1-forms).  Exact mode uses closed Newton-Cotes rules with rational weights,
which integrate polynomials of degree <= N exactly from N + 1 equispaced
samples; approximate mode uses 32-node Gauss-Legendre.
"""

from fractions import Fraction
from functools import lru_cache

import numpy as np

from .scalar import Mode

GAUSS_NODES = 32


def _poly_mul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _lagrange_basis(nodes, j):
    """Coefficients (ascending powers) of the j-th Lagrange basis polynomial."""
    coeffs = [Fraction(1)]
    denom = Fraction(1)
    for m, u in enumerate(nodes):
        if m != j:
            coeffs = _poly_mul(coeffs, [-u, Fraction(1)])
            denom *= nodes[j] - u
    return [c / denom for c in coeffs]


@lru_cache(maxsize=None)
def newton_cotes_weights(n):
    """Weights w_j with int_0^1 p = sum_j w_j p(j/n) for deg p <= n."""
    if n == 0:
        return (Fraction(1),)
    nodes = [Fraction(j, n) for j in range(n + 1)]
    weights = []
    for j in range(n + 1):
        basis = _lagrange_basis(nodes, j)
        weights.append(sum(c / (k + 1) for k, c in enumerate(basis)))
    return tuple(weights)


@lru_cache(maxsize=None)
def gauss_legendre(n=GAUSS_NODES):
    x, w = np.polynomial.legendre.leggauss(n)
    return tuple(float(v) for v in x), tuple(float(v) for v in w)


def lincomb(pairs):
    """sum of c * v over (c, v) pairs; pairs must be non-empty."""
    acc = None
    for c, v in pairs:
        term = v.scale(c)
        acc = term if acc is None else acc + term
    return acc


def integrate(fn, t, mode, degree=None):
    """int_0^t fn(s) ds.

    Exact mode needs ``degree``, an upper bound on the degree of fn in s; the
    rule is then exact.  Approximate mode ignores it.
    """
    if mode is Mode.EXACT:
        if degree is None:
            raise ValueError("exact integration needs a degree bound")
        t = Fraction(t)
        n = max(int(degree), 0)
        weights = newton_cotes_weights(n)
        if n == 0:
            return fn(Fraction(0)).scale(t)
        return lincomb((w * t, fn(t * Fraction(j, n))) for j, w in enumerate(weights))
    t = float(t)
    xs, ws = gauss_legendre()
    half = t / 2.0
    return lincomb((w * half, fn(half * (x + 1.0))) for x, w in zip(xs, ws))
