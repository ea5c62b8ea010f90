"""Differential operators with polynomial coefficients on R^n.

Operators are stored in normal order, ``sum c * x^b d^a`` with every
coordinate factor to the left of every derivation.  Composition restores
normal order with the Leibniz exchange

    d^a o x^b = sum_{m <= a} binom(a, m) (d^m x^b) d^(a - m).
"""

import itertools
import math

from .errors import DimensionError, PreconditionError
from .poly import SymbolPoly, TermMap, falling_factorial, unit, zeros
from .scalar import Mode, check_same_mode

#: order of the zero operator
ZERO_ORDER = -math.inf


class WeylOp(TermMap):
    """Normal-ordered differential operator; derivations print as ``d1..dn``."""

    __slots__ = ()

    _fiber_name = "d"

    @classmethod
    def d(cls, i, dim, mode=Mode.EXACT):
        if not 0 <= i < dim:
            raise DimensionError(f"axis {i} out of range for dim={dim}")
        return cls._raw(dim, {(zeros(dim), unit(dim, i)): mode.one}, mode)

    @classmethod
    def from_function(cls, f):
        """Multiplication by the function ``f`` (a fiber-free SymbolPoly)."""
        if not f.is_function():
            raise PreconditionError("multiplication operator needs a function of x")
        return cls._raw(f.dim, dict(f._terms), f.mode)

    def order(self):
        if not self._terms:
            return ZERO_ORDER
        return max(sum(a) for _, a in self._terms)

    def __mul__(self, other):
        return weyl_compose(self, self._lift(other))

    def __rmul__(self, other):
        return weyl_compose(self._lift(other), self)

    def __matmul__(self, other):
        return weyl_compose(self, other)

    def apply(self, g):
        """Apply to a polynomial function g of x (literal differentiation)."""
        if not g.is_function():
            raise PreconditionError("operators act on functions of x")
        self._check_fn(g)
        out = SymbolPoly.zero(self.dim, self.mode)
        for (xb, a), c in self._terms.items():
            h = g
            for i, e in enumerate(a):
                for _ in range(e):
                    h = h.dx(i)
                if h.is_zero():
                    break
            if h.is_zero():
                continue
            mono = SymbolPoly._raw(self.dim, {(xb, zeros(self.dim)): c}, self.mode)
            out = out + mono * h
        return out

    def _check_fn(self, g):
        if g.dim != self.dim:
            raise DimensionError("dimension mismatch")
        check_same_mode(self.mode, g.mode)


def _exchange(a, b):
    """Terms of d^a o x^b in normal order as (coefficient, x-index, d-index)."""
    per_axis = []
    for ai, bi in zip(a, b):
        opts = []
        for m in range(min(ai, bi) + 1):
            opts.append((math.comb(ai, m) * falling_factorial(bi, m), bi - m, ai - m))
        per_axis.append(opts)
    for combo in itertools.product(*per_axis):
        coef = 1
        for c, _, _ in combo:
            coef *= c
        yield coef, tuple(t[1] for t in combo), tuple(t[2] for t in combo)


def weyl_compose(a, b):
    """Operator composition a o b, returned in normal order."""
    a._check(b)
    out = {}
    for (xa, da), c in a._terms.items():
        for (xb, db), e in b._terms.items():
            ce = c * e
            for k, xm, dm in _exchange(da, xb):
                key = (tuple(p + q for p, q in zip(xa, xm)), tuple(p + q for p, q in zip(dm, db)))
                out[key] = out.get(key, 0) + ce * k
    return WeylOp._raw(a.dim, out, a.mode)


def weyl_commutator(a, b):
    return weyl_compose(a, b) - weyl_compose(b, a)


def full_symbol(d):
    """Standard-ordered total symbol: replace every d^a by p^a."""
    return SymbolPoly._raw(d.dim, dict(d._terms), d.mode)


def quantize_standard(s):
    """Standard-ordering quantization p^a -> d^a, coefficients on the left."""
    return WeylOp._raw(s.dim, dict(s._terms), s.mode)


def symbol_class(d, i):
    """Class of d in S_i = D^i / D^(i-1), for d of order <= i (zero allowed)."""
    if d.order() > i:
        raise PreconditionError(f"symbol of order {i} undefined for an operator of order {d.order()}")
    return full_symbol(d).homogeneous_part(i)


def symbol_of_order(d, i):
    """sigma_i(d): the principal symbol if i == order(d), zero if i > order(d)."""
    if d.is_zero():
        raise PreconditionError("the zero operator has no symbol")
    return symbol_class(d, i)


def principal_symbol(d):
    return symbol_of_order(d, d.order())


def conjugation(d):
    """C(d) = -d*, the formal adjoint against the standard density, negated.

    (x^b d^a)* = (-1)^|a| d^a o x^b.
    """
    out = WeylOp.zero(d.dim, d.mode)
    for (xb, a), c in d._terms.items():
        deriv = WeylOp._raw(d.dim, {(zeros(d.dim), a): c}, d.mode)
        coord = WeylOp._raw(d.dim, {(xb, zeros(d.dim)): d.mode.one}, d.mode)
        term = weyl_compose(deriv, coord)
        out = out + (term if sum(a) % 2 else -term)
    return out


def split_constant_part(d):
    """(d(1), d - d(1)): the function part and the part vanishing on constants."""
    f = {k: c for k, c in d._terms.items() if not any(k[1])}
    rest = {k: c for k, c in d._terms.items() if any(k[1])}
    return SymbolPoly._raw(d.dim, f, d.mode), WeylOp._raw(d.dim, rest, d.mode)


def is_vector_field(d):
    return d.order() <= 1 and not any(not any(k[1]) for k in d._terms)


def vector_field(components):
    """The operator sum_i X_i d_i from function components X_i."""
    n = len(components)
    mode = components[0].mode
    out = WeylOp.zero(n, mode)
    for i, c in enumerate(components):
        out = out + weyl_compose(WeylOp.from_function(c), WeylOp.d(i, n, mode))
    return out


def field_components(d):
    """Components X_i of a vector field X = sum_i X_i d_i."""
    if not is_vector_field(d):
        raise PreconditionError("not a vector field (order <= 1, vanishing on constants)")
    n = d.dim
    comps = []
    for i in range(n):
        e = unit(n, i)
        comps.append(SymbolPoly._raw(n, {(xb, zeros(n)): c for (xb, a), c in d._terms.items() if a == e}, d.mode))
    return comps
