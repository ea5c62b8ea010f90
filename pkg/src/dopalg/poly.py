"""Polynomials in base coordinates x1..xn and fiber coordinates p1..pn.

A term is keyed by a pair of multi-indices ``(xa, pa)``; ``SymbolPoly`` reads
``pa`` as exponents of the commuting fiber variables, ``WeylOp`` (in
``weyl.py``) reads them as exponents of the derivations.  Both share the
storage and the linear structure defined here.
"""

import itertools
import math
from fractions import Fraction

from .errors import DimensionError, PreconditionError
from .scalar import Mode, check_same_mode, format_scalar


def zeros(n):
    return (0,) * n


def unit(n, i):
    return tuple(1 if k == i else 0 for k in range(n))


def add_index(a, b):
    return tuple(x + y for x, y in zip(a, b))


def multi_indices(n, max_total, min_total=0):
    """All multi-indices of length n with min_total <= |a| <= max_total."""
    out = []
    for total in range(min_total, max_total + 1):
        for combo in itertools.combinations_with_replacement(range(n), total):
            idx = [0] * n
            for k in combo:
                idx[k] += 1
            out.append(tuple(idx))
    return out


def _term_order(key):
    return key[0] + key[1]


class TermMap:
    """Immutable sparse map from ``(xa, pa)`` to nonzero scalars."""

    __slots__ = ("dim", "mode", "_terms", "_hash")

    _fiber_name = "p"

    def __init__(self, dim, terms=None, mode=Mode.EXACT):
        if dim < 1:
            raise DimensionError("dimension must be at least 1")
        self.dim = dim
        self.mode = mode
        clean = {}
        if terms:
            for (xa, pa), c in terms.items():
                xa, pa = tuple(xa), tuple(pa)
                if len(xa) != dim or len(pa) != dim:
                    raise DimensionError(f"multi-index length differs from dim={dim}")
                c = mode.coerce(c)
                if c != 0:
                    clean[(xa, pa)] = c
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, dim, terms, mode):
        # trusted constructor: keys are tuples, values already coerced
        obj = cls.__new__(cls)
        obj.dim = dim
        obj.mode = mode
        obj._terms = {k: v for k, v in terms.items() if v != 0}
        obj._hash = None
        return obj

    # construction helpers

    @classmethod
    def zero(cls, dim, mode=Mode.EXACT):
        if dim < 1:
            raise DimensionError("dimension must be at least 1")
        return cls._raw(dim, {}, mode)

    @classmethod
    def const(cls, c, dim, mode=Mode.EXACT):
        return cls._raw(dim, {(zeros(dim), zeros(dim)): mode.coerce(c)}, mode)

    @classmethod
    def monomial(cls, xa, pa, c=1, mode=Mode.EXACT):
        return cls(len(xa), {(tuple(xa), tuple(pa)): c}, mode)

    @classmethod
    def x(cls, i, dim, mode=Mode.EXACT):
        """The coordinate function x^(i+1) (0-based axis)."""
        if not 0 <= i < dim:
            raise DimensionError(f"axis {i} out of range for dim={dim}")
        return cls._raw(dim, {(unit(dim, i), zeros(dim)): mode.one}, mode)

    # basic protocol

    def items(self):
        """Terms in canonical order (descending lexicographic on xa + pa)."""
        return sorted(self._terms.items(), key=lambda kv: _term_order(kv[0]), reverse=True)

    def keys(self):
        return self._terms.keys()

    def coeff(self, xa, pa):
        return self._terms.get((tuple(xa), tuple(pa)), self.mode.zero)

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self):
        return not self._terms

    def __eq__(self, other):
        if type(other) is not type(self):
            if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
                return self == type(self).const(other, self.dim, self.mode)
            return NotImplemented
        return self.dim == other.dim and self.mode is other.mode and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((type(self).__name__, self.dim, self.mode, frozenset(self._terms.items())))
        return self._hash

    def _check(self, other):
        if type(other) is not type(self):
            raise TypeError(f"cannot combine {type(self).__name__} with {type(other).__name__}")
        if other.dim != self.dim:
            raise DimensionError(f"dimension mismatch: {self.dim} vs {other.dim}")
        check_same_mode(self.mode, other.mode)

    def _lift(self, other):
        if isinstance(other, TermMap):
            return other
        return type(self).const(other, self.dim, self.mode)

    def __add__(self, other):
        other = self._lift(other)
        self._check(other)
        out = dict(self._terms)
        for k, c in other._terms.items():
            out[k] = out.get(k, 0) + c
        return type(self)._raw(self.dim, out, self.mode)

    __radd__ = __add__

    def __neg__(self):
        return type(self)._raw(self.dim, {k: -c for k, c in self._terms.items()}, self.mode)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def scale(self, c):
        c = self.mode.coerce(c)
        if c == 0:
            return type(self).zero(self.dim, self.mode)
        return type(self)._raw(self.dim, {k: v * c for k, v in self._terms.items()}, self.mode)

    def map_coeffs(self, fn, mode=None):
        mode = mode or self.mode
        return type(self)(self.dim, {k: fn(v) for k, v in self._terms.items()}, mode)

    def to_mode(self, mode):
        if mode is self.mode:
            return self
        if mode is Mode.APPROX:
            return type(self)._raw(self.dim, {k: float(v) for k, v in self._terms.items()}, mode)
        raise PreconditionError("refusing to convert approximate data to exact mode")

    # gradings

    def fiber_degree(self):
        """Largest |pa| over stored terms, or None for zero."""
        if not self._terms:
            return None
        return max(sum(pa) for _, pa in self._terms)

    def base_degree(self):
        if not self._terms:
            return None
        return max(sum(xa) for xa, _ in self._terms)

    def fiber_degrees(self):
        return sorted({sum(pa) for _, pa in self._terms})

    def homogeneous_part(self, i):
        return type(self)._raw(self.dim, {k: c for k, c in self._terms.items() if sum(k[1]) == i}, self.mode)

    def is_homogeneous(self, i=None):
        degs = self.fiber_degrees()
        if not degs:
            return True
        return len(degs) == 1 and (i is None or degs[0] == i)

    def is_function(self):
        """True when no fiber variable (or derivation) occurs."""
        return all(not any(pa) for _, pa in self._terms)

    # comparison helpers for approximate data

    def max_abs_diff(self, other):
        self._check(other)
        keys = set(self._terms) | set(other._terms)
        if not keys:
            return 0.0
        return max(abs(float(self._terms.get(k, 0)) - float(other._terms.get(k, 0))) for k in keys)

    def allclose(self, other, tol):
        return self.max_abs_diff(other) <= tol

    # printing

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for i, ((xa, pa), c) in enumerate(self.items()):
            mono = _monomial_text(xa, pa, self._fiber_name)
            neg = c < 0
            mag = -c if neg else c
            if mono and mag == 1:
                body = mono
            elif mono:
                body = f"{format_scalar(mag)}*{mono}"
            else:
                body = format_scalar(mag)
            if i == 0:
                parts.append(f"-{body}" if neg else body)
            else:
                parts.append(f" - {body}" if neg else f" + {body}")
        return "".join(parts)

    def __repr__(self):
        return f"{type(self).__name__}({str(self)!r}, dim={self.dim})"


def _monomial_text(xa, pa, fiber):
    factors = []
    for name, idx in (("x", xa), (fiber, pa)):
        for i, e in enumerate(idx):
            if e == 1:
                factors.append(f"{name}{i + 1}")
            elif e > 1:
                factors.append(f"{name}{i + 1}^{e}")
    return "*".join(factors)


class SymbolPoly(TermMap):
    """Polynomial function on the cotangent bundle of R^n.

    Fiber variables are printed ``p1..pn``.  Grading is the fiber degree.
    """

    __slots__ = ()

    @classmethod
    def p(cls, i, dim, mode=Mode.EXACT):
        """The fiber coordinate p_(i+1)."""
        if not 0 <= i < dim:
            raise DimensionError(f"axis {i} out of range for dim={dim}")
        return cls._raw(dim, {(zeros(dim), unit(dim, i)): mode.one}, mode)

    def __mul__(self, other):
        other = self._lift(other)
        self._check(other)
        out = {}
        for (xa, pa), c in self._terms.items():
            for (xb, pb), d in other._terms.items():
                k = (add_index(xa, xb), add_index(pa, pb))
                out[k] = out.get(k, 0) + c * d
        return SymbolPoly._raw(self.dim, out, self.mode)

    __rmul__ = __mul__

    def __pow__(self, e):
        if not isinstance(e, int) or e < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = SymbolPoly.const(1, self.dim, self.mode)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def diff(self, which, i):
        """Partial derivative along x_(i+1) (``which='x'``) or p_(i+1) (``'p'``)."""
        if not 0 <= i < self.dim:
            raise DimensionError(f"axis {i} out of range for dim={self.dim}")
        slot = {"x": 0, "p": 1}[which]
        out = {}
        for key, c in self._terms.items():
            idx = key[slot]
            e = idx[i]
            if e == 0:
                continue
            lowered = idx[:i] + (e - 1,) + idx[i + 1:]
            k = (lowered, key[1]) if slot == 0 else (key[0], lowered)
            out[k] = out.get(k, 0) + c * e
        return SymbolPoly._raw(self.dim, out, self.mode)

    def dx(self, i):
        return self.diff("x", i)

    def dp(self, i):
        return self.diff("p", i)

    def substitute(self, x_images=None, p_images=None):
        """Compose with a polynomial map: x_i -> x_images[i], p_i -> p_images[i].

        Images default to the identity.  All images must share one dimension
        and mode, which become those of the result.
        """
        n = self.dim
        xs = list(x_images) if x_images is not None else [SymbolPoly.x(i, n, self.mode) for i in range(n)]
        ps = list(p_images) if p_images is not None else [SymbolPoly.p(i, n, self.mode) for i in range(n)]
        if len(xs) != n or len(ps) != n:
            raise DimensionError("need one image per variable")
        ref = xs[0] if xs else ps[0]
        dim, mode = ref.dim, ref.mode
        for img in xs + ps:
            if img.dim != dim:
                raise DimensionError("substitution images disagree in dimension")
            check_same_mode(img.mode, mode)
        check_same_mode(self.mode, mode)
        xpow = [_PowerCache(img) for img in xs]
        ppow = [_PowerCache(img) for img in ps]
        acc = {}
        for (xa, pa), c in self._terms.items():
            term = SymbolPoly.const(c, dim, mode)
            for i, e in enumerate(xa):
                if e:
                    term = term * xpow[i].get(e)
            for i, e in enumerate(pa):
                if e:
                    term = term * ppow[i].get(e)
            for k, v in term._terms.items():
                acc[k] = acc.get(k, 0) + v
        return SymbolPoly._raw(dim, acc, mode)

    def evaluate(self, x, p=None):
        """Numeric value at a point; ``p`` defaults to the zero covector."""
        p = p if p is not None else [0] * self.dim
        total = self.mode.zero
        for (xa, pa), c in self._terms.items():
            v = c
            for xi, e in zip(x, xa):
                v = v * xi ** e
            for pi, e in zip(p, pa):
                v = v * pi ** e
            total += v
        return total


class _PowerCache:
    def __init__(self, base):
        self.base = base
        self.cache = {1: base}

    def get(self, e):
        if e not in self.cache:
            half = self.get(e // 2)
            sq = half * half
            self.cache[e] = sq * self.base if e % 2 else sq
        return self.cache[e]


def falling_factorial(n, k):
    if k > n:
        return 0
    return math.perm(n, k)
