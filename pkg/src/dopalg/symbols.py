"""The Poisson algebra of fiberwise-polynomial functions on T*R^n.

Sign convention: ``{a, b} = sum_i (da/dp_i * db/dx_i - da/dx_i * db/dp_i)``,
so that ``{p_j, x_i} = delta_ij``.  This is the convention under which the
principal symbol of a commutator equals the bracket of principal symbols;
changing it breaks that compatibility.
"""

from dataclasses import dataclass
from fractions import Fraction

from .errors import DimensionError, NotClosedError, PreconditionError
from .poly import SymbolPoly
from .scalar import Mode, check_same_mode

APPROX_CLOSED_TOL = 1e-8


def poisson_bracket(a, b):
    a._check(b)
    out = SymbolPoly.zero(a.dim, a.mode)
    for i in range(a.dim):
        out = out + a.dp(i) * b.dx(i) - a.dx(i) * b.dp(i)
    return out


def deg_derivation(s):
    """Scale each fiber-homogeneous part of degree i by (i - 1)."""
    return SymbolPoly._raw(
        s.dim, {k: c * (sum(k[1]) - 1) for k, c in s._terms.items()}, s.mode
    )


@dataclass(frozen=True)
class ClosedOneForm:
    """A closed 1-form sum_i w_i(x) dx_i with polynomial components.

    Closedness is checked on construction (exactly, or up to a small absolute
    tolerance for approximate data).
    """

    components: tuple

    def __post_init__(self):
        comps = tuple(self.components)
        object.__setattr__(self, "components", comps)
        if not comps:
            raise DimensionError("a 1-form needs at least one component")
        dim, mode = comps[0].dim, comps[0].mode
        for c in comps:
            if not isinstance(c, SymbolPoly):
                raise TypeError("components must be SymbolPoly")
            if c.dim != dim or len(comps) != dim:
                raise DimensionError("1-form components disagree with the dimension")
            check_same_mode(c.mode, mode)
            if not c.is_function():
                raise PreconditionError("1-form components must not depend on the fiber")
        defect = closedness_defect(comps)
        if defect is not None:
            raise NotClosedError(*defect)

    @property
    def dim(self):
        return self.components[0].dim

    @property
    def mode(self):
        return self.components[0].mode

    @classmethod
    def zero(cls, dim, mode=Mode.EXACT):
        return cls(tuple(SymbolPoly.zero(dim, mode) for _ in range(dim)))

    @classmethod
    def constant(cls, values, mode=Mode.EXACT):
        dim = len(values)
        return cls(tuple(SymbolPoly.const(v, dim, mode) for v in values))

    def __getitem__(self, i):
        return self.components[i]

    def __add__(self, other):
        if other.dim != self.dim:
            raise DimensionError("dimension mismatch")
        return ClosedOneForm(tuple(a + b for a, b in zip(self.components, other.components)))

    def __neg__(self):
        return ClosedOneForm(tuple(-a for a in self.components))

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        return ClosedOneForm(tuple(a.scale(c) for a in self.components))

    def is_zero(self):
        return all(c.is_zero() for c in self.components)

    def to_mode(self, mode):
        return ClosedOneForm(tuple(c.to_mode(mode) for c in self.components))

    def as_symbol(self):
        """The fiber-linear symbol sum_i w_i p_i."""
        out = SymbolPoly.zero(self.dim, self.mode)
        for i, w in enumerate(self.components):
            out = out + w * SymbolPoly.p(i, self.dim, self.mode)
        return out

    def evaluate_on(self, field_components):
        """w(X) for a vector field given by its components."""
        out = SymbolPoly.zero(self.dim, self.mode)
        for w, x in zip(self.components, field_components):
            out = out + w * x
        return out

    def max_abs_diff(self, other):
        return max(a.max_abs_diff(b) for a, b in zip(self.components, other.components))

    def __str__(self):
        parts = [f"({c})*dx{i + 1}" for i, c in enumerate(self.components) if not c.is_zero()]
        return " + ".join(parts) if parts else "0"


def closedness_defect(components):
    """First (i, j) with d_j w_i != d_i w_j, or None."""
    n = len(components)
    for i in range(n):
        for j in range(i + 1, n):
            lhs = components[i].dx(j)
            rhs = components[j].dx(i)
            if components[i].mode is Mode.EXACT:
                if lhs != rhs:
                    return (i, j)
            elif lhs.max_abs_diff(rhs) > APPROX_CLOSED_TOL:
                return (i, j)
    return None


def exact_form(h):
    """dh for a function h of x."""
    if not h.is_function():
        raise PreconditionError("exact_form needs a function of x only")
    return ClosedOneForm(tuple(h.dx(i) for i in range(h.dim)))


def vertical_lift_apply(w, s):
    """Action of the vertical lift of w: sum_i w_i(x) * ds/dp_i."""
    if w.dim != s.dim:
        raise DimensionError("dimension mismatch")
    out = SymbolPoly.zero(s.dim, s.mode)
    for i, wi in enumerate(w.components):
        out = out + wi * s.dp(i)
    return out


def potential(w):
    """The unique h with dh = w and h(0) = 0.

    Radial integration h(x) = int_0^1 sum_i w_i(tx) x_i dt, done termwise:
    a monomial of degree d in w_i contributes coefficient / (d + 1).
    Accepts a ClosedOneForm or a bare sequence of components; the latter is
    checked for closedness here.
    """
    comps = w.components if isinstance(w, ClosedOneForm) else tuple(w)
    defect = closedness_defect(comps)
    if defect is not None:
        raise NotClosedError(*defect)
    n, mode = comps[0].dim, comps[0].mode
    out = {}
    for i, wi in enumerate(comps):
        for (xa, pa), c in wi._terms.items():
            d = sum(xa)
            weight = Fraction(1, d + 1) if mode is Mode.EXACT else 1.0 / (d + 1)
            key = (xa[:i] + (xa[i] + 1,) + xa[i + 1:], pa)
            out[key] = out.get(key, 0) + c * weight
    return SymbolPoly._raw(n, out, mode)

