"""The classified derivations of D^1(R^n), S(R^n) and D(R^n).

Three families, each a frozen record with an ``apply`` method:

* ``D1Derivation``:  X + f  ->  [Y, X + f] + kappa f + lambda div X + w(X)
* ``SDerivation``:   S      ->  {P, S} + kappa Deg(S) + w^v(S)
* ``DDerivation``:   D      ->  [P, D] + [D, h],   dh = w

Pairs (P, w) and (P + h, w + dh) define the same S- or D-derivation; the
normalized representative has P vanishing on the zero section (resp. on
constants).
"""

import random
from dataclasses import dataclass, field

from .errors import DimensionError, PreconditionError
from .poly import SymbolPoly, multi_indices, zeros
from .scalar import Mode
from .symbols import (
    ClosedOneForm,
    deg_derivation,
    exact_form,
    poisson_bracket,
    potential,
    vertical_lift_apply,
)
from .weyl import (
    WeylOp,
    field_components,
    full_symbol,
    is_vector_field,
    quantize_standard,
    split_constant_part,
    symbol_class,
    vector_field,
    weyl_commutator,
)
from . import randgen


@dataclass(frozen=True)
class Divergence:
    """Divergence of the density e^g |dx|; ``weight`` is g (zero for the standard density)."""

    weight: SymbolPoly

    def __post_init__(self):
        if not self.weight.is_function():
            raise PreconditionError("density weight must be a function of x")

    @classmethod
    def standard(cls, dim, mode=Mode.EXACT):
        return cls(SymbolPoly.zero(dim, mode))

    @property
    def dim(self):
        return self.weight.dim

    def __call__(self, X):
        return divergence(self, X)

    def to_mode(self, mode):
        return Divergence(self.weight.to_mode(mode))


def divergence(div, X):
    """sum_i d_i X^i + X(g)."""
    comps = field_components(X)
    g = div.weight
    if g.dim != X.dim:
        raise DimensionError("dimension mismatch")
    out = SymbolPoly.zero(X.dim, X.mode)
    for i, c in enumerate(comps):
        out = out + c.dx(i) + c * g.dx(i)
    return out


def _as_vector_field(Y):
    if not is_vector_field(Y):
        raise PreconditionError("Y must be a vector field (order <= 1, Y(1) = 0)")
    return Y


@dataclass(frozen=True)
class D1Derivation:
    Y: WeylOp
    kappa: object = 0
    lam: object = 0
    omega: ClosedOneForm = None
    div: Divergence = None

    def __post_init__(self):
        _as_vector_field(self.Y)
        mode = self.Y.mode
        object.__setattr__(self, "kappa", mode.coerce(self.kappa))
        object.__setattr__(self, "lam", mode.coerce(self.lam))
        if self.omega is None:
            object.__setattr__(self, "omega", ClosedOneForm.zero(self.Y.dim, mode))
        if self.div is None:
            object.__setattr__(self, "div", Divergence.standard(self.Y.dim, mode))

    @property
    def dim(self):
        return self.Y.dim

    @property
    def mode(self):
        return self.Y.mode

    def apply(self, op):
        return apply_d1_derivation(self, op)

    __call__ = apply


def apply_d1_derivation(c, op):
    if op.order() > 1:
        raise PreconditionError("D1 derivations act on operators of order <= 1")
    f, X = split_constant_part(op)
    comps = field_components(X)
    value = c.omega.evaluate_on(comps)
    value = value + f.scale(c.kappa) + divergence(c.div, X).scale(c.lam)
    return weyl_commutator(c.Y, op) + WeylOp.from_function(value)


@dataclass(frozen=True)
class SDerivation:
    P: SymbolPoly
    kappa: object = 0
    omega: ClosedOneForm = None

    def __post_init__(self):
        object.__setattr__(self, "kappa", self.P.mode.coerce(self.kappa))
        if self.omega is None:
            object.__setattr__(self, "omega", ClosedOneForm.zero(self.P.dim, self.P.mode))

    @property
    def dim(self):
        return self.P.dim

    @property
    def mode(self):
        return self.P.mode

    def is_normalized(self):
        return self.P.homogeneous_part(0).is_zero()

    def apply(self, s):
        return apply_s_derivation(self, s)

    __call__ = apply


def apply_s_derivation(c, s):
    if s.dim != c.dim:
        raise DimensionError("dimension mismatch")
    return poisson_bracket(c.P, s) + deg_derivation(s).scale(c.kappa) + vertical_lift_apply(c.omega, s)


@dataclass(frozen=True)
class DDerivation:
    P: WeylOp
    omega: ClosedOneForm = None
    _h: SymbolPoly = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self.omega is None:
            object.__setattr__(self, "omega", ClosedOneForm.zero(self.P.dim, self.P.mode))
        object.__setattr__(self, "_h", potential(self.omega))

    @property
    def dim(self):
        return self.P.dim

    @property
    def mode(self):
        return self.P.mode

    @property
    def potential(self):
        return self._h

    def is_normalized(self):
        return split_constant_part(self.P)[0].is_zero()

    def respects_filtration(self):
        return self.P.order() <= 1

    def apply(self, d):
        return apply_d_derivation(self, d)

    __call__ = apply


def lowering_d(omega, d, h=None):
    """The order-lowering derivation of D attached to a closed form: d -> [d, h]."""
    h = potential(omega) if h is None else h
    return weyl_commutator(d, WeylOp.from_function(h))


def apply_d_derivation(c, d):
    if d.dim != c.dim:
        raise DimensionError("dimension mismatch")
    return weyl_commutator(c.P, d) + lowering_d(c.omega, d, c.potential)


def normalize_d_pair(P, omega):
    """The representative of (P, w) with P vanishing on constants.

    Equivalent pairs are (P + h, w + dh); taking h = -P(1) gives
    (P - P(1), w - d(P(1))).
    """
    h, rest = split_constant_part(P)
    return DDerivation(rest, omega - exact_form(h))


def normalize_s_pair(P, omega):
    """The representative of (P, w) with P vanishing on the zero section."""
    h = P.homogeneous_part(0)
    return SDerivation(P - h, 0, omega - exact_form(h))


def normalize_s(c):
    n = normalize_s_pair(c.P, c.omega)
    return SDerivation(n.P, c.kappa, n.omega)


def normalize_d(c):
    return normalize_d_pair(c.P, c.omega)


# algebra descriptions used by the property checks


def lie_bracket(algebra):
    if algebra == "S":
        return poisson_bracket
    if algebra in ("D", "D1"):
        return weyl_commutator
    raise ValueError(f"unknown algebra {algebra!r}")


def random_element(algebra, rng, dim, mode=Mode.EXACT):
    if algebra == "S":
        return randgen.random_symbol(rng, dim, mode=mode)
    if algebra == "D":
        return randgen.random_op(rng, dim, mode=mode)
    if algebra == "D1":
        return randgen.random_first_order(rng, dim, mode=mode)
    raise ValueError(f"unknown algebra {algebra!r}")


@dataclass
class DerivationReport:
    algebra: str
    trials: int
    seed: object
    failures: list
    failure_count: int = 0

    @property
    def passed(self):
        return not self.failures


def check_derivation_property(apply, algebra, trials, dim=2, seed=0, max_witnesses=5):
    """Test C[A, B] == [CA, B] + [A, CB] on random pairs, exactly.

    Failures are collected (up to ``max_witnesses``) rather than raised.
    """
    if trials < 1:
        raise ValueError("trials must be positive")
    rng = random.Random(seed)
    br = lie_bracket(algebra)
    failures = []
    nfail = 0
    for t in range(trials):
        a = random_element(algebra, rng, dim)
        b = random_element(algebra, rng, dim)
        lhs = apply(br(a, b))
        rhs = br(apply(a), b) + br(a, apply(b))
        if lhs != rhs:
            nfail += 1
            if len(failures) < max_witnesses:
                failures.append({"trial": t, "A": str(a), "B": str(b), "lhs": str(lhs), "rhs": str(rhs)})
    return DerivationReport(algebra, trials, seed, failures, nfail)


def square_map(s):
    """S -> S^2, a deliberately non-derivation used to exercise failure reporting."""
    return s * s


# parameter read-off from a black-box derivation


def _euler_reconstruct(partials, dim, mode):
    """P (without degree-0 part) from G_j = dP/dp_j, via sum_j p_j G_j = Deg_fiber(P)."""
    total = SymbolPoly.zero(dim, mode)
    for j, g in enumerate(partials):
        total = total + SymbolPoly.p(j, dim, mode) * g
    out = {}
    for (xa, pa), c in total._terms.items():
        d = sum(pa)
        out[(xa, pa)] = c / d
    return SymbolPoly._raw(dim, out, mode)


def read_off_s(C, dim, mode=Mode.EXACT):
    """Recover the normalized (P, kappa, w) of an S-derivation from its values."""
    one = SymbolPoly.const(1, dim, mode)
    kappa = -C(one).coeff(zeros(dim), zeros(dim))
    partials = []
    for j in range(dim):
        xj = SymbolPoly.x(j, dim, mode)
        # C(x_j) = {P, x_j} - kappa x_j and {P, x_j} = dP/dp_j
        partials.append(C(xj) + xj.scale(kappa))
    P = _euler_reconstruct(partials, dim, mode)
    comps = []
    for i in range(dim):
        pi = SymbolPoly.p(i, dim, mode)
        comps.append(C(pi) - poisson_bracket(P, pi))
    return SDerivation(P, kappa, ClosedOneForm(tuple(comps)))


def read_off_d(C, dim, mode=Mode.EXACT):
    """Recover the normalized (P, w) of a D-derivation from its values."""
    partials = []
    for j in range(dim):
        xj = WeylOp.x(j, dim, mode)
        # [P, x_j] has standard symbol dP/dp_j
        partials.append(full_symbol(C(xj)))
    P = quantize_standard(_euler_reconstruct(partials, dim, mode))
    comps = []
    for i in range(dim):
        di = WeylOp.d(i, dim, mode)
        rest = C(di) - weyl_commutator(P, di)
        f, X = split_constant_part(rest)
        if not X.is_zero():
            raise PreconditionError("map is not of the form [P, .] + lowering")
        comps.append(f)
    return DDerivation(P, ClosedOneForm(tuple(comps)))


def read_off_d1(C, div, dim, mode=Mode.EXACT):
    """Recover (Y, kappa, lambda, w) of a D1-derivation, successively from 1, x_j, and fields."""
    one = WeylOp.const(1, dim, mode)
    kappa = split_constant_part(C(one))[0].coeff(zeros(dim), zeros(dim))
    comps = []
    for j in range(dim):
        xj = WeylOp.x(j, dim, mode)
        # C(x_j) = Y(x_j) + kappa x_j
        f, _ = split_constant_part(C(xj))
        comps.append(f - SymbolPoly.x(j, dim, mode).scale(kappa))
    Y = vector_field(comps)

    def rest(X):
        return split_constant_part(C(X) - weyl_commutator(Y, X))[0]

    d0 = WeylOp.d(0, dim, mode)
    x0d0 = WeylOp.x(0, dim, mode) * d0
    lam_poly = rest(x0d0) - SymbolPoly.x(0, dim, mode) * rest(d0)
    lam = lam_poly.coeff(zeros(dim), zeros(dim))
    if lam_poly != SymbolPoly.const(lam, dim, mode):
        raise PreconditionError("map is not a D1 derivation: lambda is not constant")
    w = []
    for i in range(dim):
        di = WeylOp.d(i, dim, mode)
        w.append(rest(di) - div.weight.dx(i).scale(lam))
    return D1Derivation(Y, kappa, lam, ClosedOneForm(tuple(w)), div)


# the classical derivation induced by a filtration-respecting one


def induced_classical_derivation(c, s, section=None):
    """sigma_i(C(q(s))) for s homogeneous of fiber degree i.

    ``section`` is the quantization used to lift s (standard ordering by
    default); the result does not depend on it.
    """
    if not s.is_homogeneous():
        raise PreconditionError("symbol must be fiber-homogeneous")
    if not c.respects_filtration():
        raise PreconditionError("derivation does not respect the filtration (order(P) > 1)")
    i = s.fiber_degree() if not s.is_zero() else 0
    lift = (section or quantize_standard)(s)
    return symbol_class(c.apply(lift), i)


def monomial_basis_symbols(dim, max_pdeg, max_xdeg, mode=Mode.EXACT, pdeg=None):
    """Monomials x^a p^b with |a| <= max_xdeg and |b| <= max_pdeg (or |b| == pdeg)."""
    ps = multi_indices(dim, max_pdeg) if pdeg is None else multi_indices(dim, pdeg, pdeg)
    return [SymbolPoly.monomial(xa, pa, 1, mode) for pa in ps for xa in multi_indices(dim, max_xdeg)]

