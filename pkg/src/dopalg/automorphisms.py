"""Automorphisms of D^1, S and D in normal form, and the one-parameter groups
generated by the classified derivations.

Normal forms (phi affine, A its matrix):

* D^1:  X + f  ->  phi_* X + (K f + Lambda div X + Omega(X)) o phi^-1
* S:    S      ->  K^-1 S o T_Omega o h_K o lift(phi^-1)
* D:    D      ->  phi_* (C^a (e^Omega-bar D))

where lift(phi^-1)(x, p) = (phi^-1 x, A^T p), h_K(x, p) = (x, K p),
T_Omega(x, p) = (x, p + Omega(x)), and e^Omega-bar is the finite exponential
of the order-lowering derivation.

Orientation of the base flow: with the push-forward (phi_* X)(f) =
(X(f o phi)) o phi^-1, the family (Exp(tY))_* has derivative -[Y, .] at t = 0.
So the group generated by a derivation with field Y uses phi_t = Exp(-tY);
this is what makes d/dt Phi_t at 0 equal the derivation.  The same holds for
the hamiltonian field of P on S and for P on D.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .derivations import (
    D1Derivation,
    DDerivation,
    Divergence,
    SDerivation,
    divergence,
    normalize_d,
    normalize_s,
)
from .errors import DimensionError, ExactnessUnavailable, PreconditionError
from .flows import AffineMap, FlowField, flow_at, jacobian_cocycle, pushforward_vector
from .poly import SymbolPoly
from .quadrature import integrate, lincomb
from .scalar import Mode, format_scalar
from .symbols import ClosedOneForm, potential, vertical_lift_apply
from .weyl import (
    WeylOp,
    conjugation,
    field_components,
    full_symbol,
    quantize_standard,
    split_constant_part,
    vector_field,
    weyl_commutator,
)


# maps of the cotangent bundle acting on symbols by composition


@dataclass(frozen=True)
class PhaseMap:
    """A polynomial map of T*R^n given by the images of x_i and p_i."""

    x_images: tuple
    p_images: tuple

    @property
    def dim(self):
        return len(self.x_images)

    @classmethod
    def identity(cls, dim, mode=Mode.EXACT):
        return cls(tuple(SymbolPoly.x(i, dim, mode) for i in range(dim)),
                   tuple(SymbolPoly.p(i, dim, mode) for i in range(dim)))

    def pull(self, s):
        """s o self."""
        return s.substitute(self.x_images, self.p_images)

    def compose(self, other):
        """self o other."""
        return PhaseMap(tuple(other.pull(c) for c in self.x_images),
                        tuple(other.pull(c) for c in self.p_images))

    __matmul__ = compose


def homothety(K, dim, mode=Mode.EXACT):
    """h_K: (x, p) -> (x, K p)."""
    K = mode.coerce(K)
    return PhaseMap(tuple(SymbolPoly.x(i, dim, mode) for i in range(dim)),
                    tuple(SymbolPoly.p(i, dim, mode).scale(K) for i in range(dim)))


def translation(omega):
    """T_Omega: (x, p) -> (x, p + Omega(x))."""
    n, mode = omega.dim, omega.mode
    return PhaseMap(tuple(SymbolPoly.x(i, n, mode) for i in range(n)),
                    tuple(SymbolPoly.p(i, n, mode) + omega[i] for i in range(n)))


def phase_lift(phi):
    """Cotangent lift of phi: (x, p) -> (phi(x), A^-T p)."""
    inv = phi.inverse()
    return _lift_with(phi, inv.A)


def _lift_with(base, fiber_matrix_t):
    # (x, p) -> (base(x), M^T p) where fiber_matrix_t = M
    n, mode = base.dim, base.mode
    ps = [SymbolPoly.p(j, n, mode) for j in range(n)]
    xs = tuple(base.pull(SymbolPoly.x(i, n, mode)) for i in range(n))
    pimg = []
    for i in range(n):
        acc = SymbolPoly.zero(n, mode)
        for j in range(n):
            if fiber_matrix_t[j][i] != 0:
                acc = acc + ps[j].scale(fiber_matrix_t[j][i])
        pimg.append(acc)
    return PhaseMap(xs, tuple(pimg))


# finite exponentials of lowering derivations


def exp_lowering_s(omega, s):
    """e^{w^v} S = sum_k (w^v)^k S / k!, finite since w^v lowers fiber degree."""
    acc = s
    term = s
    k = 1
    while True:
        term = vertical_lift_apply(omega, term)
        if term.is_zero():
            return acc
        term = term.scale(_recip(k, s.mode))
        acc = acc + term
        k += 1


def exp_lowering_d(omega, d, h=None):
    """e^{w-bar} D = sum_k w-bar^k D / k! with w-bar D = [D, h], dh = w."""
    h = potential(omega) if h is None else h
    hop = WeylOp.from_function(h)
    acc = d
    term = d
    k = 1
    while True:
        term = weyl_commutator(term, hop)
        if term.is_zero():
            return acc
        term = term.scale(_recip(k, d.mode))
        acc = acc + term
        k += 1


def _recip(k, mode):
    return Fraction(1, k) if mode is Mode.EXACT else 1.0 / k


def pushforward_op(phi, d):
    """phi_* D = phi o D o phi^-1: coefficients a o phi^-1, d_i -> sum_j A_ji d_j.

    Both substitutions keep coordinates left of derivatives, so they can be
    done on the standard symbol.
    """
    lift = _lift_with(phi.inverse(), phi.A)
    return quantize_standard(lift.pull(full_symbol(d)))


# descriptors


@dataclass(frozen=True)
class AutD1Descriptor:
    phi: AffineMap
    K: object = 1
    Lambda: object = 0
    Omega: ClosedOneForm = None
    div: Divergence = None

    def __post_init__(self):
        mode = self.phi.mode
        object.__setattr__(self, "K", mode.coerce(self.K))
        object.__setattr__(self, "Lambda", mode.coerce(self.Lambda))
        if self.K == 0:
            raise PreconditionError("K must be nonzero")
        if self.Omega is None:
            object.__setattr__(self, "Omega", ClosedOneForm.zero(self.phi.dim, mode))
        if self.div is None:
            object.__setattr__(self, "div", Divergence.standard(self.phi.dim, mode))

    def apply(self, op):
        return apply_aut_d1(self, op)

    __call__ = apply

    def compose(self, other):
        """self o other as a descriptor."""
        psi = other.phi
        ddiv = jacobian_cocycle(psi, self.div).log().differential()
        omega = other.Omega.scale(self.K) + psi.pull_form(self.Omega) + ddiv.scale(self.Lambda)
        return AutD1Descriptor(self.phi @ psi, self.K * other.K, self.Lambda + self.K * other.Lambda, omega, self.div)

    def __str__(self):
        return (f"phi = {self.phi}; K = {format_scalar(self.K)}; Lambda = {format_scalar(self.Lambda)}; "
                f"Omega = {self.Omega}")


def apply_aut_d1(a, op):
    if op.order() > 1:
        raise PreconditionError("D1 automorphisms act on operators of order <= 1")
    if op.dim != a.phi.dim:
        raise DimensionError("dimension mismatch")
    f, X = split_constant_part(op)
    value = f.scale(a.K) + divergence(a.div, X).scale(a.Lambda) + a.Omega.evaluate_on(field_components(X))
    return pushforward_vector(a.phi, X) + WeylOp.from_function(a.phi.push(value))


@dataclass(frozen=True)
class AutSDescriptor:
    phi: AffineMap
    K: object = 1
    Omega: ClosedOneForm = None

    def __post_init__(self):
        object.__setattr__(self, "K", self.phi.mode.coerce(self.K))
        if self.K == 0:
            raise PreconditionError("K must be nonzero")
        if self.Omega is None:
            object.__setattr__(self, "Omega", ClosedOneForm.zero(self.phi.dim, self.phi.mode))

    def phase_map(self):
        """T_Omega o h_K o lift(phi^-1) as a single map of T*R^n."""
        inv = self.phi.inverse()
        return translation(self.Omega) @ homothety(self.K, self.phi.dim, self.phi.mode) @ _lift_with(inv, self.phi.A)

    def apply(self, s):
        return apply_aut_s(self, s)

    __call__ = apply

    def compose(self, other):
        omega = other.Omega + other.phi.pull_form(self.Omega).scale(other.K)
        return AutSDescriptor(self.phi @ other.phi, self.K * other.K, omega)

    def __str__(self):
        return f"phi = {self.phi}; K = {format_scalar(self.K)}; Omega = {self.Omega}"


def apply_aut_s(a, s):
    if s.dim != a.phi.dim:
        raise DimensionError("dimension mismatch")
    inv = a.phi.inverse()
    n, mode = s.dim, s.mode
    xs = [inv.pull(SymbolPoly.x(i, n, mode)) for i in range(n)]
    ps = []
    for i in range(n):
        acc = inv.pull(a.Omega[i])
        for j in range(n):
            if a.phi.A[j][i] != 0:
                acc = acc + SymbolPoly.p(j, n, mode).scale(a.K * a.phi.A[j][i])
        ps.append(acc)
    return s.substitute(xs, ps).scale(1 / a.K)


@dataclass(frozen=True)
class AutDDescriptor:
    phi: AffineMap
    Omega: ClosedOneForm = None
    conj: bool = False
    _h: SymbolPoly = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self.Omega is None:
            object.__setattr__(self, "Omega", ClosedOneForm.zero(self.phi.dim, self.phi.mode))
        object.__setattr__(self, "_h", potential(self.Omega))

    def apply(self, d):
        return apply_aut_d(self, d)

    __call__ = apply

    def compose(self, other):
        if self.conj or other.conj:
            raise PreconditionError("descriptor composition is implemented for the identity component only")
        return AutDDescriptor(self.phi @ other.phi, other.phi.pull_form(self.Omega) + other.Omega)

    def __str__(self):
        return f"phi = {self.phi}; Omega = {self.Omega}; conj = {str(self.conj).lower()}"


def apply_aut_d(a, d):
    if d.dim != a.phi.dim:
        raise DimensionError("dimension mismatch")
    out = exp_lowering_d(a.Omega, d, a._h)
    if a.conj:
        out = conjugation(out)
    return pushforward_op(a.phi, out)


# one-parameter groups


@dataclass(frozen=True)
class NotIntegrable:
    """The derivation generates no one-parameter group; ``reason`` says which criterion fails."""

    family: str
    reason: str

    def __str__(self):
        return f"NotIntegrable: {self.reason}"


def _mode_of(c, mode):
    mode = c.mode if mode is None else mode
    if mode is Mode.EXACT and c.mode is Mode.APPROX:
        raise ExactnessUnavailable("exact group requested for approximate data")
    return mode


def derivation_to_mode(c, mode):
    """Copy of a derivation record with approximate data (exact stays exact)."""
    if mode is Mode.EXACT or c.mode is Mode.APPROX:
        return c
    if isinstance(c, D1Derivation):
        return D1Derivation(c.Y.to_mode(mode), float(c.kappa), float(c.lam), c.omega.to_mode(mode), c.div.to_mode(mode))
    if isinstance(c, SDerivation):
        return SDerivation(c.P.to_mode(mode), float(c.kappa), c.omega.to_mode(mode))
    return DDerivation(c.P.to_mode(mode), c.omega.to_mode(mode))


def _scalar_exp(kappa, t, mode):
    if kappa == 0:
        return mode.one
    if mode is Mode.EXACT:
        raise ExactnessUnavailable("e^(kappa t) is irrational for kappa != 0; use approximate mode")
    return math.exp(float(kappa) * float(t))


def _integrand_degree(Y, *polys):
    q = Y.flow_degree()
    if q is None:
        raise ExactnessUnavailable("exact group needs a nilpotent (polynomial) flow")
    top = max([p.base_degree() or 0 for p in polys] + [0])
    return q * (top + 1)


def one_param_group_d1(c, t, mode=None, kappa_factor=1):
    """Phi_t generated by C_{Y, kappa, lambda, w}, with phi_t = Exp(-tY).

    K_t = e^{kappa t}, Lambda_t = lambda (e^{kappa t} - 1)/kappa (= lambda t
    for kappa = 0), Omega_t = int_0^t e^{kappa (t-s)} (lambda d Div(phi_s) +
    phi_s^* w) ds.  ``kappa_factor`` deliberately distorts K_t (testing only).
    """
    mode = _mode_of(c, mode)
    c = derivation_to_mode(c, mode)
    flow = -FlowField.from_vector_field(c.Y)
    kappa = c.kappa
    if mode is Mode.EXACT and kappa != 0:
        raise ExactnessUnavailable("exact groups need kappa = 0")
    t = mode.coerce(t)
    K = _scalar_exp(kappa * kappa_factor, t, mode)
    Lam = c.lam * t if kappa == 0 else c.lam * (math.exp(float(kappa) * t) - 1.0) / float(kappa)

    def integrand(s):
        phi_s = flow_at(flow, s, mode)
        form = phi_s.pull_form(c.omega)
        if c.lam != 0:
            form = form + jacobian_cocycle(phi_s, c.div).log().differential().scale(c.lam)
        if kappa != 0:
            form = form.scale(math.exp(float(kappa) * (t - s)))
        return form

    degree = _integrand_degree(flow, c.div.weight, *c.omega.components) if mode is Mode.EXACT else None
    omega_t = integrate(integrand, t, mode, degree)
    return AutD1Descriptor(flow_at(flow, t, mode), K, Lam, omega_t, c.div)


def one_param_group_s(c, t, mode=None, kappa_factor=1):
    """Phi_t generated by C_{P, kappa, w}; NotIntegrable unless P lies in S_1.

    phi_t = Exp(-t P_*), K_t = e^{kappa t}, Omega_t = int_0^t e^{kappa s} phi_s^* w ds.
    """
    mode = _mode_of(c, mode)
    c = normalize_s(derivation_to_mode(c, mode))
    if any(k != 1 for k in c.P.fiber_degrees()):
        return NotIntegrable("s", "P not in S_1")
    comps = [SymbolPoly._raw(c.dim, {(xa, tuple(0 for _ in pa)): v for (xa, pa), v in c.P.items() if pa[i] == 1},
                             c.mode) for i in range(c.dim)]
    flow = -FlowField.from_vector_field(vector_field(comps))
    kappa = c.kappa
    if mode is Mode.EXACT and kappa != 0:
        raise ExactnessUnavailable("exact groups need kappa = 0")
    t = mode.coerce(t)
    K = _scalar_exp(kappa * kappa_factor, t, mode)

    def integrand(s):
        form = flow_at(flow, s, mode).pull_form(c.omega)
        if kappa != 0:
            form = form.scale(math.exp(float(kappa) * s))
        return form

    degree = _integrand_degree(flow, *c.omega.components) if mode is Mode.EXACT else None
    omega_t = integrate(integrand, t, mode, degree)
    return AutSDescriptor(flow_at(flow, t, mode), K, omega_t)


def one_param_group_d(c, t, mode=None):
    """Phi_t generated by C_{P, w}; NotIntegrable unless P is a vector field.

    phi_t = Exp(-tP), Omega_t = int_0^t phi_s^* w ds.
    """
    mode = _mode_of(c, mode)
    c = normalize_d(derivation_to_mode(c, mode))
    if c.P.order() > 1:
        return NotIntegrable("d", "P not in X (order > 1)")
    flow = -FlowField.from_vector_field(c.P)
    t = mode.coerce(t)
    degree = _integrand_degree(flow, *c.omega.components) if mode is Mode.EXACT else None
    omega_t = integrate(lambda s: flow_at(flow, s, mode).pull_form(c.omega), t, mode, degree)
    return AutDDescriptor(flow_at(flow, t, mode), omega_t)


def one_param_group(c, t, mode=None, **kw):
    if isinstance(c, D1Derivation):
        return one_param_group_d1(c, t, mode, **kw)
    if isinstance(c, SDerivation):
        return one_param_group_s(c, t, mode, **kw)
    return one_param_group_d(c, t, mode)


def d1_group_display(c, t, op, mode=None):
    """Phi_t(X + f) evaluated term by term from the closed display.

    The Omega-part is read as int_0^t e^{kappa(t-s)} (lambda int_0^s
    X((div Z) o Exp(uZ)) du + (phi_s^* w)(X)) ds with Z = -Y, i.e. the 1-form
    is evaluated on X inside the integral.  Used to cross-check the 1-form
    route of one_param_group_d1.
    """
    mode = _mode_of(c, mode)
    c = derivation_to_mode(c, mode)
    op = op.to_mode(mode) if mode is Mode.APPROX else op
    if mode is Mode.EXACT and c.kappa != 0:
        raise ExactnessUnavailable("exact groups need kappa = 0")
    flow = -FlowField.from_vector_field(c.Y)
    kappa = float(c.kappa) if mode is Mode.APPROX else c.kappa
    t = mode.coerce(t)
    f, X = split_constant_part(op)
    xcomps = field_components(X)
    divz = divergence(c.div, flow.vector_field())
    degree = None
    if mode is Mode.EXACT:
        degree = _integrand_degree(flow, divz, c.div.weight, *c.omega.components) + 2

    def apply_x(g):
        out = SymbolPoly.zero(op.dim, mode)
        for i, xc in enumerate(xcomps):
            out = out + xc * g.dx(i)
        return out

    def inner(s):
        val = integrate(lambda u: apply_x(flow_at(flow, u, mode).pull(divz)), s, mode, degree)
        return val.scale(c.lam)

    def outer(s):
        val = flow_at(flow, s, mode).pull_form(c.omega).evaluate_on(xcomps)
        if c.lam != 0:
            val = val + inner(s)
        if kappa != 0:
            val = val.scale(math.exp(kappa * (t - s)))
        return val

    phi_t = flow_at(flow, t, mode)
    K = _scalar_exp(kappa, t, mode)
    Lam = c.lam * t if kappa == 0 else c.lam * (math.exp(kappa * t) - 1.0) / kappa
    value = f.scale(K) + divergence(c.div, X).scale(Lam) + integrate(outer, t, mode, degree)
    return pushforward_vector(phi_t, X) + WeylOp.from_function(phi_t.push(value))


# generator check


@dataclass
class GeneratorReport:
    regime: str
    probes: int
    failures: list
    passed: bool = field(init=False)

    def __post_init__(self):
        self.passed = not self.failures


def _exact_t_derivative(value_at, limit=128):
    """Literal t-coefficient of a polynomial t -> value_at(t).

    Samples t = 0, 1, 2, ... and grows the forward-difference table until the
    two newest differences at 0 and the newest one at 1 all vanish; then
    p'(0) = sum_k (-1)^(k+1) Delta^k p(0) / k.
    """
    diag = []  # diag[k] = Delta^k p(N - k) for the latest sample N
    at_zero = []  # Delta^k p(0)
    at_one = []  # Delta^k p(1)
    for n in range(limit + 1):
        row = [value_at(Fraction(n))]
        for k in range(len(diag)):
            row.append(row[k] - diag[k])
        diag = row
        at_zero.append(row[n])
        if n >= 1:
            at_one.append(row[n - 1])
        if n >= 3 and at_zero[-1].is_zero() and at_zero[-2].is_zero() and at_one[-1].is_zero():
            return lincomb((Fraction((-1) ** (k + 1), k), at_zero[k]) for k in range(1, n + 1))
    raise ExactnessUnavailable("group action does not look polynomial in t")


def generator_check(family, derivation, probes, regime="exact", h=1e-5, tol=1e-6, max_witnesses=5):
    """Compare d/dt Phi_t(probe) at t = 0 with derivation(probe).

    ``family`` maps t to an automorphism (anything with ``apply``).  In the
    exact regime the t-coefficient is computed literally; in the approximate
    regime by a central difference of step h.
    """
    failures = []
    descriptors = {}

    def at(t):
        if t not in descriptors:
            descriptors[t] = family(t)
        return descriptors[t]

    for idx, probe in enumerate(probes):
        expected = derivation(probe)
        if regime == "exact":
            got = _exact_t_derivative(lambda t: at(t).apply(probe))
            ok = got == expected
            err = None if ok else "mismatch"
        elif regime == "approx":
            got = (at(h).apply(probe) - at(-h).apply(probe)).scale(1.0 / (2.0 * h))
            err = got.max_abs_diff(expected)
            ok = err <= tol
        else:
            raise ValueError(f"unknown regime {regime!r}")
        if not ok and len(failures) < max_witnesses:
            failures.append({"probe": str(probe), "expected": str(expected), "got": str(got), "error": err})
    return GeneratorReport(regime, len(probes), failures)
