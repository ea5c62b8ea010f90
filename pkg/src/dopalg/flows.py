"""Affine diffeomorphisms of R^n, flows of affine vector fields, and the
Jacobian cocycle of a density.

An affine vector field Y(x) = Ax + b has flow

    Exp(tY)(x) = e^{tA} x + (int_0^t e^{sA} ds) b,

read off from the exponential of the augmented matrix [[A, b], [0, 0]].
When that matrix is nilpotent the flow is polynomial in t and everything
below stays exact; otherwise the approximate mode uses scipy's expm.

For the density e^g |dx| the Jacobian of phi is
J(phi) = e^{g o phi - g} |det A|, kept as the pair (exponent, scale) so the
cocycle identities can be checked exactly.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .errors import DimensionError, ExactnessUnavailable, PreconditionError, UnsupportedFlow
from .linalg import coerce_matrix, det, identity, inverse, is_zero_matrix, matmul, matvec
from .poly import SymbolPoly
from .quadrature import integrate
from .scalar import Mode, format_scalar
from .symbols import ClosedOneForm, exact_form
from .weyl import field_components, vector_field

APPROX_DET_TOL = 1e-12


def _affine_images(A, b, mode):
    n = len(b)
    xs = [SymbolPoly.x(j, n, mode) for j in range(n)]
    out = []
    for i in range(n):
        img = SymbolPoly.const(b[i], n, mode)
        for j in range(n):
            if A[i][j] != 0:
                img = img + xs[j].scale(A[i][j])
        out.append(img)
    return out


@dataclass(frozen=True)
class AffineMap:
    """phi(x) = A x + b with A invertible."""

    A: tuple
    b: tuple
    mode: Mode = Mode.EXACT

    def __post_init__(self):
        A = coerce_matrix(self.A, self.mode)
        b = tuple(self.mode.coerce(v) for v in self.b)
        if len(A) != len(b) or any(len(row) != len(b) for row in A):
            raise DimensionError("matrix and offset sizes disagree")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)
        d = det(A, self.mode)
        if (self.mode is Mode.EXACT and d == 0) or (self.mode is Mode.APPROX and abs(d) <= APPROX_DET_TOL):
            raise PreconditionError("affine map is not invertible")

    @classmethod
    def identity(cls, dim, mode=Mode.EXACT):
        return cls(identity(dim, mode), (mode.zero,) * dim, mode)

    @classmethod
    def translation(cls, b, mode=Mode.EXACT):
        return cls(identity(len(b), mode), tuple(b), mode)

    @property
    def dim(self):
        return len(self.b)

    def __call__(self, point):
        return tuple(v + c for v, c in zip(matvec(self.A, point), self.b))

    def compose(self, other):
        """self o other."""
        if other.dim != self.dim:
            raise DimensionError("dimension mismatch")
        if other.mode is not self.mode:
            raise PreconditionError("cannot compose maps of different modes")
        return AffineMap(matmul(self.A, other.A), self(other.b), self.mode)

    __matmul__ = compose

    def inverse(self):
        inv = inverse(self.A, self.mode)
        return AffineMap(inv, tuple(-v for v in matvec(inv, self.b)), self.mode)

    def det(self):
        return det(self.A, self.mode)

    def to_mode(self, mode):
        return AffineMap(self.A, self.b, mode) if mode is Mode.APPROX else self

    def pull(self, f):
        """f o phi for a polynomial f (fiber variables untouched)."""
        return f.substitute(_affine_images(self.A, self.b, self.mode), None)

    def push(self, f):
        """f o phi^-1."""
        return self.inverse().pull(f)

    def pull_form(self, w):
        """phi^* w, components (phi^* w)_j = sum_i A_ij w_i o phi."""
        pulled = [self.pull(c) for c in w.components]
        comps = []
        for j in range(self.dim):
            acc = SymbolPoly.zero(self.dim, self.mode)
            for i in range(self.dim):
                if self.A[i][j] != 0:
                    acc = acc + pulled[i].scale(self.A[i][j])
            comps.append(acc)
        return ClosedOneForm(tuple(comps))

    def max_abs_diff(self, other):
        diffs = [abs(a - c) for ra, rc in zip(self.A, other.A) for a, c in zip(ra, rc)]
        diffs += [abs(a - c) for a, c in zip(self.b, other.b)]
        return float(max(diffs)) if diffs else 0.0

    def __str__(self):
        rows = "; ".join(" ".join(format_scalar(v) for v in row) for row in self.A)
        return f"[{rows}] x + [{' '.join(format_scalar(v) for v in self.b)}]"


@dataclass(frozen=True)
class FlowField:
    """The affine vector field Y(x) = A x + b."""

    A: tuple
    b: tuple
    mode: Mode = Mode.EXACT

    def __post_init__(self):
        A = coerce_matrix(self.A, self.mode)
        b = tuple(self.mode.coerce(v) for v in self.b)
        if len(A) != len(b) or any(len(row) != len(b) for row in A):
            raise DimensionError("matrix and offset sizes disagree")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)

    @classmethod
    def from_vector_field(cls, Y):
        """Read A, b off a vector field with affine components; refuse anything else."""
        n, mode = Y.dim, Y.mode
        comps = field_components(Y)
        A = [[mode.zero] * n for _ in range(n)]
        b = [mode.zero] * n
        for i, c in enumerate(comps):
            if c.base_degree() is not None and c.base_degree() > 1:
                raise UnsupportedFlow(
                    "completeness is only certified for affine vector fields; "
                    f"component {i + 1} has degree {c.base_degree()}"
                )
            for (xa, _), v in c.items():
                if sum(xa) == 0:
                    b[i] = v
                else:
                    A[i][xa.index(1)] = v
        return cls(tuple(map(tuple, A)), tuple(b), mode)

    @property
    def dim(self):
        return len(self.b)

    def __neg__(self):
        return FlowField(tuple(tuple(-v for v in row) for row in self.A), tuple(-v for v in self.b), self.mode)

    def to_mode(self, mode):
        return FlowField(self.A, self.b, mode) if mode is Mode.APPROX else self

    def vector_field(self):
        return vector_field(_affine_images(self.A, self.b, self.mode))

    def augmented(self):
        n = self.dim
        rows = [tuple(self.A[i]) + (self.b[i],) for i in range(n)]
        rows.append((self.mode.zero,) * (n + 1))
        return tuple(rows)

    def nilpotency_index(self):
        """Least m with M^m = 0 for the augmented matrix M, or None."""
        m = self.augmented()
        power = m
        for k in range(1, len(m) + 1):
            if is_zero_matrix(power):
                return k
            power = matmul(power, m)
        return None

    def flow_degree(self):
        """Degree in t of Exp(tY) when polynomial, else None."""
        k = self.nilpotency_index()
        return None if k is None else k - 1


def flow_at(Y, t, mode=None):
    """The affine map Exp(tY)."""
    mode = Y.mode if mode is None else mode
    if mode is Mode.APPROX:
        aug = np.array(Y.augmented(), dtype=float)
        e = expm(float(t) * aug)
        n = Y.dim
        return AffineMap(tuple(tuple(float(v) for v in e[i, :n]) for i in range(n)),
                         tuple(float(e[i, n]) for i in range(n)), Mode.APPROX)
    if Y.mode is not Mode.EXACT:
        raise ExactnessUnavailable("exact flow requested for approximate data")
    k = Y.nilpotency_index()
    if k is None:
        raise ExactnessUnavailable("Exp(tY) is polynomial in t only for nilpotent augmented matrices")
    t = Mode.EXACT.coerce(t)
    m = Y.augmented()
    n1 = len(m)
    total = identity(n1)
    power = identity(n1)
    for j in range(1, k):
        power = matmul(power, m)
        factor = t**j / math.factorial(j)
        total = tuple(tuple(a + factor * p for a, p in zip(ra, rp)) for ra, rp in zip(total, power))
    n = Y.dim
    return AffineMap(tuple(row[:n] for row in total[:n]), tuple(row[n] for row in total[:n]), Mode.EXACT)


def pushforward_vector(phi, X):
    """phi_* X: components A . X(phi^-1(y))."""
    comps = [phi.push(c) for c in field_components(X)]
    out = []
    for i in range(phi.dim):
        acc = SymbolPoly.zero(phi.dim, phi.mode)
        for j in range(phi.dim):
            if phi.A[i][j] != 0:
                acc = acc + comps[j].scale(phi.A[i][j])
        out.append(acc)
    return vector_field(out)


@dataclass(frozen=True)
class Jacobian:
    """J = e^exponent * scale: a positive function with polynomial log up to a constant."""

    exponent: SymbolPoly
    scale: object

    def __mul__(self, other):
        return Jacobian(self.exponent + other.exponent, self.scale * other.scale)

    def pull(self, psi):
        return Jacobian(psi.pull(self.exponent), self.scale)

    def log(self):
        return DivValue(self.exponent, self.scale)

    def evaluate(self, point):
        return math.exp(float(self.exponent.evaluate(point))) * float(self.scale)


@dataclass(frozen=True)
class DivValue:
    """Div = poly + ln(scale); exact as a pair even when ln(scale) is not rational."""

    poly: SymbolPoly
    scale: object

    def __add__(self, other):
        return DivValue(self.poly + other.poly, self.scale * other.scale)

    def pull(self, psi):
        return DivValue(psi.pull(self.poly), self.scale)

    def differential(self):
        """d(Div); the logarithmic constant drops out."""
        return exact_form(self.poly)

    def as_poly(self):
        """poly + ln(scale) as a single polynomial.

        In exact mode this needs scale == 1; otherwise the constant is
        irrational and the caller must switch to approximate data.
        """
        if self.poly.mode is Mode.EXACT:
            if self.scale != 1:
                raise ExactnessUnavailable(f"ln({format_scalar(self.scale)}) is not rational")
            return self.poly
        return self.poly + SymbolPoly.const(math.log(float(self.scale)), self.poly.dim, Mode.APPROX)

    def __str__(self):
        if self.scale == 1:
            return str(self.poly)
        return f"{self.poly} + ln({format_scalar(self.scale)})"


def jacobian_cocycle(phi, div):
    """J(phi) for the density e^g |dx|, g = div.weight."""
    g = div.weight.to_mode(phi.mode) if phi.mode is Mode.APPROX else div.weight
    return Jacobian(phi.pull(g) - g, abs(phi.det()))


def div_of_flow(Y, t, div, mode=None):
    """Div(Exp(tY)) = ln J(Exp(tY)), computed from the Jacobian."""
    phi = flow_at(Y, t, mode)
    return jacobian_cocycle(phi, div).log()


def div_flow_integral(Y, t, div, mode=None):
    """int_0^t (div Y) o Exp(sY) ds, the integral side of the flow identity."""
    mode = Y.mode if mode is None else mode
    Y = Y.to_mode(mode)
    div = div.to_mode(mode) if mode is Mode.APPROX else div
    integrand = div(Y.vector_field())
    degree = None
    if mode is Mode.EXACT:
        q = Y.flow_degree()
        if q is None:
            raise ExactnessUnavailable("exact integral needs a polynomial flow")
        degree = q * max(integrand.base_degree() or 0, 0)
    return integrate(lambda s: flow_at(Y, s, mode).pull(integrand), t, mode, degree)

