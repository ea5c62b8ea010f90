"""Seeded random elements for property checks.

Sparse monomial sampling with small integer coefficients in [-3, 3]; every
generator takes an explicit ``random.Random`` so runs are reproducible.
"""

import random

from .linalg import det
from .poly import SymbolPoly, multi_indices
from .scalar import Mode
from .symbols import exact_form
from .weyl import WeylOp

COEFF_RANGE = 3


def make_rng(seed):
    return random.Random(seed)


def _coeff(rng):
    c = 0
    while c == 0:
        c = rng.randint(-COEFF_RANGE, COEFF_RANGE)
    return c


def random_terms(rng, dim, max_xdeg=3, max_pdeg=3, max_terms=4, min_pdeg=0):
    xs = multi_indices(dim, max_xdeg)
    ps = multi_indices(dim, max_pdeg, min_pdeg)
    nterms = rng.randint(1, max_terms)
    return {(rng.choice(xs), rng.choice(ps)): _coeff(rng) for _ in range(nterms)}


def random_symbol(rng, dim, max_xdeg=3, max_pdeg=3, max_terms=4, mode=Mode.EXACT):
    return SymbolPoly(dim, random_terms(rng, dim, max_xdeg, max_pdeg, max_terms), mode)


def random_homogeneous_symbol(rng, dim, degree, max_xdeg=3, max_terms=4, mode=Mode.EXACT):
    out = SymbolPoly.zero(dim, mode)
    while out.is_zero():
        terms = random_terms(rng, dim, max_xdeg, degree, max_terms, min_pdeg=degree)
        out = SymbolPoly(dim, terms, mode)
    return out


def random_function(rng, dim, max_deg=3, max_terms=4, mode=Mode.EXACT):
    return SymbolPoly(dim, random_terms(rng, dim, max_deg, 0, max_terms), mode)


def random_op(rng, dim, max_order=3, max_deg=3, max_terms=4, mode=Mode.EXACT):
    return WeylOp(dim, random_terms(rng, dim, max_deg, max_order, max_terms), mode)


def random_first_order(rng, dim, max_deg=3, max_terms=4, mode=Mode.EXACT):
    return random_op(rng, dim, 1, max_deg, max_terms, mode)


def random_vector_field(rng, dim, max_deg=3, max_terms=3, mode=Mode.EXACT):
    return WeylOp(dim, random_terms(rng, dim, max_deg, 1, max_terms, min_pdeg=1), mode)


def random_closed_form(rng, dim, max_deg=3, max_terms=3, mode=Mode.EXACT):
    """d of a random polynomial of degree <= max_deg + 1 (closed forms on R^n are exact)."""
    h = random_function(rng, dim, max_deg + 1, max_terms, mode)
    return exact_form(h)


def random_affine_field(rng, dim, nilpotent=False, mode=Mode.EXACT):
    """Components (A, b) of an affine vector field x -> Ax + b.

    With ``nilpotent`` the matrix is strictly upper triangular conjugated by a
    random integer unipotent matrix, so A is nilpotent but not triangular.
    """
    if nilpotent:
        n_mat = [[rng.randint(-2, 2) if j > i else 0 for j in range(dim)] for i in range(dim)]
        u = [[1 if i == j else (rng.randint(-1, 1) if j < i else 0) for j in range(dim)] for i in range(dim)]
        u_inv = _unipotent_lower_inverse(u)
        a = _mm(_mm(u, n_mat), u_inv)
    else:
        a = [[rng.randint(-2, 2) for _ in range(dim)] for _ in range(dim)]
    b = [rng.randint(-2, 2) for _ in range(dim)]
    return (
        tuple(tuple(mode.coerce(v) for v in row) for row in a),
        tuple(mode.coerce(v) for v in b),
    )


def random_invertible(rng, dim, mode=Mode.EXACT):
    """Random integer matrix with nonzero determinant."""
    while True:
        a = tuple(tuple(mode.coerce(rng.randint(-3, 3)) for _ in range(dim)) for _ in range(dim))
        if det(a, mode) != 0:
            return a


def random_offset(rng, dim, mode=Mode.EXACT):
    return tuple(mode.coerce(rng.randint(-3, 3)) for _ in range(dim))


def _mm(a, b):
    n = len(a)
    return [[sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)] for i in range(n)]


def _unipotent_lower_inverse(u):
    n = len(u)
    inv = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(i):
            inv[i][j] = -sum(u[i][k] * inv[k][j] for k in range(j, i))
    return inv

