"""Small dense matrices (exact or float) and sparse exact nullspaces.

Rational row reduction is delegated to sympy's DomainMatrix over QQ; float
matrices go through numpy.
"""

from fractions import Fraction

import numpy as np
from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from .errors import PreconditionError
from .scalar import Mode


def _to_qq(c):
    c = Fraction(c)
    return QQ(c.numerator, c.denominator)


def _from_qq(e):
    return Fraction(int(e.numerator), int(e.denominator))


def identity(n, mode=Mode.EXACT):
    return tuple(tuple(mode.one if i == j else mode.zero for j in range(n)) for i in range(n))


def matmul(a, b):
    return tuple(
        tuple(sum((a[i][k] * b[k][j] for k in range(len(b))), start=0 * a[0][0]) for j in range(len(b[0])))
        for i in range(len(a))
    )


def matvec(a, v):
    return tuple(sum((a[i][k] * v[k] for k in range(len(v))), start=0 * a[0][0]) for i in range(len(a)))


def transpose(a):
    return tuple(zip(*a))


def mat_add(a, b):
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_scale(a, c):
    return tuple(tuple(x * c for x in row) for row in a)


def is_zero_matrix(a):
    return all(x == 0 for row in a for x in row)


def coerce_matrix(a, mode):
    return tuple(tuple(mode.coerce(x) for x in row) for row in a)


def det(a, mode):
    if mode is Mode.EXACT:
        return _from_qq(DomainMatrix([[_to_qq(x) for x in row] for row in a], (len(a), len(a)), QQ).det())
    return float(np.linalg.det(np.array(a, dtype=float)))


def inverse(a, mode):
    n = len(a)
    if mode is Mode.EXACT:
        m = DomainMatrix([[_to_qq(x) for x in row] for row in a], (n, n), QQ)
        if m.det() == 0:
            raise PreconditionError("matrix is singular")
        inv = m.inv().to_Matrix()
        return tuple(tuple(Fraction(int(inv[i, j].p), int(inv[i, j].q)) for j in range(n)) for i in range(n))
    arr = np.array(a, dtype=float)
    return tuple(tuple(float(x) for x in row) for row in np.linalg.inv(arr))


def _sparse(rows):
    # sympy's sparse elimination chokes on empty rows, so drop them
    out = {}
    for i, row in enumerate(rows):
        entries = {j: _to_qq(c) for j, c in row.items() if c != 0}
        if entries:
            out[i] = entries
    return out


def nullspace(rows, ncols):
    """Basis of {v : row . v = 0 for all rows}, rows given as {col: Fraction}.

    Returns a list of dicts {col: Fraction}.
    """
    if not rows:
        return [{j: Fraction(1)} for j in range(ncols)]
    sparse = _sparse(rows)
    m = DomainMatrix(sparse, (len(rows), ncols), QQ)
    basis = m.nullspace().to_list()
    out = []
    for vec in basis:
        out.append({j: _from_qq(c) for j, c in enumerate(vec) if c != 0})
    return out


def rank(rows, ncols):
    if not rows:
        return 0
    sparse = _sparse(rows)
    return DomainMatrix(sparse, (len(rows), ncols), QQ).rank()


def is_consistent(rows, rhs, ncols):
    """Whether the linear system rows . v = rhs has a solution."""
    augmented = [{**row, ncols: b} if b != 0 else dict(row) for row, b in zip(rows, rhs)]
    return rank(rows, ncols) == rank(augmented, ncols + 1)
