"""Brute-force checks of the bracket characterizations of the filtrations.

For the Weyl algebra the statement is

    {D : [D, D^k] in D^i} = R.1 + D^(i-k+1),

and for symbols the same with the Poisson bracket, either graded
({S, S_k} in S_i) or filtered ({S, S^k} in S^i).  Both sides are computed
inside a truncated monomial space (order <= R, coefficient degree <= M) by
exact linear algebra.  The converse inclusion is a statement about the full
algebra, so the report is labelled a truncated verification.
"""

from dataclasses import dataclass, field

from .derivations import DDerivation, induced_classical_derivation, monomial_basis_symbols
from .errors import PreconditionError
from .linalg import is_consistent, nullspace
from .poly import SymbolPoly, multi_indices
from .symbols import deg_derivation, exact_form, poisson_bracket
from .weyl import WeylOp, weyl_commutator

MAX_ORDER = 3
MAX_DEGREE = 3
MAX_DIM = 2

VARIANTS = ("D", "S", "S-filtered")


@dataclass
class Lemma1Report:
    variant: str
    i: int
    k: int
    dim: int
    order_cap: int
    degree_cap: int
    unknowns: int
    tests: int
    expected: list = field(default_factory=list)
    computed_dim: int = 0
    easy: bool = False
    converse: bool = False
    witnesses: list = field(default_factory=list)
    label: str = "truncated verification"

    @property
    def passed(self):
        return self.easy and self.converse

    def summary(self):
        return (
            f"{self.label}: variant={self.variant} n={self.dim} i={self.i} k={self.k} "
            f"caps=(order {self.order_cap}, degree {self.degree_cap}) "
            f"unknowns={self.unknowns} tests={self.tests} "
            f"expected_dim={len(self.expected)} computed_dim={self.computed_dim} "
            f"easy={'ok' if self.easy else 'FAIL'} converse={'ok' if self.converse else 'FAIL'}"
        )


def _monomials(cls, dim, orders, max_deg):
    return [cls.monomial(xa, pa) for pa in orders for xa in multi_indices(dim, max_deg)]


def _setup(variant, i, k, dim, R, M):
    if variant == "D":
        unknowns = _monomials(WeylOp, dim, multi_indices(dim, R), M)
        tests = _monomials(WeylOp, dim, multi_indices(dim, k), M)
        bracket = weyl_commutator

        def bad(key):
            return sum(key[1]) > i

        def expected(u):
            return u.order() <= i - k + 1 or u == 1
    else:
        unknowns = _monomials(SymbolPoly, dim, multi_indices(dim, R), M)
        graded = variant == "S"
        tests = _monomials(SymbolPoly, dim, multi_indices(dim, k, k if graded else 0), M)
        bracket = poisson_bracket
        if graded:
            def bad(key):
                return sum(key[1]) != i

            def expected(u):
                return u.fiber_degree() == i - k + 1 or u == 1
        else:
            def bad(key):
                return sum(key[1]) > i

            def expected(u):
                return u.fiber_degree() <= i - k + 1 or u == 1
    return unknowns, tests, bracket, bad, expected


def lemma1_bruteforce(variant, i, k, dim=1, order_cap=3, degree_cap=3):
    """Compare {A : [A, T] in F_i for T in F_k} with R.1 + F_(i-k+1) by exact linear algebra."""
    if variant not in VARIANTS:
        raise PreconditionError(f"variant must be one of {', '.join(VARIANTS)}")
    if i < -1 or k < 1:
        raise PreconditionError("need i >= -1 and k >= 1")
    if order_cap > MAX_ORDER or degree_cap > MAX_DEGREE or dim > MAX_DIM or dim < 1:
        raise PreconditionError(
            f"caps too large: order <= {MAX_ORDER}, degree <= {MAX_DEGREE}, n <= {MAX_DIM}"
        )
    if order_cap < max(k, i - k + 2):
        raise PreconditionError("order cap too small to separate the expected space")
    unknowns, tests, bracket, bad, expected = _setup(variant, i, k, dim, order_cap, degree_cap)

    rows = {}
    for u, a in enumerate(unknowns):
        for t, b in enumerate(tests):
            for key, c in bracket(a, b).items():
                if bad(key):
                    rows.setdefault((t, key), {})[u] = c
    null = nullspace(list(rows.values()), len(unknowns))
    exp_idx = {u for u, a in enumerate(unknowns) if expected(a)}

    report = Lemma1Report(variant, i, k, dim, order_cap, degree_cap, len(unknowns), len(tests))
    report.expected = [str(unknowns[u]) for u in sorted(exp_idx)]
    report.computed_dim = len(null)
    # easy direction: every expected monomial satisfies all equations
    offending = {u for row in rows.values() for u in row} & exp_idx
    report.easy = not offending
    for u in sorted(offending)[:5]:
        report.witnesses.append({"direction": "easy", "element": str(unknowns[u])})
    # converse: solution space lies in (hence, with easy, equals) the expected span
    stray = [vec for vec in null if not set(vec) <= exp_idx]
    report.converse = not stray and len(null) == len(exp_idx)
    for vec in stray[:5]:
        elem = sum((unknowns[u].scale(c) for u, c in vec.items()), unknowns[0].zero(dim))
        report.witnesses.append({"direction": "converse", "element": str(elem)})
    return report


@dataclass
class DegReport:
    dim: int
    degree_cap: int
    parameters: int
    equations: int
    solvable: bool
    grade_preserving: bool

    @property
    def passed(self):
        return not self.solvable and self.grade_preserving


def deg_not_induced(dim=1, degree_cap=2, max_grade=2):
    """Show no filtration-respecting D-derivation induces Deg on symbols.

    Parameters run over P in D^1 and w = dh with monomial coefficients of
    degree <= degree_cap; the induced maps on symbol monomials of fiber degree
    0..max_grade are matched against Deg by linear algebra.
    """
    params = []
    for P in _monomials(WeylOp, dim, multi_indices(dim, 1), degree_cap):
        params.append(DDerivation(P))
    for xa in multi_indices(dim, degree_cap + 1, 1):
        h = SymbolPoly.monomial(xa, (0,) * dim)
        params.append(DDerivation(WeylOp.zero(dim), exact_form(h)))
    probes = monomial_basis_symbols(dim, max_grade, degree_cap)

    rows, rhs = {}, {}
    grade_ok = True
    for col, c in enumerate(params):
        for s_idx, s in enumerate(probes):
            out = induced_classical_derivation(c, s)
            if not out.is_zero() and not out.is_homogeneous(s.fiber_degree()):
                grade_ok = False
            for key, v in out.items():
                rows.setdefault((s_idx, key), {})[col] = v
    for s_idx, s in enumerate(probes):
        for key, v in deg_derivation(s).items():
            rows.setdefault((s_idx, key), {})
            rhs[(s_idx, key)] = v
    keys = list(rows)
    solvable = is_consistent([rows[k] for k in keys], [rhs.get(k, 0) for k in keys], len(params))
    return DegReport(dim, degree_cap, len(params), len(keys), solvable, grade_ok)

