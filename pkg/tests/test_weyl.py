import random

import pytest

from conftest import D, S
from dopalg.errors import PreconditionError
from dopalg.poly import SymbolPoly, multi_indices
from dopalg.randgen import random_function, random_op
from dopalg.weyl import (
    WeylOp,
    conjugation,
    full_symbol,
    quantize_standard,
    split_constant_part,
    symbol_of_order,
    weyl_commutator,
)


def _test_functions(n, deg=4):
    return [SymbolPoly.monomial(a, (0,) * n) for a in multi_indices(n, deg)]


def test_compose_examples():
    assert D("d1") * D("x1") == D("x1*d1 + 1")
    f, g = D("x1^2 + 1"), D("3*x1")
    assert f * g == g * f == D("3*x1^3 + 3*x1")
    lhs = D("x1*d1") * D("d1")
    assert lhs == D("x1*d1^2")
    for t in _test_functions(1):
        assert lhs.apply(t) == D("x1*d1").apply(D("d1").apply(t))


def test_commutator_examples():
    assert weyl_commutator(D("d1"), D("x1")) == 1
    assert weyl_commutator(D("x1*d1"), D("d1")) == D("-d1")
    rng = random.Random(1)
    for _ in range(20):
        d = random_op(rng, 2)
        assert weyl_commutator(d, WeylOp.const(1, 2)) == 0


def test_composition_matches_evaluation():
    rng = random.Random(2)
    for _ in range(60):
        n = rng.randint(1, 2)
        a, b = random_op(rng, n), random_op(rng, n)
        g = random_function(rng, n, 4)
        assert (a * b).apply(g) == a.apply(b.apply(g))


def test_associativity_and_jacobi():
    rng = random.Random(3)
    for _ in range(40):
        a, b, c = (random_op(rng, 2, 3, 3, 3) for _ in range(3))
        assert (a * b) * c == a * (b * c)
        jac = (weyl_commutator(a, weyl_commutator(b, c)) + weyl_commutator(b, weyl_commutator(c, a))
               + weyl_commutator(c, weyl_commutator(a, b)))
        assert jac == 0


def test_symbol_examples():
    d = D("x1*d1^2 + d1")
    assert symbol_of_order(d, 2) == S("x1*p1^2")
    assert symbol_of_order(d, 3) == 0
    with pytest.raises(PreconditionError):
        symbol_of_order(D("x1*d1^2"), 1)
    with pytest.raises(PreconditionError):
        symbol_of_order(WeylOp.zero(1), 0)


def test_quantize_examples():
    assert quantize_standard(S("p1^2")) == D("d1^2")
    assert quantize_standard(S("x1*p1")) == D("x1*d1")
    rng = random.Random(4)
    for _ in range(20):
        d = random_op(rng, 2)
        assert quantize_standard(full_symbol(d)) == d


def test_conjugation():
    assert conjugation(D("d1")) == D("d1")
    assert conjugation(D("x1^2 + 2")) == D("-x1^2 - 2")
    rng = random.Random(5)
    for _ in range(40):
        a, b = random_op(rng, 2), random_op(rng, 2)
        assert conjugation(conjugation(a)) == a
        assert conjugation(a * b) == -(conjugation(b) * conjugation(a))
        assert conjugation(weyl_commutator(a, b)) == weyl_commutator(conjugation(a), conjugation(b))


def test_adjoint_pairing_on_monomials():
    # int D(f) g = int f D*(g) for compactly supported f, g; on polynomials the
    # boundary-free identity reads D* = -C(D) applied term by term
    d = D("x1^2*d1^2 + 3*x1*d1 - 2")
    adj = -conjugation(d)
    assert adj == D("d1^2*x1^2 - 3*d1*x1 - 2")


def test_split_constant_part():
    assert split_constant_part(D("x1*d1 + x1")) == (S("x1"), D("x1*d1"))
    assert split_constant_part(D("x1^2")) == (S("x1^2"), WeylOp.zero(1))
    assert split_constant_part(D("d1^2")) == (SymbolPoly.zero(1), D("d1^2"))


def test_order_filtration_easy_direction():
    # [D^(i+1), A] lies in D^i
    for i in range(3):
        for a in multi_indices(2, i + 1):
            for xa in multi_indices(2, 2):
                op = WeylOp.monomial(xa, a)
                for f in _test_functions(2, 2):
                    assert weyl_commutator(op, WeylOp.from_function(f)).order() <= i
