import random

import pytest

from conftest import S, W
from dopalg.errors import NotClosedError, PreconditionError
from dopalg.randgen import random_closed_form, random_function, random_homogeneous_symbol, random_symbol
from dopalg.symbols import (
    ClosedOneForm,
    deg_derivation,
    exact_form,
    poisson_bracket,
    potential,
    vertical_lift_apply,
)


def _bracket_oracle(a, b):
    # straight-line sum of d_p a d_x b - d_x a d_p b
    out = a - a
    for i in range(a.dim):
        out = out + a.dp(i) * b.dx(i) - a.dx(i) * b.dp(i)
    return out


def test_bracket_examples():
    assert poisson_bracket(S("p1"), S("x1")) == 1
    assert poisson_bracket(S("x1*p1^2"), S("x1*p1")) == S("x1*p1^2")
    rng = random.Random(3)
    for _ in range(20):
        a = random_symbol(rng, 2)
        assert poisson_bracket(a, a) == 0
        b = random_symbol(rng, 2)
        assert poisson_bracket(a, b) == _bracket_oracle(a, b)


def test_jacobi_leibniz_and_grading():
    rng = random.Random(4)
    for _ in range(100):
        n = rng.randint(1, 3)
        a, b, c = (random_symbol(rng, n, 2, 2, 3) for _ in range(3))
        jac = (poisson_bracket(a, poisson_bracket(b, c)) + poisson_bracket(b, poisson_bracket(c, a))
               + poisson_bracket(c, poisson_bracket(a, b)))
        assert jac == 0
        assert poisson_bracket(a, b * c) == poisson_bracket(a, b) * c + b * poisson_bracket(a, c)
    for _ in range(30):
        i, j = rng.randint(0, 3), rng.randint(0, 3)
        a = random_homogeneous_symbol(rng, 2, i)
        b = random_homogeneous_symbol(rng, 2, j)
        br = poisson_bracket(a, b)
        assert br.is_zero() or br.is_homogeneous(i + j - 1)


def test_deg_examples_and_derivation():
    assert deg_derivation(S("p1^2")) == S("p1^2")
    assert deg_derivation(S("x1*p1")) == 0
    assert deg_derivation(S("x1^2")) == S("-x1^2")
    rng = random.Random(5)
    for _ in range(50):
        a, b = random_symbol(rng, 2), random_symbol(rng, 2)
        assert deg_derivation(poisson_bracket(a, b)) == (
            poisson_bracket(deg_derivation(a), b) + poisson_bracket(a, deg_derivation(b)))


def test_vertical_lift_examples():
    assert vertical_lift_apply(W("dx1"), S("p1^2")) == S("2*p1")
    assert vertical_lift_apply(W("x2*dx1 + x1*dx2"), S("x1^2*x2")) == 0
    assert vertical_lift_apply(W("x2*dx1 + x1*dx2"), S("p1*p2")) == S("x2*p2 + x1*p1")


def test_vertical_lift_is_derivation_and_matches_bracket():
    rng = random.Random(6)
    for _ in range(50):
        w = random_closed_form(rng, 2, 2)
        a, b = random_symbol(rng, 2), random_symbol(rng, 2)
        assert vertical_lift_apply(w, poisson_bracket(a, b)) == (
            poisson_bracket(vertical_lift_apply(w, a), b) + poisson_bracket(a, vertical_lift_apply(w, b)))
        h = random_function(rng, 2, 3)
        assert vertical_lift_apply(exact_form(h), a) == poisson_bracket(a, h)


def test_potential():
    assert potential(W("dx1")) == S("x1")
    assert potential(W("x2*dx1 + x1*dx2")) == S("x1*x2")
    rng = random.Random(7)
    for _ in range(30):
        w = random_closed_form(rng, 3, 2)
        h = potential(w)
        assert exact_form(h) == w
        assert h.evaluate((0, 0, 0)) == 0


def test_closedness_is_enforced():
    with pytest.raises(NotClosedError):
        W("x2*dx1 - x1*dx2")
    with pytest.raises(PreconditionError):
        ClosedOneForm((S("p1"),))


def test_form_text_round_trip():
    w = W("x2*dx1 + x1*dx2 - 3*dx2")
    assert W(str(w)) == w
