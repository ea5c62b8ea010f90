"""Commutation relations between the basic derivations of D^1, S and D.

Each relation [C1, C2] = C3 is checked as an equality of maps on random
probes, with [C1, C2](A) = C1(C2(A)) - C2(C1(A)).  Pairs of basic
derivations not listed in a table must commute.
"""

import random
from dataclasses import dataclass, field

from .derivations import D1Derivation, DDerivation, Divergence, SDerivation, divergence
from .randgen import (
    random_closed_form,
    random_first_order,
    random_function,
    random_op,
    random_symbol,
    random_vector_field,
)
from .symbols import deg_derivation, exact_form, poisson_bracket, vertical_lift_apply
from .weyl import WeylOp, field_components, weyl_commutator


@dataclass
class TableReport:
    dim: int
    trials: int
    seed: object
    results: dict = field(default_factory=dict)  # relation -> number of failing probes
    witnesses: list = field(default_factory=list)

    @property
    def passed(self):
        return all(v == 0 for v in self.results.values())


def _bracket(c1, c2):
    return lambda a: c1(c2(a)) - c2(c1(a))


def _zero(a):
    return a - a


def _record(report, name, lhs, rhs, probes):
    bad = 0
    for p in probes:
        left, right = lhs(p), rhs(p)
        if left != right:
            bad += 1
            if len(report.witnesses) < 5:
                report.witnesses.append({"relation": name, "probe": str(p), "lhs": str(left), "rhs": str(right)})
    report.results[name] = report.results.get(name, 0) + bad


def _d1_table(report, rng, n, nprobes):
    g = random_function(rng, n, 2)
    div = Divergence(g)
    Y = random_vector_field(rng, n, 2)
    Y2 = random_vector_field(rng, n, 2)
    w = random_closed_form(rng, n, 2)
    w2 = random_closed_form(rng, n, 2)
    zero = WeylOp.zero(n)

    def cy(y):
        return D1Derivation(y, div=div).apply

    c_a = D1Derivation(zero, 1, div=div).apply
    c_div = D1Derivation(zero, 0, 1, div=div).apply

    def cw(form):
        return D1Derivation(zero, 0, 0, form, div).apply

    div_y = divergence(div, Y)
    w_of_y = w.evaluate_on(field_components(Y))
    probes = [random_first_order(rng, n, 2) for _ in range(nprobes)]
    rel = [
        ("D1 [C_Y, C_Y'] = C_[Y,Y']", _bracket(cy(Y), cy(Y2)), cy(weyl_commutator(Y, Y2))),
        ("D1 [C_Y, C_div] = C_d(div Y)", _bracket(cy(Y), c_div), cw(exact_form(div_y))),
        ("D1 [C_Y, C_w] = C_d(w(Y))", _bracket(cy(Y), cw(w)), cw(exact_form(w_of_y))),
        ("D1 [C_A, C_div] = C_div", _bracket(c_a, c_div), c_div),
        ("D1 [C_A, C_w] = C_w", _bracket(c_a, cw(w)), cw(w)),
        ("D1 [C_Y, C_A] = 0", _bracket(cy(Y), c_a), _zero),
        ("D1 [C_div, C_w] = 0", _bracket(c_div, cw(w)), _zero),
        ("D1 [C_w, C_w'] = 0", _bracket(cw(w), cw(w2)), _zero),
    ]
    for name, lhs, rhs in rel:
        _record(report, name, lhs, rhs, probes)


def _s_table(report, rng, n, nprobes):
    P = random_symbol(rng, n, 2, 2)
    P2 = random_symbol(rng, n, 2, 2)
    w = random_closed_form(rng, n, 2)
    w2 = random_closed_form(rng, n, 2)

    def cp(p):
        return SDerivation(p).apply

    deg = deg_derivation

    def wv(form):
        return lambda s: vertical_lift_apply(form, s)

    probes = [random_symbol(rng, n, 2, 3) for _ in range(nprobes)]
    rel = [
        ("S [C_P, C_P'] = C_{P,P'}", _bracket(cp(P), cp(P2)), cp(poisson_bracket(P, P2))),
        ("S [Deg, C_P] = C_Deg(P)", _bracket(deg, cp(P)), cp(deg(P))),
        ("S [w^v, C_P] = C_w^v(P)", _bracket(wv(w), cp(P)), cp(vertical_lift_apply(w, P))),
        ("S [w^v, Deg] = w^v", _bracket(wv(w), deg), wv(w)),
        ("S [w^v, w'^v] = 0", _bracket(wv(w), wv(w2)), _zero),
    ]
    for name, lhs, rhs in rel:
        _record(report, name, lhs, rhs, probes)


def _d_table(report, rng, n, nprobes):
    P = random_op(rng, n, 2, 2)
    P2 = random_op(rng, n, 2, 2)
    w = random_closed_form(rng, n, 2)
    w2 = random_closed_form(rng, n, 2)

    def cp(p):
        return DDerivation(p).apply

    def bar(form):
        return DDerivation(WeylOp.zero(n), form).apply

    probes = [random_op(rng, n, 2, 2) for _ in range(nprobes)]
    rel = [
        ("D [C_P, C_P'] = C_[P,P']", _bracket(cp(P), cp(P2)), cp(weyl_commutator(P, P2))),
        ("D [w-bar, C_P] = C_w-bar(P)", _bracket(bar(w), cp(P)), cp(bar(w)(P))),
        ("D [w-bar, w'-bar] = 0", _bracket(bar(w), bar(w2)), _zero),
    ]
    for name, lhs, rhs in rel:
        _record(report, name, lhs, rhs, probes)


def verify_commutation_tables(dim=2, trials=5, seed=0, probes=5):
    """Check all three tables on ``trials`` random parameter draws."""
    rng = random.Random(seed)
    report = TableReport(dim, trials, seed)
    for _ in range(trials):
        _d1_table(report, rng, dim, probes)
        _s_table(report, rng, dim, probes)
        _d_table(report, rng, dim, probes)
    return report

