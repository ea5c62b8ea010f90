"""Acceptance suite: one test per criterion, each printing a pass/fail line."""

import random
import time
from fractions import Fraction as F

from dopalg.automorphisms import (
    NotIntegrable,
    derivation_to_mode,
    exp_lowering_s,
    generator_check,
    one_param_group_d,
    one_param_group_d1,
    one_param_group_s,
    translation,
)
from dopalg.derivations import (
    D1Derivation,
    DDerivation,
    Divergence,
    SDerivation,
    check_derivation_property,
    divergence,
    induced_classical_derivation,
    normalize_d,
    normalize_s,
    read_off_d,
    read_off_d1,
    read_off_s,
    square_map,
)
from dopalg.errors import UnsupportedFlow
from dopalg.flows import (
    AffineMap,
    FlowField,
    div_flow_integral,
    div_of_flow,
    flow_at,
    jacobian_cocycle,
    pushforward_vector,
)
from dopalg.lemma1 import deg_not_induced, lemma1_bruteforce
from dopalg.randgen import (
    random_affine_field,
    random_closed_form,
    random_first_order,
    random_function,
    random_homogeneous_symbol,
    random_invertible,
    random_offset,
    random_op,
    random_symbol,
    random_vector_field,
)
from dopalg.scalar import Mode
from dopalg.symbols import exact_form, poisson_bracket
from dopalg.tables import verify_commutation_tables
from dopalg.weyl import (
    WeylOp,
    conjugation,
    full_symbol,
    quantize_standard,
    symbol_class,
    weyl_commutator,
)

SEED = 20240601
AP = Mode.APPROX


def report(capsys, number, title, ok, detail, started):
    status = "PASS" if ok else "FAIL"
    with capsys.disabled():
        print(f"\n[{status}] criterion {number}: {title} -- {detail} ({time.perf_counter() - started:.1f}s, seed {SEED})")


def _sym(d):
    return symbol_class(d, d.order())


# 1. symbol compatibility


def test_criterion_1_symbol_compatibility(capsys):
    started = time.perf_counter()
    rng = random.Random(SEED)
    bad = {}
    pairs = 500
    for n in (1, 2, 3):
        bad[n] = 0
        for _ in range(pairs):
            a = random_op(rng, n, 3, 3, 3)
            b = random_op(rng, n, 3, 3, 3)
            da, db = a.order(), b.order()
            prod_ok = _sym(a) * _sym(b) == symbol_class(a * b, da + db)
            br = weyl_commutator(a, b)
            br_ok = poisson_bracket(_sym(a), _sym(b)) == symbol_class(br, max(da + db - 1, br.order()))
            if da + db - 1 < br.order():
                br_ok = False
            if not (prod_ok and br_ok):
                bad[n] += 1
    ok = not any(bad.values())
    report(capsys, 1, "products and brackets of principal symbols", ok,
           f"{pairs} pairs per n in (1,2,3), failures {bad}", started)
    assert ok


# 2. derivation property


def test_criterion_2_derivation_property(capsys):
    started = time.perf_counter()
    rng = random.Random(SEED)
    n = 2
    trials = 200
    fails = {}
    g = random_function(rng, n, 2)
    d1 = D1Derivation(random_vector_field(rng, n, 2), F(3, 2), -2, random_closed_form(rng, n, 2), Divergence(g))
    s = SDerivation(random_symbol(rng, n, 2, 3), F(-1, 3), random_closed_form(rng, n, 2))
    d = DDerivation(random_op(rng, n, 2, 2), random_closed_form(rng, n, 2))
    for name, c, alg in (("d1", d1, "D1"), ("s", s, "S"), ("d", d, "D")):
        rep = check_derivation_property(c.apply, alg, trials, n, SEED)
        fails[name] = rep.failure_count
    broken = check_derivation_property(square_map, "S", 20, n, SEED)
    zero = check_derivation_property(lambda a: a - a, "S", 20, n, SEED)
    ok = not any(fails.values()) and not broken.passed and bool(broken.failures) and zero.passed
    report(capsys, 2, "derivation property of the three families", ok,
           f"{trials} pairs each, failures {fails}; S->S^2 fails on {broken.failure_count}/20 with witness", started)
    assert ok


# 3. gauge equivalence and read-off


def test_criterion_3_gauge_and_normal_forms(capsys):
    started = time.perf_counter()
    rng = random.Random(SEED)
    n = 2
    gauges = 50
    elements = 50
    bad = 0
    unique_bad = 0
    for _ in range(gauges):
        h = random_function(rng, n, 3)
        P = random_symbol(rng, n, 2, 2)
        w = random_closed_form(rng, n, 2)
        kappa = rng.randint(-2, 2)
        s1 = SDerivation(P, kappa, w)
        s2 = SDerivation(P + h, kappa, w + exact_form(h))
        Q = random_op(rng, n, 2, 2)
        d1 = DDerivation(Q, w)
        d2 = DDerivation(Q + WeylOp.from_function(h), w + exact_form(h))
        for _ in range(elements):
            e = random_symbol(rng, n, 2, 2)
            if s1.apply(e) != s2.apply(e):
                bad += 1
            o = random_op(rng, n, 2, 2)
            if d1.apply(o) != d2.apply(o):
                bad += 1
        # normalized representatives agree and are read off from the map alone
        if normalize_s(s1) != normalize_s(s2) or read_off_s(s2.apply, n) != normalize_s(s1):
            unique_bad += 1
        if normalize_d(d1) != normalize_d(d2) or read_off_d(d2.apply, n) != normalize_d(d1):
            unique_bad += 1
        if normalize_s(normalize_s(s1)) != normalize_s(s1) or normalize_d(normalize_d(d1)) != normalize_d(d1):
            unique_bad += 1
        div = Divergence(random_function(rng, n, 2))
        c = D1Derivation(random_vector_field(rng, n, 2), kappa, rng.randint(-2, 2), w, div)
        if read_off_d1(c.apply, div, n) != c:
            unique_bad += 1
    ok = bad == 0 and unique_bad == 0
    report(capsys, 3, "gauge pairs act identically; normal forms are read off uniquely", ok,
           f"{gauges} gauges x {elements} elements (S and D), action mismatches {bad}, read-off mismatches {unique_bad}",
           started)
    assert ok


# 4. commutation tables


def test_criterion_4_commutation_tables(capsys):
    started = time.perf_counter()
    reports = [verify_commutation_tables(n, trials=6, seed=SEED + n, probes=5) for n in (1, 2)]
    ok = all(r.passed for r in reports)
    failing = [k for r in reports for k, v in r.results.items() if v]
    report(capsys, 4, "commutation tables of D^1, S and D (incl. vanishing commutators)", ok,
           f"{len(reports[0].results)} relations x n in (1,2), failing {failing or 'none'}", started)
    assert ok


# 5. filtration characterization by brute force


def test_criterion_5_filtration_characterization(capsys):
    started = time.perf_counter()
    cases = [(-1, 1), (0, 1), (1, 1), (1, 2)]
    failed = []
    count = 0
    for variant in ("D", "S", "S-filtered"):
        for n in (1, 2):
            for i, k in cases:
                r = lemma1_bruteforce(variant, i, k, n, 3, 3 if n == 1 else 2)
                count += 1
                if not r.passed:
                    failed.append(r.summary())
    ok = not failed
    report(capsys, 5, "truncated verification of R.1 + F^(i-k+1)", ok,
           f"{count} cases (D, S graded, S filtered; n in (1,2)), failures {len(failed)}", started)
    assert ok, failed


# 6. cocycle suite


def test_criterion_6_jacobian_cocycle(capsys):
    started = time.perf_counter()
    rng = random.Random(SEED)
    n = 2
    cocycle_bad = prop_a_bad = prop_b_bad = shift_bad = 0
    for _ in range(100):
        phi = AffineMap(random_invertible(rng, n), random_offset(rng, n))
        psi = AffineMap(random_invertible(rng, n), random_offset(rng, n))
        div = Divergence(random_function(rng, n, 2))
        lhs = jacobian_cocycle(phi @ psi, div)
        rhs = jacobian_cocycle(phi, div).pull(psi) * jacobian_cocycle(psi, div)
        if lhs != rhs:
            cocycle_bad += 1
        X = random_vector_field(rng, n, 2)
        J = jacobian_cocycle(phi, div)
        left = phi.pull(divergence(div, pushforward_vector(phi, X)))
        right = divergence(div, X) + X.apply(J.exponent)
        if left != right:
            prop_a_bad += 1
    # (b) exactly on nilpotent flows
    exact_cases = 0
    for _ in range(40):
        A, b = random_affine_field(rng, n, nilpotent=True)
        Y = FlowField(A, b)
        div = Divergence(random_function(rng, n, 2))
        t = F(rng.randint(-6, 6), rng.randint(1, 4))
        s = F(rng.randint(-6, 6), rng.randint(1, 4))
        if div_of_flow(Y, t, div).as_poly() != div_flow_integral(Y, t, div):
            prop_b_bad += 1
        Ft, Fs, Fts = div_of_flow(Y, t, div), div_of_flow(Y, s, div), div_of_flow(Y, t + s, div)
        if Fts != Ft + Fs.pull(flow_at(Y, t)):
            shift_bad += 1
        exact_cases += 1
    # (b) by quadrature on diagonalizable flows
    worst = 0.0
    for _ in range(20):
        diag = [rng.choice([-1, 1, 2, F(1, 2)]) for _ in range(n)]
        Q = random_invertible(rng, n)
        phi = AffineMap(Q, (0,) * n)
        D = tuple(tuple(diag[i] if i == j else 0 for j in range(n)) for i in range(n))
        M = (phi @ AffineMap(D, (0,) * n) @ phi.inverse()).A
        Y = FlowField(M, random_offset(rng, n), Mode.EXACT).to_mode(AP)
        div = Divergence(random_function(rng, n, 2, mode=AP))
        t = rng.uniform(-0.6, 0.6)
        lhs = div_of_flow(Y, t, div, AP).as_poly()
        rhs = div_flow_integral(Y, t, div, AP)
        worst = max(worst, lhs.max_abs_diff(rhs))
    ok = not (cocycle_bad or prop_a_bad or prop_b_bad or shift_bad) and worst <= 1e-10
    report(capsys, 6, "Jacobian cocycle, divergence transport, Div of flows", ok,
           f"cocycle 100 pairs ({cocycle_bad} bad), transport 100 pairs ({prop_a_bad} bad), "
           f"Div of nilpotent flows {exact_cases} exact ({prop_b_bad} bad), F_(t+s) shift ({shift_bad} bad), "
           f"diagonalizable quadrature max error {worst:.1e}", started)
    assert ok


# 7. one-parameter groups


def _group_families(rng, n):
    A, b = random_affine_field(rng, n, nilpotent=True)
    Y = FlowField(A, b).vector_field()
    div = Divergence(random_function(rng, n, 2))
    c1 = D1Derivation(Y, 0, rng.randint(-2, 2), random_closed_form(rng, n, 2), div)
    cs = SDerivation(full_symbol(Y) + random_function(rng, n, 2), 0, random_closed_form(rng, n, 2))
    cd = DDerivation(Y + WeylOp.from_function(random_function(rng, n, 2)), random_closed_form(rng, n, 1))
    return c1, cs, cd


def _approx_families(rng, n):
    M = ((F(1), F(0)), (F(1), F(-1)))[:n] if n == 2 else ((F(1, 2),),)
    M = tuple(row[:n] for row in M)
    Y = FlowField(M, random_offset(rng, n)).vector_field()
    div = Divergence(random_function(rng, n, 2))
    c1 = D1Derivation(Y, F(1, 2), 1, random_closed_form(rng, n, 2), div)
    cs = SDerivation(full_symbol(Y), F(1, 3), random_closed_form(rng, n, 2))
    cd = DDerivation(Y, random_closed_form(rng, n, 1))
    return [derivation_to_mode(c, AP) for c in (c1, cs, cd)]


_GROUPS = {"d1": one_param_group_d1, "s": one_param_group_s, "d": one_param_group_d}


def _probes(fam, rng, n, count, mode=Mode.EXACT):
    if fam == "d1":
        return [random_first_order(rng, n, 2, mode=mode) for _ in range(count)]
    if fam == "s":
        return [random_symbol(rng, n, 2, 2, mode=mode) for _ in range(count)]
    return [random_op(rng, n, 2, 2, mode=mode) for _ in range(count)]


def _bracket(fam):
    return poisson_bracket if fam == "s" else weyl_commutator


def test_criterion_7_one_parameter_groups(capsys):
    started = time.perf_counter()
    rng = random.Random(SEED)
    n = 2
    problems = []
    # exact regime
    for trial in range(3):
        families = dict(zip(("d1", "s", "d"), _group_families(rng, n)))
        for fam, c in families.items():
            group = _GROUPS[fam]
            t, s = F(rng.randint(-4, 4), 3), F(rng.randint(-4, 4), 2)
            Gt, Gs, Gts = group(c, t), group(c, s), group(c, t + s)
            probes = _probes(fam, rng, n, 3)
            if any(Gts.apply(p) != Gt.apply(Gs.apply(p)) for p in probes):
                problems.append(f"exact law {fam}")
            if Gt.compose(Gs) != Gts:
                problems.append(f"exact descriptor law {fam}")
            a, b = probes[0], probes[1]
            br = _bracket(fam)
            if Gt.apply(br(a, b)) != br(Gt.apply(a), Gt.apply(b)):
                problems.append(f"exact bracket {fam}")
            if not generator_check(lambda u, c=c, g=group: g(c, u), c.apply, probes).passed:
                problems.append(f"exact generator {fam}")
            if generator_check(lambda u, c=c, g=group: g(c, 2 * u), c.apply, probes[:1]).passed:
                problems.append(f"perturbed generator accepted {fam}")
    # approximate regime
    worst_law = 0.0
    for trial in range(2):
        families = dict(zip(("d1", "s", "d"), _approx_families(rng, n)))
        for fam, c in families.items():
            group = _GROUPS[fam]
            t, s = rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5)
            Gt, Gs, Gts = group(c, t), group(c, s), group(c, t + s)
            probes = _probes(fam, rng, n, 2, AP)
            for p in probes:
                worst_law = max(worst_law, Gts.apply(p).max_abs_diff(Gt.apply(Gs.apply(p))))
            a, b = probes
            br = _bracket(fam)
            if Gt.apply(br(a, b)).max_abs_diff(br(Gt.apply(a), Gt.apply(b))) > 1e-9:
                problems.append(f"approx bracket {fam}")
            if not generator_check(lambda u, c=c, g=group: g(c, u), c.apply, probes, regime="approx").passed:
                problems.append(f"approx generator {fam}")
        # K_t = e^{2 kappa t} must be rejected
        c1 = families["d1"]
        if generator_check(lambda u: one_param_group_d1(c1, u, kappa_factor=2), c1.apply,
                           [p + WeylOp.x(0, n, AP) for p in _probes("d1", rng, n, 2, AP)],
                           regime="approx").passed:
            problems.append("perturbed K_t accepted")
    if worst_law > 1e-9:
        problems.append(f"approx law error {worst_law:.1e}")
    # integrability criterion
    ni = 0
    for _ in range(30):
        P = random_symbol(rng, n, 1, 3)
        ok_s = all(k == 1 for k in normalize_s(SDerivation(P)).P.fiber_degrees())
        try:
            res = one_param_group_s(SDerivation(P), 0.5, AP)
            if isinstance(res, NotIntegrable) == ok_s:
                problems.append(f"S integrability misjudged for {P}")
        except UnsupportedFlow:
            problems.append("unexpected unsupported flow (S)")
        Q = random_op(rng, n, 3, 1)
        ok_d = normalize_d(DDerivation(Q)).P.order() <= 1
        res = one_param_group_d(DDerivation(Q), 0.5, AP)
        if isinstance(res, NotIntegrable) == ok_d:
            problems.append(f"D integrability misjudged for {Q}")
        ni += 2
    ok = not problems
    report(capsys, 7, "one-parameter groups: law, brackets, generators, integrability", ok,
           f"3 exact + 2 approx draws per family, approx law max error {worst_law:.1e}, "
           f"{ni} integrability decisions; problems {problems or 'none'}", started)
    assert ok, problems


# 8. exponential of the lowering derivation; conjugation


def test_criterion_8_translation_and_conjugation(capsys):
    started = time.perf_counter()
    rng = random.Random(SEED)
    exp_bad = conj_bad = 0
    for _ in range(100):
        n = rng.randint(1, 3)
        w = random_closed_form(rng, n, 2)
        s = random_symbol(rng, n, 2, 3)
        if exp_lowering_s(w, s) != translation(w).pull(s):
            exp_bad += 1
    for _ in range(200):
        n = rng.randint(1, 2)
        a = random_op(rng, n, 3, 3, 3)
        b = random_op(rng, n, 3, 3, 3)
        if conjugation(a * b) != -(conjugation(b) * conjugation(a)):
            conj_bad += 1
    ok = exp_bad == 0 and conj_bad == 0
    report(capsys, 8, "e^(Omega-bar) equals fiber translation; conjugation is an anti-automorphism", ok,
           f"100 (Omega, S) with {exp_bad} bad, 200 pairs with {conj_bad} bad", started)
    assert ok


# 9. induced classical derivation


def test_criterion_9_induced_derivation(capsys):
    started = time.perf_counter()
    rng = random.Random(SEED)
    n = 2
    bad = 0
    probes = 120
    for _ in range(probes):
        P = random_op(rng, n, 1, 2) + random_op(rng, n, 0, 2)
        c = DDerivation(P, random_closed_form(rng, n, 2))
        i = rng.randint(0, 3)
        s = random_homogeneous_symbol(rng, n, i, 2)
        junk = random_op(rng, n, max(i - 1, 0), 2) if i > 0 else WeylOp.zero(n)

        def section(sym, junk=junk):
            return quantize_standard(sym) + junk

        out = induced_classical_derivation(c, s)
        if out != induced_classical_derivation(c, s, section):
            bad += 1
        if not (out.is_zero() or out.is_homogeneous(i)):
            bad += 1
    deg = [deg_not_induced(n_, 2) for n_ in (1, 2)]
    ok = bad == 0 and all(r.passed for r in deg)
    report(capsys, 9, "induced classical derivation is section independent; Deg is not induced", ok,
           f"{probes} section perturbations ({bad} bad); Deg solvable over D-derivations: "
           f"{[r.solvable for r in deg]}, grade preserving: {[r.grade_preserving for r in deg]}", started)
    assert ok

