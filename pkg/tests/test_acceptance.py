"""Acceptance criteria, one test per criterion, each printing a PASS/FAIL line."""

import random
import time
from fractions import Fraction

import pytest
from sympy import Matrix
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from glocsur import (
    FgAbGroup,
    FiniteGroup,
    GModule,
    IntMatrix,
    LocalizationProblem,
    PlaceSpec,
    ShortExactSequence,
    build_six_term,
    check_exactness,
    coinvariants,
    delta_connect,
    im_lambda,
    is_surjective,
    sha_group,
)
from glocsur.instances import (
    permutation_module,
    random_finite_module,
    random_group,
    random_lattice_module,
    random_module,
    random_places,
    random_problem,
    random_stable_generators,
    random_subgroup,
    small_group,
)
from glocsur.matrix import det, smith
from glocsur.presets import RadicalData, pr_condition, prime_degree_check, theorem51_predict
from glocsur.selftest import random_ses
from glocsur.sixterm import mod1, rationalization_kernel, verify_h1_killed


@pytest.fixture
def line(request):
    reporter = request.config.pluginmanager.get_plugin("terminalreporter")

    def emit(num, ok, detail):
        text = f"[acceptance {num}] {'PASS' if ok else 'FAIL'}: {detail}"
        if reporter is not None:
            reporter.write_line(text)
        else:
            print(text)
        return ok

    return emit


def _norm_one(S_ids, comp_ids):
    G = FiniteGroup.cyclic(2)
    M = GModule(G, FgAbGroup(1), [IntMatrix.identity(1), IntMatrix.from_rows([[-1]])])
    places = {
        "split": PlaceSpec("split", "finite", G.trivial()),
        "inert": PlaceSpec("inert", "finite", G.whole()),
        "real": PlaceSpec("real", "real", G.whole()),
    }
    return LocalizationProblem(M, [places[k] for k in S_ids + comp_ids], S_ids)


def test_1_norm_one_fixtures(line):
    cases = [
        (["inert", "real"], ["split"], False, (0, [2])),
        (["split", "real"], ["inert"], True, (0, [])),
        (["split", "inert"], ["real"], True, (0, [])),
    ]
    ok, worst = True, 0.0
    for S, comp, surj, obstruction in cases:
        t = time.perf_counter()
        v = is_surjective(_norm_one(S, comp))
        dt = time.perf_counter() - t
        worst = max(worst, dt)
        ok = ok and v.surjective == surj and v.obstruction == obstruction and dt < 1.0
    assert line(1, ok, f"norm-one fixtures split/inert/real complement, worst {worst:.3f}s (< 1s)")


def test_2_semisimple_law(line):
    rng = random.Random(2)
    t = time.perf_counter()
    good = total = 0
    for _ in range(200):
        G = random_group(rng, 8)
        M = random_finite_module(rng, G, 16)
        assert G.order <= 8 and M.carrier.order() <= 16
        places = random_places(rng, G)
        places.append(PlaceSpec("v_fin", "finite", random_subgroup(rng, G)))
        S = [p.id for p in places[:-1] if rng.random() < 0.5]
        good += is_surjective(LocalizationProblem(M, places, S)).surjective
        total += 1
    dt = time.perf_counter() - t
    assert line(2, good == total and dt < 30, f"{good}/{total} surjective in {dt:.2f}s (< 30s)")


def test_3_criterion_iff_obstruction(line):
    rng = random.Random(3)
    bad = 0
    for _ in range(200):
        G = random_group(rng, 8)
        problem = random_problem(rng, random_module(rng, G))
        v = is_surjective(problem)
        Q, _ = sha_group(problem)
        bad += v.surjective != Q.is_trivial()
    assert line(3, bad == 0, f"200 instances, {bad} discrepancies")


def test_4_six_term_exactness(line):
    rng = random.Random(4)
    bad = 0
    for _ in range(100):
        seq = random_ses(rng, 8, 4)
        rep = check_exactness(build_six_term(seq))
        bad += not (rep.exact and all(rep.composites_zero.values()))
    G = FiniteGroup.cyclic(2)
    B1 = GModule.trivial(G, FgAbGroup(1))
    B2 = GModule(G, FgAbGroup(2), [IntMatrix.identity(2), IntMatrix.from_rows([[0, 1], [1, 0]])])
    B3 = GModule(G, FgAbGroup(1), [IntMatrix.identity(1), IntMatrix.from_rows([[-1]])])
    st = build_six_term(ShortExactSequence(B1, B2, B3, [[1], [1]], [[1, -1]]))
    neg = check_exactness(st.with_delta([(Fraction(0),)]))
    fails = neg.failing()
    control = (not neg.exact and fails[0].node == "(B3)_tors" and fails[0].witness is not None)
    assert line(4, bad == 0 and control,
                f"100 sequences, {bad} inexact; corrupted δ fails at {fails[0].node if fails else '-'} "
                f"with witness {fails[0].witness if fails else None}")


def test_5_delta_determinism(line):
    rng = random.Random(5)
    seqs = bad = 0
    while seqs < 50:
        seq = random_ses(rng, 8, 4)
        st = build_six_term(seq)
        gens = st.levels[2].quotient.torsion_generators()
        if not gens:
            continue
        seqs += 1
        for t, col in zip(gens, st.delta):
            for _ in range(5):
                bad += delta_connect(seq, t, rng=rng) != mod1(col)
    G = FiniteGroup.cyclic(2)
    B1 = GModule.trivial(G, FgAbGroup(1))
    B2 = GModule(G, FgAbGroup(2), [IntMatrix.identity(2), IntMatrix.from_rows([[0, 1], [1, 0]])])
    B3 = GModule(G, FgAbGroup(1), [IntMatrix.identity(1), IntMatrix.from_rows([[-1]])])
    swap = build_six_term(ShortExactSequence(B1, B2, B3, [[1], [1]], [[1, -1]]))
    half = swap.delta_matrix() == [[Fraction(1, 2)]]
    assert line(5, bad == 0 and half, f"{seqs} sequences x 5 re-derivations, {bad} disagreements; "
                                      f"C2 swap δ = {swap.delta_matrix()[0][0]}")


def test_6_tor_and_h1_oracles(line):
    rng = random.Random(6)
    tor_bad = h1_bad = 0
    for _ in range(100):
        G = random_group(rng, 8)
        M = random_module(rng, G, 3)
        tor_bad += coinvariants(M).torsion_part != rationalization_kernel(M)
        h1_bad += not verify_h1_killed(M)
    assert line(6, tor_bad == 0 and h1_bad == 0,
                f"100 modules, torsion/rationalization mismatches {tor_bad}, |G|·H1 != 0 in {h1_bad}")


def test_7_conjugacy_invariance(line):
    rng = random.Random(7)
    bad = 0
    for _ in range(100):
        G = random_group(rng, 8)
        M = random_module(rng, G)
        places = random_places(rng, G)
        base = LocalizationProblem(M, places, [])
        for p in places:
            ref = im_lambda(base, p.id)
            for g in G.elements():
                q = PlaceSpec(p.id, p.kind, p.decomp.conjugate(g))
                alt = LocalizationProblem(M, [q if r.id == p.id else r for r in places], [])
                bad += im_lambda(alt, p.id) != ref
    assert line(7, bad == 0, f"100 instances, all conjugates, {bad} changes of im λ")


def _chain_problem(rng, M, v0_decomp):
    G = M.group
    places = random_places(rng, G)
    places.append(PlaceSpec("w0", "finite", v0_decomp))
    S = [p.id for p in places[:-1] if rng.random() < 0.6]
    tail = G.cyclic_subgroup_classes() if rng.random() < 0.3 else None
    return LocalizationProblem(M, places, S, tail)


def test_8_radical_chain(line):
    rng = random.Random(8)
    counts = {"thm": 0, "split": 0, "prime": 0}
    bad = 0
    while counts["thm"] < 100:
        G = random_group(rng, 8)
        M = random_lattice_module(rng, G, 4)
        rad = RadicalData(M, tuple(random_stable_generators(rng, M)))
        H = rng.choice([K for K in G.subgroups() if pr_condition(rad, K)])
        problem = _chain_problem(rng, M, H)
        bad += not (theorem51_predict(rad, problem, "w0") and is_surjective(problem).surjective)
        counts["thm"] += 1
    while counts["split"] < 100:
        G = random_group(rng, 8)
        M = GModule.trivial(G, FgAbGroup(rng.randint(1, 3)))
        rad = RadicalData(M, tuple(random_stable_generators(rng, M)))
        problem = _chain_problem(rng, M, random_subgroup(rng, G))
        bad += not (theorem51_predict(rad, problem, "w0") and is_surjective(problem).surjective)
        counts["split"] += 1
    while counts["prime"] < 100:
        p = rng.choice([2, 3, 5, 7])
        G = small_group(f"C{p}")
        M = permutation_module(G, G.trivial())
        rad = RadicalData(M, tuple(random_stable_generators(rng, M)))
        problem = _chain_problem(rng, M, G.whole())
        holds = prime_degree_check(rad, problem, "w0", p)
        bad += not (holds and theorem51_predict(rad, problem, "w0") and is_surjective(problem).surjective)
        counts["prime"] += 1
    assert line(8, bad == 0, f"pr-condition {counts['thm']}, split radical {counts['split']}, "
                             f"prime degree {counts['prime']} instances; {bad} counterexamples")


def test_9_snf_substrate(line):
    rng = random.Random(9)
    bad = 0
    for _ in range(500):
        m, n = rng.randint(1, 6), rng.randint(1, 6)
        A = IntMatrix.from_rows([[rng.randint(-20, 20) for _ in range(n)] for _ in range(m)], n)
        sf = smith(A)
        d = sf.diagonal
        ok = sf.U @ A @ sf.V == sf.D
        ok = ok and abs(det(sf.U)) == 1 and abs(det(sf.V)) == 1
        ok = ok and all(sf.D[i, j] == 0 for i in range(m) for j in range(n) if i != j)
        ok = ok and all((b % a == 0) if a else b == 0 for a, b in zip(d, d[1:]))
        ref = sympy_snf(Matrix(A.tolist()))
        ok = ok and sorted(d) == sorted(abs(ref[k, k]) for k in range(min(m, n)))
        bad += not ok
    assert line(9, bad == 0, f"500 random matrices up to 6x6, {bad} failures (sympy oracle agrees)")
