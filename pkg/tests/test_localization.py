import random
import time

import pytest

from glocsur import (
    FgAbGroup,
    GModule,
    LocalizationProblem,
    MalformedInputError,
    PlaceSpec,
    check_v0_sufficiency,
    im_lambda,
    im_sigma,
    is_surjective,
    lambda_dominated,
    semisimple_check,
    sha_group,
)
from glocsur.instances import random_finite_module, random_group, random_module, random_places, random_problem
from glocsur.localization import all_cyclic_tail


@pytest.fixture
def places(C2):
    return {
        "split": PlaceSpec("split", "finite", C2.trivial()),
        "inert": PlaceSpec("inert", "finite", C2.whole()),
        "real": PlaceSpec("real", "real", C2.whole()),
        "cx": PlaceSpec("cx", "complex", C2.trivial()),
    }


def _problem(M, places, S, comp):
    return LocalizationProblem(M, [places[k] for k in S + comp], S)


def test_norm_one_fixtures(neg, places):
    t = time.perf_counter()
    v = is_surjective(_problem(neg, places, ["inert", "real"], ["split"]))
    assert not v.surjective and v.obstruction == (0, [2])
    assert is_surjective(_problem(neg, places, ["split", "real"], ["inert"])).surjective
    assert is_surjective(_problem(neg, places, ["split", "inert"], ["real"])).surjective
    assert time.perf_counter() - t < 3


def test_im_lambda_examples(neg, places):
    p = _problem(neg, places, [], ["split", "inert", "real", "cx"])
    assert im_lambda(p, "inert") == p.global_torsion
    assert im_lambda(p, "real") == p.global_torsion
    assert im_lambda(p, "split").is_trivial()
    assert im_lambda(p, "cx").is_trivial()


def test_im_sigma_examples(neg, places):
    p = _problem(neg, places, ["inert", "split"], [])
    assert im_sigma(p, "S").canonical() == (0, [2])
    assert im_sigma(p, "S^c").is_trivial()
    tail = LocalizationProblem(neg, [], [], all_cyclic_tail(neg.group))
    assert im_sigma(tail, "S").canonical() == (0, [2])


def test_trivial_action_always_surjective(C2, places):
    M = GModule.trivial(C2, FgAbGroup(1))
    for S in (["split"], ["inert", "real"], []):
        comp = [k for k in ("split", "inert", "real") if k not in S]
        v = is_surjective(_problem(M, places, S, comp))
        assert v.surjective and v.obstruction == (0, [])


def test_place_validation(C2):
    with pytest.raises(MalformedInputError):
        PlaceSpec("c", "complex", C2.whole())
    with pytest.raises(MalformedInputError):
        PlaceSpec("r", "real", C2.trivial())
    with pytest.raises(MalformedInputError):
        PlaceSpec("x", "archimedean", C2.trivial())


def test_problem_validation(neg, places, C2):
    with pytest.raises(MalformedInputError):
        LocalizationProblem(neg, [places["split"]], ["nowhere"])
    with pytest.raises(MalformedInputError):
        LocalizationProblem(neg, [places["split"], places["split"]], [])
    tail = all_cyclic_tail(C2)
    with pytest.raises(MalformedInputError):
        LocalizationProblem(neg, [places["split"]], [], tail, tail)


def test_v0_sufficiency_examples(C2, neg, places):
    M = GModule.trivial(C2, FgAbGroup.cyclic(3))
    assert check_v0_sufficiency(_problem(M, places, ["inert"], ["split"]), "split")
    assert not check_v0_sufficiency(_problem(neg, places, ["inert"], ["split"]), "split")
    assert check_v0_sufficiency(_problem(neg, places, ["real"], ["inert"]), "inert")
    with pytest.raises(MalformedInputError):
        check_v0_sufficiency(_problem(neg, places, ["real"], ["inert"]), "real")


def test_semisimple_check_examples(C2, neg, places):
    M = GModule(C2, FgAbGroup.cyclic(4), [a for a in neg.action])
    p = _problem(M, places, ["inert", "real"], ["split"])
    assert semisimple_check(p) and is_surjective(p).surjective
    assert not semisimple_check(_problem(neg, places, ["inert"], ["split"]))
    assert not semisimple_check(_problem(M, places, ["inert"], ["real"]))


def test_conjugacy_invariance():
    rng = random.Random(61)
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
                assert im_lambda(alt, p.id) == ref


def test_criterion_equals_obstruction_triviality():
    rng = random.Random(67)
    for _ in range(200):
        G = random_group(rng, 8)
        problem = random_problem(rng, random_module(rng, G))
        v = is_surjective(problem)
        Q, gens = sha_group(problem)
        assert v.surjective == Q.is_trivial() == v.im_sigma_comp.contains(v.im_sigma_S)
        assert v.obstruction == Q.canonical()
        for g in gens:
            assert v.im_sigma_S.contains_vector(g)


def test_monotonicity():
    rng = random.Random(71)
    for _ in range(150):
        G = random_group(rng, 8)
        M = random_module(rng, G)
        places = random_places(rng, G, rng.randint(2, 5))
        ids = [p.id for p in places]
        S_big = [i for i in ids if rng.random() < 0.6]
        S_small = [i for i in S_big if rng.random() < 0.6]
        big = is_surjective(LocalizationProblem(M, places, S_big)).surjective
        small = is_surjective(LocalizationProblem(M, places, S_small)).surjective
        assert not big or small


def test_semisimple_law():
    rng = random.Random(73)
    for _ in range(200):
        G = random_group(rng, 8)
        M = random_finite_module(rng, G, 16)
        places = random_places(rng, G)
        places.append(PlaceSpec("v_fin", "finite", rng.choice(G.subgroups())))
        S = [p.id for p in places[:-1] if rng.random() < 0.5]
        problem = LocalizationProblem(M, places, S)
        assert semisimple_check(problem)
        assert is_surjective(problem).surjective


def test_corollaries_on_v0():
    rng = random.Random(79)
    for _ in range(150):
        G = random_group(rng, 8)
        M = random_module(rng, G)
        places = random_places(rng, G, rng.randint(1, 4))
        places.append(PlaceSpec("w0", "finite", rng.choice(G.subgroups())))
        others = [p.id for p in places[:-1]]
        # S = all places but v0
        problem = LocalizationProblem(M, places, others)
        dominated = lambda_dominated(problem, "w0")
        assert dominated == is_surjective(problem).surjective
        if check_v0_sufficiency(problem, "w0"):
            assert is_surjective(problem).surjective
        # smaller S: domination still implies surjectivity
        S = [i for i in others if rng.random() < 0.5]
        small = LocalizationProblem(M, places, S)
        if lambda_dominated(small, "w0"):
            assert is_surjective(small).surjective


def test_tail_on_complement_makes_everything_surjective():
    """An all-cyclic tail outside S contains the inert class, so it dominates."""
    rng = random.Random(83)
    for _ in range(60):
        G = random_group(rng, 8)
        if not any(len(H) == G.order for H in G.cyclic_subgroups()):
            continue
        M = random_module(rng, G)
        places = random_places(rng, G)
        problem = LocalizationProblem(M, places, [p.id for p in places], None, all_cyclic_tail(G))
        assert is_surjective(problem).surjective
