"""Randomized property suites behind ``glocsur selftest``.

Each suite draws its instances from one seeded :class:`random.Random`, so a
seed fixes every verdict. A suite never stops at the first failure; it
records up to a handful of failing instances for the report.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from typing import Callable

from sympy import Matrix
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from .abelian import FgAbGroup
from .errors import GlocsurError
from .gmodule import FiniteGroup, GModule, SubgroupOfG, coinvariants, direct_sum
from .instances import (
    permutation_module,
    random_finite_module,
    random_group,
    random_lattice_module,
    random_module,
    random_places,
    random_problem,
    random_ses_generators,
    random_stable_generators,
    random_subgroup,
    small_group,
)
from .localization import (
    LocalizationProblem,
    PlaceSpec,
    im_lambda,
    is_surjective,
    sha_group,
)
from .matrix import IntMatrix, det, smith
from .presets import RadicalData, pr_condition, prime_degree_check, radical_ladder, theorem51_predict
from .sixterm import (
    ShortExactSequence,
    build_six_term,
    check_exactness,
    delta_connect,
    mod1,
    rationalization_kernel,
    verify_h1_killed,
)

MAX_FAILURES = 5


@dataclass
class SuiteResult:
    name: str
    passed: int = 0
    failed: int = 0
    failures: list = field(default_factory=list)
    seconds: float = 0.0

    def record(self, ok: bool, detail=None):
        if ok:
            self.passed += 1
        else:
            self.failed += 1
            if len(self.failures) < MAX_FAILURES:
                self.failures.append(detail)

    @property
    def ok(self) -> bool:
        return self.failed == 0 and self.passed > 0

    def as_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "failed": self.failed,
                "failures": [str(f) for f in self.failures]}


def _timed(name: str, body: Callable[[SuiteResult], None]) -> SuiteResult:
    res = SuiteResult(name)
    t = time.perf_counter()
    body(res)
    res.seconds = time.perf_counter() - t
    return res


# -- substrate ----------------------------------------------------------------


def _random_matrix(rng: random.Random, max_dim: int = 6, spread: int = 20) -> IntMatrix:
    m, n = rng.randint(1, max_dim), rng.randint(1, max_dim)
    rows = [[rng.randint(-spread, spread) for _ in range(n)] for _ in range(m)]
    if m > 1 and rng.random() < 0.3:  # force rank deficiency
        rows[-1] = [3 * a for a in rows[0]]
    return IntMatrix.from_rows(rows, n)


def snf_suite(rng: random.Random, count: int = 500, oracle: bool = True) -> SuiteResult:
    def body(res):
        for _ in range(count):
            A = _random_matrix(rng)
            sf = smith(A)
            d = sf.diagonal
            ok = (sf.U @ A @ sf.V) == sf.D
            ok = ok and abs(det(sf.U)) == 1 and abs(det(sf.V)) == 1
            ok = ok and all(sf.D[i, j] == 0 for i in range(A.nrows) for j in range(A.ncols) if i != j)
            ok = ok and all(x >= 0 for x in d)
            ok = ok and all(d[k + 1] % d[k] == 0 if d[k] else d[k + 1] == 0 for k in range(len(d) - 1))
            if ok and oracle:
                ref = sympy_snf(Matrix(A.tolist()))
                ref_d = sorted(abs(ref[k, k]) for k in range(min(ref.shape)))
                ok = sorted(d) == ref_d
            res.record(ok, A.tolist())
    return _timed("smith normal form", body)


# -- localization --------------------------------------------------------------


def _with_finite_complement(rng, G, places):
    """Ensure at least one finite place lands in S^c; return (places, S)."""
    S = [p.id for p in places if rng.random() < 0.5]
    comp_finite = [p for p in places if p.id not in S and p.kind.value == "finite"]
    if not comp_finite:
        places = list(places) + [PlaceSpec(f"v{len(places)}", "finite", random_subgroup(rng, G))]
    return places, S


def semisimple_suite(rng: random.Random, count: int = 200) -> SuiteResult:
    """Finite carrier with a finite place outside S: always surjective."""
    def body(res):
        for _ in range(count):
            G = random_group(rng, 8)
            M = random_finite_module(rng, G, 16)
            places, S = _with_finite_complement(rng, G, random_places(rng, G))
            problem = LocalizationProblem(M, places, S)
            v = is_surjective(problem)
            res.record(v.surjective, f"{G.order=} |M|={M.carrier.order()} S={S} obstruction={v.obstruction}")
    return _timed("semisimple law", body)


def criterion_suite(rng: random.Random, count: int = 200) -> SuiteResult:
    """Containment criterion agrees with triviality of the obstruction group."""
    def body(res):
        for _ in range(count):
            G = random_group(rng, 8)
            M = random_module(rng, G)
            problem = random_problem(rng, M)
            try:
                v = is_surjective(problem)
            except GlocsurError as e:
                res.record(False, e)
                continue
            Q, _ = sha_group(problem)
            contained = v.im_sigma_comp.contains(v.im_sigma_S)
            res.record(contained == Q.is_trivial() == v.surjective,
                       f"contained={contained} sha={Q} verdict={v.surjective}")
    return _timed("criterion <=> obstruction", body)


def conjugacy_suite(rng: random.Random, count: int = 100) -> SuiteResult:
    """im λ_v is unchanged when the decomposition group is replaced by a conjugate."""
    def body(res):
        n = 0
        while n < count:
            G = random_group(rng, 8)
            M = random_module(rng, G)
            places = random_places(rng, G)
            base = LocalizationProblem(M, places, [])
            for p in places:
                ref = im_lambda(base, p.id)
                ok = True
                for g in G.elements():
                    q = PlaceSpec(p.id, p.kind, p.decomp.conjugate(g))
                    alt = LocalizationProblem(M, [q if r.id == p.id else r for r in places], [])
                    ok = ok and im_lambda(alt, p.id) == ref
                res.record(ok, f"place {p.id} kind {p.kind.value} decomp {p.decomp.elements}")
            n += 1
    return _timed("conjugacy invariance", body)


# -- six-term ------------------------------------------------------------------


def random_ses(rng: random.Random, max_order: int = 8, max_rank: int = 4) -> ShortExactSequence:
    G = random_group(rng, max_order)
    B2 = random_module(rng, G, max_rank)
    return ShortExactSequence.from_submodule(B2, random_ses_generators(rng, B2))


def exactness_suite(rng: random.Random, count: int = 100) -> SuiteResult:
    def body(res):
        for _ in range(count):
            seq = random_ses(rng)
            H = random_subgroup(rng, seq.group) if rng.random() < 0.3 else None
            rep = check_exactness(build_six_term(seq, H))
            res.record(rep.exact and all(rep.composites_zero.values()),
                       [(n.node, n.witness, n.note) for n in rep.failing()])
    return _timed("six-term exactness", body)


def delta_suite(rng: random.Random, count: int = 50, rederivations: int = 5) -> SuiteResult:
    """δ does not depend on the choices in its recipe."""
    def body(res):
        n = 0
        while n < count:
            seq = random_ses(rng)
            st = build_six_term(seq)
            gens = st.levels[2].quotient.torsion_generators()
            if not gens:
                continue
            n += 1
            ok = True
            for t, col in zip(gens, st.delta):
                for _ in range(rederivations):
                    ok = ok and delta_connect(seq, t, rng=rng) == mod1(col)
            res.record(ok, f"sequence #{n}")
    return _timed("delta determinism", body)


def oracle_suite(rng: random.Random, count: int = 100) -> SuiteResult:
    """Torsion coinvariants equal the rationalization kernel; |G| kills H_1."""
    def body(res):
        for _ in range(count):
            G = random_group(rng, 8)
            M = random_module(rng, G, 3)
            H = random_subgroup(rng, G) if rng.random() < 0.3 else None
            tors = coinvariants(M, H).torsion_part
            ok = tors == rationalization_kernel(M, H)
            ok = ok and verify_h1_killed(M, H)
            res.record(ok, f"{G.order=} rank={M.rank}")
    return _timed("Tor/H1 oracles", body)


# -- radical chain ---------------------------------------------------------------


def random_radical(rng: random.Random, G: FiniteGroup | None = None) -> RadicalData:
    G = random_group(rng, 8) if G is None else G
    M = random_lattice_module(rng, G, 4)
    return RadicalData(M, tuple(random_stable_generators(rng, M)))


def _chain_problem(rng, rad: RadicalData, v0_decomp: SubgroupOfG) -> LocalizationProblem:
    G = rad.M.group
    places = random_places(rng, G)
    S = [p.id for p in places if rng.random() < 0.6]
    places.append(PlaceSpec("w0", "finite", v0_decomp))
    S_tail = G.cyclic_subgroup_classes() if rng.random() < 0.3 else None
    return LocalizationProblem(rad.M, places, S, S_tail)


def radical_suite(rng: random.Random, count: int = 100) -> SuiteResult:
    """pr-condition at a finite v0 outside S forces surjectivity; split radicals always do."""
    def body(res):
        n = 0
        while n < count:
            kind = n % 3
            try:
                if kind == 0:
                    rad = random_radical(rng)
                    G = rad.M.group
                    good = [H for H in G.subgroups() if pr_condition(rad, H)]
                    problem = _chain_problem(rng, rad, rng.choice(good))
                    ok = theorem51_predict(rad, problem, "w0") and is_surjective(problem).surjective
                    if rng.random() < 0.5:
                        top, bottom, lad = radical_ladder(rad, problem.place("w0").decomp)
                        ok = ok and lad.commutes and lad.torsion_maps[2].is_surjective()
                elif kind == 1:
                    # split radical: trivial action on M_C
                    G = random_group(rng, 8)
                    M = GModule.trivial(G, FgAbGroup(rng.randint(1, 3)))
                    rad = RadicalData(M, tuple(random_stable_generators(rng, M)))
                    problem = _chain_problem(rng, rad, random_subgroup(rng, G))
                    ok = theorem51_predict(rad, problem, "w0") and is_surjective(problem).surjective
                else:
                    p = rng.choice([2, 3, 5, 7])
                    G = small_group(f"C{p}")
                    M = permutation_module(G, G.trivial())
                    if rng.random() < 0.5:
                        M = direct_sum(M, GModule.trivial(G, FgAbGroup(1)))
                    rad = RadicalData(M, tuple(random_stable_generators(rng, M)))
                    problem = _chain_problem(rng, rad, G.whole())
                    holds = prime_degree_check(rad, problem, "w0", p)
                    ok = holds and theorem51_predict(rad, problem, "w0") and is_surjective(problem).surjective
            except GlocsurError as e:
                ok = False
                res.record(False, e)
                n += 1
                continue
            res.record(ok, f"variant {kind}")
            n += 1
    return _timed("radical implication chain", body)


SUITES = {
    "snf": snf_suite,
    "semisimple": semisimple_suite,
    "criterion": criterion_suite,
    "exactness": exactness_suite,
    "delta": delta_suite,
    "oracles": oracle_suite,
    "conjugacy": conjugacy_suite,
    "radical": radical_suite,
}

DEFAULT_COUNTS = {
    "snf": 500, "semisimple": 200, "criterion": 200, "exactness": 100,
    "delta": 50, "oracles": 100, "conjugacy": 100, "radical": 100,
}


def run_all(seed: int = 0, scale: float = 1.0, only=None) -> list[SuiteResult]:
    out = []
    for name, suite in SUITES.items():
        if only and name not in only:
            continue
        rng = random.Random(f"{seed}:{name}")
        out.append(suite(rng, max(1, int(DEFAULT_COUNTS[name] * scale))))
    return out
