"""The acceptance suite: eleven exact checks, each with a wall-clock limit.

Every check returns a CriterionResult; ``passed`` already includes the time
limit.  ``run_all`` is what ``hmf selftest`` and tests/test_acceptance.py run.
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass
from typing import Callable

from . import kisin, local_galois as lg, qexp
from .embeddings import EmbeddingSet, PrimeDatum, ramified_quadratic
from .finite_field import GF
from .weight_lattice import (
    WeightVector,
    delta_vector,
    hasse_compare,
    hasse_weight,
    in_min_cone,
    lambda_class,
    lambda_equal,
    lattice_index,
)


@dataclass(frozen=True)
class CriterionResult:
    number: int
    name: str
    ok: bool
    seconds: float
    limit: float
    detail: str

    @property
    def passed(self) -> bool:
        return self.ok and self.seconds < self.limit

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} criterion {self.number:2d} {self.name}: {self.detail} ({self.seconds:.2f}s / {self.limit:g}s)"


def _timed(number: int, name: str, limit: float, fn: Callable[[], tuple[bool, str]]) -> CriterionResult:
    t0 = time.perf_counter()
    ok, detail = fn()
    return CriterionResult(number, name, ok, time.perf_counter() - t0, limit, detail)


def _configs():
    fe = [(f, e) for f in range(1, 4) for e in range(1, 4)]
    for p in (2, 3, 5):
        for a in fe:
            yield (PrimeDatum("p1", p, *a),)
        for a, b in itertools.combinations_with_replacement(fe, 2):
            yield (PrimeDatum("p1", p, *a), PrimeDatum("p2", p, *b))


def lattice_index_check() -> tuple[bool, str]:
    n = 0
    for primes in _configs():
        lattice_index(EmbeddingSet(primes))  # raises on mismatch
        n += 1
    return True, f"{n} configurations"


def lambda_kernel_check(seed: int = 0, pairs: int = 1000) -> tuple[bool, str]:
    rng = random.Random(seed)
    configs = [
        [PrimeDatum("p1", 3, 1, 2)],
        [PrimeDatum("p1", 3, 2, 1)],
        [PrimeDatum("p1", 2, 3, 1)],
        [PrimeDatum("p1", 5, 1, 3)],
        [PrimeDatum("p1", 3, 1, 2), PrimeDatum("p2", 3, 2, 1)],
        [PrimeDatum("p1", 2, 1, 2), PrimeDatum("p2", 2, 2, 2)],
    ]
    bad = 0
    equal = 0
    for primes in configs:
        eset = EmbeddingSet(primes)
        hs = [hasse_weight(eset, s) for s in eset.embeddings]
        for n in range(pairs):
            m = WeightVector(eset, tuple(rng.randint(-9, 9) for _ in range(eset.d)))
            if n % 2:
                other = m
                for h in hs:
                    other = other + rng.randint(-3, 3) * h
            else:
                other = WeightVector(eset, tuple(rng.randint(-9, 9) for _ in range(eset.d)))
            got = lambda_equal(m, other)
            equal += got
            if got != (lambda_class(m) == lambda_class(other)):
                bad += 1
    return bad == 0, f"{len(configs) * pairs} pairs, {equal} equal, {bad} disagreements"


def ample_check() -> tuple[bool, str]:
    bad = []
    e = 2
    for p in (3, 5):
        eset = ramified_quadratic(p)
        delta = delta_vector(eset)
        for ell in range(6):
            k = (p - 1) * (WeightVector.constant(eset, ell) + delta)
            res = hasse_compare(k, WeightVector.zero(eset))
            want = tuple(ell * (e + (j - 1) * (p - 1)) + (e * (e - 1) + (j - 1) * (j - 2) * (p - 1)) // 2
                         for j in range(1, e + 1))
            if tuple(res.r) != want or not res.le:
                bad.append((p, ell))
    return not bad, "12 cases" if not bad else f"mismatches {bad}"


def cone_search(p: int, bound: int = 12) -> list[tuple[int, int, tuple[int, int]]]:
    """All (s1, s2, k) with (2,2) = s1(-1,p) + s2(1,-1) + (k2, p k1), k in the positive cone.

    Summing the two coordinates gives 4 = (p-1)s1 + k2 + p k1, so every
    coordinate is at most 4 and s2 = 2 + s1 - k2 at most 6; the box is larger.
    """
    eset = ramified_quadratic(p)
    out = []
    for s1, s2, k1, k2 in itertools.product(range(bound + 1), repeat=4):
        if (-s1 + s2 + k2, p * s1 - s2 + p * k1) != (2, 2):
            continue
        if in_min_cone(WeightVector(eset, (k1, k2)), positive=True):
            out.append((s1, s2, (k1, k2)))
    return out


def cone_check() -> tuple[bool, str]:
    found = {p: cone_search(p) for p in (3, 5, 7, 11)}
    ok = all(not v for p, v in found.items() if p != 3) and found[3] and {s[2] for s in found[3]} == {(1, 1)}
    return bool(ok), f"solutions {found}"


def _pw1_domain(p):
    for rep in lg.all_shapes(p):
        for m in range(p - 1):
            yield rep, m


def repshape_gls_check() -> tuple[bool, str]:
    checked = bad = 0
    for p in (3, 5):
        n1 = p - 1
        for rep, m in _pw1_domain(p):
            for w in range(1, p + 2):
                if not lg.pw1_lift_decision(rep, w, m):
                    continue
                checked += 1
                we = 2 if w == p + 1 else w
                psi0 = -1 - we - m
                if isinstance(rep, lg.Reducible):
                    pairs = lg.inertial_pairs(lg.QuadoBTWeights.ramified_quadratic(p, 0, we - 1))
                    shape = tuple(sorted(((rep.psi + rep.chi - psi0) % n1, (rep.psi - psi0) % n1)))
                else:
                    pairs = lg.inertial_pairs(lg.QuadoBTWeights.uniform(p, 2, 2, (0, we - 1)))
                    mod = p * p - 1
                    shape = tuple(sorted(((rep.xi - (p + 1) * psi0) % mod,
                                          (rep.conjugate - (p + 1) * psi0) % mod)))
                if shape not in pairs:
                    bad += 1
    return bad == 0 and checked > 0, f"{checked} accepted triples, {bad} outside the inertial pairs"


def boundary_check() -> tuple[bool, str]:
    n = bad = 0
    for p in (3, 5):
        for rep, m in _pw1_domain(p):
            n += 1
            if lg.pw1_lift_decision(rep, 2, m) != lg.pw1_lift_decision(rep, p + 1, m):
                bad += 1
            if lg.pw1_lift_decision(rep, 1, m) != lg.is_inertially_unramified(lg.twist_by_omega(rep, 2 + m)):
                bad += 1
    return bad == 0, f"{n} (rep, m) pairs, {bad} disagreements"


def kisin_count_check() -> tuple[bool, str]:
    bad = []
    cases = 0
    for q in (3, 5, 9):
        F = GF(q)
        units = list(F.units())
        for a, b in itertools.product(units, repeat=2):
            for n in range(2, F.p + 1):
                cases += 1
                if kisin.ext_dimension(n, 1, a, b, q) != 1:
                    bad.append((q, n, a, b))
            cases += 1
            want = 2 if a == b else 1
            if kisin.ext_dimension(1, 1, a, b, q) != want:
                bad.append((q, 1, a, b))
    shown = sorted({(q, n, "a=b" if a == b else "a!=b") for q, n, a, b in bad})
    return not bad, f"{cases} cases" if not bad else f"{len(bad)}/{cases} cases differ: {shown}"


def morphism_check() -> tuple[bool, str]:
    good = total = control_bad = 0
    for q in (3, 5, 9):
        F = GF(q)
        pert = kisin.perturbed_morphism(F)
        for a, b in itertools.product(F.units(), repeat=2):
            for c, d in itertools.product(F.elements(), repeat=2):
                for family in (kisin.family_w_p, kisin.family_w_p1):
                    src, tgt, mor = family(F, a, b, c, d)
                    total += 1
                    good += kisin.check_phi_morphism(mor, src, tgt)
                    if c and kisin.check_phi_morphism(pert, src, tgt):
                        control_bad += 1
    ok = good == total and control_bad == 0
    return ok, f"{good}/{total} maps commute with phi, {control_bad} perturbed controls passed"


def _random_weight(rng, p):
    return (rng.randint(1, p + 1), rng.randint(1, p + 1)), (rng.randint(-3, 2), rng.randint(-3, 2))


def qexp_identities_check(seed: int = 0, forms: int = 200, trace_bound: int = 60) -> tuple[bool, str]:
    rng = random.Random(seed)
    failures = []
    sizes = {"comm": 0, "twist": 0, "hasse": 0}
    for D, p in ((3, 3), (5, 5)):
        S = qexp.default_setup(D, p)
        F = S.F
        vs = sorted(S.primes)
        for n in range(forms):
            k, m = _random_weight(rng, p)
            f = qexp.random_form(S, k, m, trace_bound, rng)
            d = {v: rng.randrange(1, F.q) for v in vs}
            sa = {v: qexp.SAction(scalar=d[v]) for v in vs}
            if not qexp.op_Theta(qexp.op_Vp(f)).is_zero():
                failures.append(("theta-V", D, n))
            for v, w in itertools.combinations(vs, 2):
                g = qexp.op_Tv(qexp.op_Tv(f, w, sa[w]), v, sa[v])
                h = qexp.op_Tv(qexp.op_Tv(f, v, sa[v]), w, sa[w])
                sizes["comm"] += len(g.common_window(h))
                if not g.agrees_with(h):
                    failures.append(("commute", D, n, v, w))
            for name, ch in S.characters.items():
                mode = "u1" if ch.conductor else "plain"
                tf = qexp.twist(f, name, mode)
                for v in vs:
                    if v in ch.conductor:
                        continue
                    xv = S.xi_at(name, v)
                    lhs = qexp.op_Tv(tf, v, qexp.SAction(scalar=qexp.twisted_s(S, name, v, d[v])))
                    rhs = qexp.twist(qexp.op_Tv(f, v, sa[v]), name, mode)
                    rhs = rhs.with_coeffs({i: F.mul(xv, c) for i, c in rhs.coeffs.items()})
                    sizes["twist"] += len(lhs.common_window(rhs))
                    if not lhs.agrees_with(rhs):
                        failures.append(("twist", D, n, name, v))
            consts = {t: rng.randrange(1, F.q) for t in S.components}
            # H_sigma has the same constant on a component and on its images under sigma_v
            if any(S.primes[v].perm[t] != t for v in vs for t in S.components):
                consts = {t: consts[S.components[0]] for t in S.components}
            pos = rng.randrange(2)
            for v in vs:
                lhs = qexp.op_Tv(qexp.mul_Hasse(f, pos, consts), v, sa[v])
                rhs = qexp.mul_Hasse(qexp.op_Tv(f, v, sa[v]), pos, consts)
                sizes["hasse"] += len(lhs.common_window(rhs))
                if not lhs.agrees_with(rhs):
                    failures.append(("hasse", D, n, v))
    vacuous = [key for key, size in sizes.items() if size == 0]
    ok = not failures and not vacuous
    detail = f"{2 * forms} forms, compared indices {sizes}"
    if failures:
        detail += f", {len(failures)} failures, first {failures[:3]}"
    if vacuous:
        detail += f", empty common windows for {vacuous}"
    return ok, detail


def eigen_check(seed: int = 0, systems: int = 4, trace_bound: int = 60) -> tuple[bool, str]:
    rng = random.Random(seed)
    problems = []
    reached = 0
    for D, p in ((3, 3), (5, 5)):
        S = qexp.default_setup(D, p)
        F = S.F
        vs = sorted(S.primes)
        for n in range(systems):
            a = {v: rng.randrange(F.q) for v in vs}
            d = {v: rng.randrange(1, F.q) for v in vs}
            k, m = (1, 2), (-1, -1)
            a_p, d_p = rng.randrange(F.q), rng.randrange(1, F.q)
            eb = qexp.eigen_build(S, k, m, trace_bound, a, d, ap_mode="T", a_p=a_p, d_p=d_p)
            f = eb.form
            reached += len(f.coeffs)
            if f.get("c0", (1, 0)) != 1:
                problems.append(("base", D, n))
            if not qexp.satisfies_eigen(f, a, d):
                problems.append(("eigen", D, n))
            tp = qexp.op_Tp(f, qexp.SAction(scalar=d_p))
            if any(tp.coeffs[i] != F.mul(a_p, f.coeffs[i]) for i in tp.window & f.window):
                problems.append(("T_p", D, n))
            if not qexp.unit_consistent(f):
                problems.append(("units", D, n))
            lev = [vs[n % len(vs)]]
            a_lev = dict(a, **{lev[0]: 0})
            g = qexp.eigen_build(S, k, m, trace_bound, a_lev, d, level=lev).form
            if not (qexp.is_stabilized(g, lev) and qexp.satisfies_eigen(g, a_lev, d, level=lev)):
                problems.append(("stabilized", D, n))
            z = qexp.eigen_build(S, k, m, trace_bound, a, d, ap_mode="T", a_p=a_p, d_p=d_p, base_value=0).form
            if not z.is_zero() or set(z.coeffs) != set(f.coeffs):
                problems.append(("base-zero", D, n))
    ok = not problems and reached > 0
    return ok, f"{2 * systems} eigen systems, {reached} coefficients built" + (
        f", problems {problems}" if problems else "")


def vchi_check() -> tuple[bool, str]:
    bad = []
    n_cases = 0
    for p in (3, 5):
        for n in range(1, p + 1):
            for a, b in itertools.product(range(1, p), repeat=2):
                n_cases += 1
                chi = (n - 1) % (p - 1)
                trivial = chi == 0 and a == b
                want = p ** lg.vchi_dim(chi, trivial, p)
                got = len(kisin.enumerate_extension_classes(n, 1, a, b, p))
                if got != want:
                    bad.append((p, n, a, b, got, want))
    return not bad, f"{n_cases} shapes" + (f", mismatches {bad}" if bad else "")


CRITERIA = [
    (1, "lattice index", 1.0, lattice_index_check),
    (2, "lambda kernel", 5.0, lambda_kernel_check),
    (3, "Hasse decomposition closed form", 1.0, ample_check),
    (4, "cone search vector", 1.0, cone_check),
    (5, "partial weight one vs quado-BT pairs", 10.0, repshape_gls_check),
    (6, "w = 2 ~ w = p+1 and w = 1 boundary", 5.0, boundary_check),
    (7, "Kisin extension counts", 30.0, kisin_count_check),
    (8, "phi-morphism families", 30.0, morphism_check),
    (9, "q-expansion identities", 60.0, qexp_identities_check),
    (10, "eigenform recursion", 10.0, eigen_check),
    (11, "V_chi vs extension classes", 10.0, vchi_check),
]


def run_criterion(number: int, seed: int = 0) -> CriterionResult:
    for num, name, limit, fn in CRITERIA:
        if num == number:
            if fn in (lambda_kernel_check, qexp_identities_check, eigen_check):
                return _timed(num, name, limit, lambda: fn(seed=seed))
            return _timed(num, name, limit, fn)
    raise KeyError(number)


def run_all(seed: int = 0) -> list[CriterionResult]:
    return [run_criterion(num, seed) for num, *_ in CRITERIA]
