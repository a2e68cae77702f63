"""The seeded acceptance battery behind ``novbar verify`` and the test suite.

Each criterion is a function of a single integer seed returning a
:class:`CriterionResult`.  Random streams are derived from the seed and the
criterion number through string seeding, which Python hashes with SHA-512,
so reports are byte-identical across runs and interpreter sessions.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence

from .barcode import Bar, Barcode, barcodes, classical_oracle, dualize_barcode, project_barcode, spectral_invariant
from .complex import coefficient_extension, dual_complex, mapping_cone, mapping_cylinder
from .distance import bottleneck_all, bottleneck_degree, matching_oracle, witness_problems
from .exactnum import GF, INF, NEG_INF, QQ, QuadReal, ValueGroup
from .filtered import (
    DependentVectorsError,
    FilteredSpace,
    Inconsistent,
    filtration_spectrum,
    gram_schmidt,
    is_orthogonal,
    level,
    solve_many,
)
from .generators import (
    FIELD_CONFIGS,
    homotopy_equivalence,
    make_field,
    normal_form,
    perturb_levels,
    random_bars,
    random_basis,
    random_complex,
    random_isomorphism,
    random_level,
    random_points,
    random_scalar,
    random_summands,
    random_vector,
    split_quasiequivalence,
)
from .ingest import rips_complex
from .svd import LinearMap, boundary_depths, check_svd, dual_svd, extend_svd, robustness_oracle, svd, torsion_exponents

__all__ = ["CriterionResult", "CRITERIA", "run_criterion", "run_all", "format_report"]

MAX_REPORTED_FAILURES = 5

# groups named by criterion 2, paired with the grounds we exercise them over
INVARIANCE_CONFIGS = [
    ("Q", "trivial"),
    ("Fp:2", "trivial"),
    ("Q", "discrete:1/2"),
    ("Fp:3", "discrete:1/2"),
    ("Q", "quad:2:1,sqrt(2)"),
]

# a strictly larger group for every group in FIELD_CONFIGS
EXTENSIONS = {
    "trivial": "discrete:1/2",
    "discrete:1/2": "discrete:1/4",
    "discrete:1": "quad:2:1,sqrt(2)",
    "quad:2:1,sqrt(2)": "quad:2:1/2,sqrt(2)",
}

BOTTLENECK_GROUPS = ["trivial", "discrete:1", "quad:2:1,sqrt(2)"]


@dataclass
class CriterionResult:
    number: int
    title: str
    samples: int = 0
    failures: List[str] = dc_field(default_factory=list)
    failure_count: int = 0

    @property
    def passed(self) -> bool:
        return self.failure_count == 0 and self.samples > 0

    def fail(self, message: str) -> None:
        self.failure_count += 1
        if len(self.failures) < MAX_REPORTED_FAILURES:
            self.failures.append(message)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"criterion {self.number:2d} [{status}] {self.title}: {self.samples} samples, {self.failure_count} violations"


def _rng(seed: int, number: int, tag: str = "") -> random.Random:
    return random.Random(f"novbar:{seed}:{number}:{tag}")


def _field(config):
    return make_field(*config)


# --------------------------------------------------------------------------
# 1. classical persistence


def criterion_1(seed: int) -> CriterionResult:
    out = CriterionResult(1, "classical equivalence on Rips complexes")
    rng = _rng(seed, 1)
    for trial in range(200):
        ground = QQ if trial % 2 == 0 else GF(2)
        pts = random_points(rng, rng.randint(1, 8), dim=rng.choice([1, 2, 2, 3]))
        C = rips_complex(pts, max_dim=2, metric="Linf", ground=ground)
        verbose, concise = barcodes(C)
        oracle = classical_oracle(C)
        out.samples += 1
        if verbose != oracle or concise != oracle.concise():
            out.fail(f"trial {trial} over {ground.name}: {concise} vs oracle {oracle.concise()}")
    return out


# --------------------------------------------------------------------------
# 2. invariance under filtered isomorphisms


def _summand_barcode(field, summands) -> Barcode:
    return Barcode([Bar.make(k, a, L, field.group) for a, L, k in summands], field.group, verbose=True)


def criterion_2(seed: int) -> CriterionResult:
    out = CriterionResult(2, "verbose barcode invariant under filtered isomorphisms")
    rng = _rng(seed, 2)
    fields = [_field(c) for c in INVARIANCE_CONFIGS]
    for trial in range(100):
        F = fields[trial % len(fields)]
        C, summands = random_complex(rng, F, max_dim=5)
        D = random_isomorphism(rng, C).target
        vC, _ = barcodes(C)
        vD, _ = barcodes(D)
        expected = _summand_barcode(F, summands)
        out.samples += 1
        if not (vC == vD == expected):
            out.fail(f"trial {trial} ({F}): {vC} / {vD} / expected {expected}")
    return out


# --------------------------------------------------------------------------
# 3. boundary depths against brute-force robustness


def _random_two_term(rng: random.Random) -> LinearMap:
    F = make_field("Fp:2", "trivial")
    m, n = rng.randint(1, 4), rng.randint(1, 4)
    cod = FilteredSpace([random_level(rng, F.group) for _ in range(m)], F)
    cols, dom_levels = [], []
    for _ in range(n):
        col = tuple(F.one if rng.random() < 0.5 else F.zero for _ in range(m))
        lv = random_level(rng, F.group)
        floor = level(cod, col)
        if floor is not NEG_INF and lv < floor:
            lv = floor  # keep the map filtration non-increasing
        cols.append(col)
        dom_levels.append(lv)
    return LinearMap(FilteredSpace(dom_levels, F), cod, cols)


def criterion_3(seed: int) -> CriterionResult:
    out = CriterionResult(3, "boundary depths equal the robustness oracle")
    rng = _rng(seed, 3)
    for trial in range(100):
        A = _random_two_term(rng)
        pad = 4
        beta = boundary_depths(A, pad_to=pad)
        oracle = [robustness_oracle(A, k) for k in range(1, pad + 1)]
        out.samples += 1
        if beta != oracle:
            out.fail(f"trial {trial}: depths {beta} vs oracle {oracle}")
        elif torsion_exponents(A, pad_to=pad) != beta:
            out.fail(f"trial {trial}: torsion exponents differ from boundary depths")
    return out


# --------------------------------------------------------------------------
# 4. normal forms


def criterion_4(seed: int) -> CriterionResult:
    out = CriterionResult(4, "normal form barcodes read off the summands")
    rng = _rng(seed, 4)
    fields = [_field(c) for c in FIELD_CONFIGS]
    saw_zero = 0
    for trial in range(100):
        F = fields[trial % len(fields)]
        summands = random_summands(rng, F, zero_prob=0.35)
        C = normal_form(F, summands).complex
        verbose, concise = barcodes(C)
        expected = _summand_barcode(F, summands)
        out.samples += 1
        if verbose != expected:
            out.fail(f"trial {trial} ({F}): verbose {verbose} vs {expected}")
            continue
        zeros = [b for b in verbose if b.L is not INF and b.L == 0]
        saw_zero += bool(zeros)
        if any(b.L is not INF and b.L == 0 for b in concise) or concise != expected.concise():
            out.fail(f"trial {trial}: concise barcode {concise} keeps or loses the wrong bars")
    if saw_zero == 0:
        out.fail("no trial produced a zero-length summand; the family is too narrow")
    return out


# --------------------------------------------------------------------------
# 5. duality and coefficient extension of barcodes


def criterion_5(seed: int) -> CriterionResult:
    out = CriterionResult(5, "dual and extended barcodes follow the transforms")
    rng = _rng(seed, 5)
    configs = list(FIELD_CONFIGS)
    for trial in range(100):
        config = configs[trial % len(configs)]
        F = _field(config)
        C, _ = random_complex(rng, F, max_dim=4)
        vC, _ = barcodes(C)
        vdual, _ = barcodes(dual_complex(C))
        out.samples += 1
        if vdual != dualize_barcode(vC):
            out.fail(f"trial {trial} ({F}): dual barcode {vdual} vs {dualize_barcode(vC)}")
            continue
        bigger = ValueGroup.parse(EXTENSIONS[config[1]])
        vext, _ = barcodes(coefficient_extension(C, bigger))
        if vext != project_barcode(vC, bigger):
            out.fail(f"trial {trial} ({F} -> {bigger}): extension barcode {vext}")
    return out


# --------------------------------------------------------------------------
# 6. dual and extended SVDs


def _random_map(rng: random.Random, F) -> LinearMap:
    m, n = rng.randint(1, 4), rng.randint(1, 4)
    dom = FilteredSpace([random_level(rng, F.group) for _ in range(n)], F)
    cod = FilteredSpace([random_level(rng, F.group) for _ in range(m)], F)
    return LinearMap(dom, cod, [random_vector(rng, cod) for _ in range(n)])


def criterion_6(seed: int) -> CriterionResult:
    out = CriterionResult(6, "dual and extended SVDs satisfy the SVD conditions")
    rng = _rng(seed, 6)
    configs = list(FIELD_CONFIGS)
    for trial in range(100):
        config = configs[trial % len(configs)]
        F = _field(config)
        if trial % 2:
            A = _random_map(rng, F)
        else:
            C, _ = random_complex(rng, F, max_dim=4)
            ks = [k for k in C.degrees() if C.dim(k - 1)]
            A = C.boundary(rng.choice(ks)) if ks else _random_map(rng, F)
        r = svd(A)
        out.samples += 1
        problems = check_svd(A, r)
        At, rt = dual_svd(A, r)
        problems += [f"dual: {p}" for p in check_svd(At, rt)]
        B, rb = extend_svd(A, r, ValueGroup.parse(EXTENSIONS[config[1]]))
        problems += [f"extension: {p}" for p in check_svd(B, rb)]
        if problems:
            out.fail(f"trial {trial} ({F}): {'; '.join(problems)}")
    return out


# --------------------------------------------------------------------------
# 7-9. stability, cylinders, cones


def criterion_7(seed: int) -> CriterionResult:
    out = CriterionResult(7, "two-filtration stability under level perturbations")
    rng = _rng(seed, 7)
    fields = [_field(c) for c in FIELD_CONFIGS]
    for trial in range(100):
        F = fields[trial % len(fields)]
        C, _ = random_complex(rng, F, max_dim=4)
        delta = QuadReal(Fraction(rng.choice([1, 2, 3, 4]), 4))
        D = perturb_levels(rng, C, delta)
        d = bottleneck_all(F.group, barcodes(C)[1], barcodes(D)[1])
        out.samples += 1
        if d is INF or d > delta:
            out.fail(f"trial {trial} ({F}): bottleneck {d} exceeds delta {delta}")
    return out


def criterion_8(seed: int) -> CriterionResult:
    out = CriterionResult(8, "mapping cylinder of a homotopy equivalence")
    rng = _rng(seed, 8)
    fields = [_field(c) for c in FIELD_CONFIGS]
    for trial in range(60):
        F = fields[trial % len(fields)]
        Phi, _ = homotopy_equivalence(rng, F)
        cyl = mapping_cylinder(Phi, "l0", QuadReal(0))
        got, want = barcodes(cyl)[1], barcodes(Phi.target)[1]
        out.samples += 1
        if got != want:
            out.fail(f"trial {trial} ({F}): cylinder {got} vs target {want}")
    return out


def criterion_9(seed: int) -> CriterionResult:
    out = CriterionResult(9, "cone bars of a split quasiequivalence are at most 2 delta")
    rng = _rng(seed, 9)
    fields = [_field(c) for c in FIELD_CONFIGS]
    deltas = [QuadReal(0), QuadReal(Fraction(1, 2)), QuadReal(1)]
    for trial in range(90):
        F = fields[trial % len(fields)]
        delta = deltas[trial % 3]
        Phi = split_quasiequivalence(rng, F, delta, scramble=trial % 2 == 1)
        bars = barcodes(mapping_cone(Phi))[1]
        out.samples += 1
        long = [b for b in bars if b.L is INF or b.L > delta + delta]
        if long:
            out.fail(f"trial {trial} ({F}, delta {delta}): long cone bars {long}")
    return out


# --------------------------------------------------------------------------
# 10. bottleneck distance against exhaustive matching


def criterion_10(seed: int) -> CriterionResult:
    out = CriterionResult(10, "bottleneck distance equals exhaustive matching")
    rng = _rng(seed, 10)
    for spec in BOTTLENECK_GROUPS:
        G = ValueGroup.parse(spec)
        for size in range(7):
            for s in range(size + 1):
                for _ in range(6):
                    S = random_bars(rng, G, s, inf_prob=0.15)
                    T = random_bars(rng, G, size - s, inf_prob=0.15)
                    d, res = bottleneck_degree(G, S, T)
                    ref = matching_oracle(G, S, T)
                    out.samples += 1
                    if d != ref:
                        out.fail(f"{G}: {S} vs {T}: got {d}, oracle {ref}")
                        continue
                    bad = witness_problems(G, S, T, res)
                    if bad:
                        out.fail(f"{G}: witness for {S} vs {T}: {'; '.join(bad)}")
    return out


# --------------------------------------------------------------------------
# 11. axiom suites


def _nu_sum(a, b):
    return INF if a is INF or b is INF else a + b


def _suite_valuation(rng: random.Random, n: int, fail: Callable[[str], None]) -> int:
    fields = [_field(c) for c in FIELD_CONFIGS]
    for i in range(n):
        F = fields[i % len(fields)]
        x, y = random_scalar(rng, F), random_scalar(rng, F)
        nx_, ny = F.nu(x), F.nu(y)
        if (nx_ is INF) != (not x):
            fail(f"V1 over {F}: nu({x}) = {nx_}")
        if F.nu(x * y) != _nu_sum(nx_, ny):
            fail(f"V2 over {F}: nu({x} * {y}) = {F.nu(x * y)}")
        s = F.nu(x + y)
        lo = ny if nx_ is INF else nx_ if ny is INF else min(nx_, ny)
        if lo is not INF and s is not INF and s < lo:
            fail(f"V3 over {F}: nu({x} + {y}) = {s} below {lo}")
        if lo is not INF and s is INF and nx_ != ny:
            fail(f"V3 over {F}: sum of different valuations vanished")
    return n


def _random_space(rng: random.Random, F, lo: int = 1, hi: int = 4) -> FilteredSpace:
    return FilteredSpace([random_level(rng, F.group) for _ in range(rng.randint(lo, hi))], F)


def _suite_filtration(rng, n, fail) -> int:
    fields = [_field(c) for c in FIELD_CONFIGS]
    for i in range(n):
        F = fields[i % len(fields)]
        sp = _random_space(rng, F)
        x, y = random_vector(rng, sp), random_vector(rng, sp)
        lam = random_scalar(rng, F)
        lx, ly = level(sp, x), level(sp, y)
        if (lx is NEG_INF) != (not any(x)):
            fail(f"F1 over {F}: level {lx} for {x}")
        scaled = level(sp, tuple(lam * c for c in x))
        want = NEG_INF if (not lam or lx is NEG_INF) else lx - F.nu(lam)
        if scaled != want:
            fail(f"F2 over {F}: level of {lam} * x is {scaled}, expected {want}")
        lxy = level(sp, tuple(a + b for a, b in zip(x, y)))
        top = ly if lx is NEG_INF else lx if ly is NEG_INF else max(lx, ly)
        if lxy is not NEG_INF and (top is NEG_INF or lxy > top):
            fail(f"F3 over {F}: level(x + y) = {lxy} above {top}")
    return n


def _suite_strict(rng, n, fail) -> int:
    fields = [_field(c) for c in FIELD_CONFIGS]
    done = 0
    while done < n:
        F = fields[done % len(fields)]
        sp = _random_space(rng, F)
        x, y = random_vector(rng, sp), random_vector(rng, sp)
        lx, ly = level(sp, x), level(sp, y)
        if lx == ly:
            continue
        done += 1
        got = level(sp, tuple(a + b for a, b in zip(x, y)))
        want = ly if lx is NEG_INF else lx if ly is NEG_INF else max(lx, ly)
        if got != want:
            fail(f"strict over {F}: level(x + y) = {got}, expected {want}")
    return done


def _combo(rng, F, basis, dim) -> tuple:
    v = [F.zero] * dim
    for b in basis:
        c = random_scalar(rng, F)
        if c:
            v = [p + c * q for p, q in zip(v, b)]
    return tuple(v)


def _suite_orthogonal_subspaces(rng, n, fail) -> int:
    fields = [_field(c) for c in FIELD_CONFIGS]
    done = 0
    while done < n:
        F = fields[done % len(fields)]
        sp = _random_space(rng, F, 2, 5)
        basis, _ = random_basis(rng, sp)
        if not is_orthogonal(sp, basis):
            fail(f"random_basis over {F} produced a non-orthogonal basis")
            continue
        idx = list(range(sp.dim))
        rng.shuffle(idx)
        cut1 = rng.randint(1, sp.dim - 1)
        cut2 = rng.randint(cut1, sp.dim)
        U = [basis[i] for i in idx[:cut1]]
        V = [basis[i] for i in idx[cut1:cut2]]
        W = [basis[i] for i in idx[cut2:]]
        done += 1
        lv = lambda v: level(sp, v)
        # (i) a nonzero element of U never lies in V
        u = _combo(rng, F, U, sp.dim)
        if any(u) and V and solve_many(sp, V, [u])[0] is not Inconsistent:
            fail(f"bsorprop (i) over {F}: {u} lies in both subspaces")
        # (ii) U is orthogonal to V + W
        v, w = _combo(rng, F, V, sp.dim), _combo(rng, F, W, sp.dim)
        vw = tuple(a + b for a, b in zip(v, w))
        total = lv(tuple(a + b for a, b in zip(u, vw)))
        parts = [t for t in (lv(u), lv(vw)) if t is not NEG_INF]
        if total != (max(parts) if parts else NEG_INF):
            fail(f"bsorprop (ii) over {F}: level {total} vs parts {parts}")
        # (iii) orthogonal collections inside U and V concatenate orthogonally
        try:
            us = gram_schmidt(sp, [_combo(rng, F, U, sp.dim) for _ in range(rng.randint(1, len(U)))])
            vs = gram_schmidt(sp, [_combo(rng, F, V, sp.dim) for _ in range(rng.randint(1, len(V)))]) if V else []
        except DependentVectorsError:
            continue
        if not is_orthogonal(sp, us + vs):
            fail(f"bsorprop (iii) over {F}: concatenated collection is not orthogonal")
    return done


def _suite_spectrum(rng, n, fail) -> int:
    fields = [_field(c) for c in FIELD_CONFIGS]
    done = 0
    while done < n:
        F = fields[done % len(fields)]
        sp = _random_space(rng, F, 1, 5)
        want = filtration_spectrum(sp)
        key = F.group.coset_key
        # a level-preserving triangular change of basis
        basis, levels = random_basis(rng, sp)
        got = sorted(key(level(sp, b)) for b in basis)
        if got != want or sorted(key(t) for t in levels) != want:
            fail(f"spectrum over {F}: triangular basis gives {got}, expected {want}")
        # Gram-Schmidt applied to arbitrary spanning vectors
        try:
            ortho = gram_schmidt(sp, [random_vector(rng, sp, density=0.9) for _ in range(sp.dim)])
        except DependentVectorsError:
            continue
        done += 1
        got = sorted(key(level(sp, b)) for b in ortho)
        if got != want:
            fail(f"spectrum over {F}: Gram-Schmidt basis gives {got}, expected {want}")
    return done


def _homology_classes(C, k):
    """Cycles ``c_j`` from an SVD complement of the image inside the kernel, with their levels."""
    space = C.space(k)
    if C.dim(k - 1):
        Z = svd(C.boundary(k)).kernel_basis
    else:
        Z = space.basis()
    if not Z:
        return [], []
    Zspace = FilteredSpace([level(space, z) for z in Z], C.field)
    if C.dim(k + 1):
        coords = solve_many(space, Z, C.boundary(k + 1).columns)
        s = svd(LinearMap(C.space(k + 1), Zspace, coords))
        comp, comp_levels = s.x[s.rank:], s.x_levels[s.rank:]
    else:
        comp, comp_levels = Zspace.basis(), list(Zspace.levels)
    zero = C.field.zero
    cycles = []
    for x in comp:
        c = [zero] * space.dim
        for coef, z in zip(x, Z):
            if coef:
                c = [p + coef * q for p, q in zip(c, z)]
        cycles.append(tuple(c))
    return cycles, comp_levels


def _suite_spectral(rng, n, fail) -> int:
    fields = [_field(c) for c in FIELD_CONFIGS]
    done = 0
    trial = 0
    while done < n:
        F = fields[trial % len(fields)]
        trial += 1
        C, _ = random_complex(rng, F, max_dim=4)
        concise = barcodes(C)[1]
        image_cache = {}
        for k in C.degrees():
            cycles, lvls = _homology_classes(C, k)
            if not cycles:
                continue
            if C.dim(k + 1):
                image_cache[k] = svd(C.boundary(k + 1)).image_basis
            else:
                image_cache[k] = []
            key = F.group.coset_key
            inf_bars = sorted(key(b.a) for b in concise.in_degree(k) if b.infinite)
            rhos = [spectral_invariant(C, k, c, image_cache[k]) for c in cycles]
            if rhos != list(lvls):
                fail(f"spectral over {F}: rho of complement classes {rhos} vs levels {lvls}")
            if sorted(key(r) for r in rhos) != inf_bars:
                fail(f"spectral (ii) over {F}: basis classes {rhos} vs infinite bars {inf_bars}")
            for _ in range(10):
                lams = [random_scalar(rng, F) for _ in cycles]
                if not any(lams):
                    lams[rng.randrange(len(lams))] = F.one
                alpha = [F.zero] * C.dim(k)
                for lam, c in zip(lams, cycles):
                    if lam:
                        alpha = [p + lam * q for p, q in zip(alpha, c)]
                got = spectral_invariant(C, k, alpha, image_cache[k])
                want = max(r - F.nu(lam) for r, lam in zip(rhos, lams) if lam)
                done += 1
                if got != want:
                    fail(f"spectral (ii) over {F}: rho = {got}, expected {want}")
                elif key(got) not in inf_bars:
                    fail(f"spectral (i) over {F}: [rho] = {key(got)} is not an infinite bar")
    return done


AXIOM_SUITES = [
    ("valuation axioms V1-V3", _suite_valuation),
    ("filtration axioms F1-F3", _suite_filtration),
    ("strict ultrametric equality", _suite_strict),
    ("orthogonal subspaces (i)-(iii)", _suite_orthogonal_subspaces),
    ("filtration spectrum invariance", _suite_spectrum),
    ("spectral invariants of classes", _suite_spectral),
]

SUITE_SAMPLES = 500


def criterion_11(seed: int, samples: int = SUITE_SAMPLES) -> CriterionResult:
    out = CriterionResult(11, "algebraic axiom suites")
    least = None
    for name, suite in AXIOM_SUITES:
        rng = _rng(seed, 11, name)
        count = suite(rng, samples, lambda msg, name=name: out.fail(f"{name}: {msg}"))
        out.samples += count
        least = count if least is None else min(least, count)
    if least is not None and least < samples:
        out.fail(f"a suite ran only {least} samples")
    return out


CRITERIA: Dict[int, Callable[[int], CriterionResult]] = {
    1: criterion_1,
    2: criterion_2,
    3: criterion_3,
    4: criterion_4,
    5: criterion_5,
    6: criterion_6,
    7: criterion_7,
    8: criterion_8,
    9: criterion_9,
    10: criterion_10,
    11: criterion_11,
}


def run_criterion(number: int, seed: int = 0) -> CriterionResult:
    try:
        return CRITERIA[number](seed)
    except Exception as exc:  # report a crash as a failed criterion instead of aborting the battery
        res = CriterionResult(number, CRITERIA[number].__name__)
        res.fail(f"crashed: {type(exc).__name__}: {exc}")
        return res


def run_all(seed: int = 0, only: Optional[Sequence[int]] = None) -> List[CriterionResult]:
    numbers = sorted(CRITERIA) if not only else list(only)
    return [run_criterion(n, seed) for n in numbers]


def format_report(results: Sequence[CriterionResult], seed: int) -> str:
    lines = [f"novbar acceptance battery, seed {seed}"]
    for r in results:
        lines.append(r.line())
        lines.extend(f"    {msg}" for msg in r.failures)
    passed = sum(r.passed for r in results)
    lines.append(f"{passed}/{len(results)} criteria passed")
    return "\n".join(lines) + "\n"
