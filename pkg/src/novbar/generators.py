"""Seeded random families used by the property tests and ``verify``.

Everything here takes a ``random.Random`` so that a seed pins the whole
stream.  Random complexes are built as direct sums of elementary pieces and
then scrambled by a filtered chain isomorphism; since every complex is
isomorphic to such a sum, this reaches every isomorphism type while
keeping the expected barcode known in advance.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .complex import FilteredChainMap, FloerComplex
from .exactnum import INF, QQ, GF, QuadReal, ValueGroup
from .filtered import FilteredSpace, Vector, level, solve_many
from .novikov import NovikovField

__all__ = [
    "FIELD_CONFIGS",
    "make_field",
    "random_group_element",
    "random_level",
    "random_scalar",
    "random_vector",
    "random_summands",
    "normal_form",
    "random_basis",
    "random_isomorphism",
    "random_complex",
    "perturb_levels",
    "homotopy_equivalence",
    "split_quasiequivalence",
    "random_bars",
    "random_points",
]

# (ground, group spec) pairs used by default
FIELD_CONFIGS = [
    ("Q", "trivial"),
    ("Fp:2", "trivial"),
    ("Q", "discrete:1/2"),
    ("Fp:3", "discrete:1"),
    ("Q", "quad:2:1,sqrt(2)"),
]

_QUARTERS = [Fraction(n, 4) for n in range(0, 17)]


def make_field(ground: str, group: str) -> NovikovField:
    from .exactnum import GroundField

    return NovikovField(GroundField.parse(ground), ValueGroup.parse(group))


def _positive_generator(G: ValueGroup) -> QuadReal:
    g = G.generators[0]
    return g if g > 0 else -g


def random_group_element(rng: random.Random, G: ValueGroup, at_least=None, spread: int = 2) -> QuadReal:
    """A small element of ``G``; with ``at_least`` it is pushed up past that bound."""
    if G.rank == 0:
        if at_least is not None and at_least > 0:
            raise ValueError("the trivial group has no element above a positive bound")
        return QuadReal(0)
    h = QuadReal(0)
    for g in G.generators:
        h = h + g * rng.randint(-spread, spread)
    if at_least is not None:
        p = _positive_generator(G)
        gap = at_least - h
        if gap > 0:
            h = h + p * ((gap / p).ceil())
        h = h + p * rng.randint(0, 1)
    return h


def random_level(rng: random.Random, G: ValueGroup) -> QuadReal:
    """Levels on a quarter grid in ``[0, 4]``; quadratic groups sometimes get an irrational one."""
    t = QuadReal(rng.choice(_QUARTERS))
    if G.d and rng.random() < 0.3:
        t = t + QuadReal(0, Fraction(rng.choice([-1, 1]), rng.choice([1, 2])), G.d)
    return t


def _ground_nonzero(rng: random.Random, field: NovikovField):
    K = field.ground
    if K.p:
        return K(rng.randint(1, K.p - 1))
    num = rng.choice([1, 1, 1, -1, 2, -2, 3])
    return K(Fraction(num, rng.choice([1, 1, 2])))


def random_scalar(rng: random.Random, field: NovikovField, min_valuation=None, nonzero: bool = False,
                  allow_quotient: bool = True):
    """A random element of the Novikov field with ``nu >= min_valuation``.

    Shapes: a monomial, a binomial, or (for rank-one groups) a binomial over
    ``1 - c T^p`` with ``p > 0``, whose valuation is that of the numerator.
    """
    if not nonzero and rng.random() < 0.15:
        return field.zero
    c = _ground_nonzero(rng, field)
    if field.trivial:
        return c
    G = field.group
    g1 = random_group_element(rng, G, at_least=min_valuation)
    x = field.monomial(c, g1)
    if rng.random() < 0.4:
        g2 = random_group_element(rng, G, at_least=(g1 if min_valuation is None else min_valuation))
        if g2 != g1:
            x = x + field.monomial(_ground_nonzero(rng, field), g2)
    if allow_quotient and G.rank == 1 and rng.random() < 0.25:
        p = _positive_generator(G) * rng.randint(1, 2)
        x = x / (field.one - field.monomial(_ground_nonzero(rng, field), p))
    return x


def random_vector(rng: random.Random, space: FilteredSpace, density: float = 0.7) -> Vector:
    f = space.field
    return tuple(random_scalar(rng, f) if rng.random() < density else f.zero for _ in range(space.dim))


# --------------------------------------------------------------------------
# normal forms


Summand = Tuple[QuadReal, object, int]  # (a, L or INF, degree)


def random_summands(rng: random.Random, field: NovikovField, degrees: Sequence[int] = (0, 1, 2),
                    max_dim: int = 5, count: Optional[int] = None, zero_prob: float = 0.15,
                    inf_prob: float = 0.25) -> List[Summand]:
    """Elementary summands whose sum has at most ``max_dim`` generators per degree."""
    G = field.group
    lo, hi = min(degrees), max(degrees)
    dims: Dict[int, int] = {}
    out: List[Summand] = []
    target = count if count is not None else rng.randint(1, 2 * max_dim)
    for _ in range(8 * target):
        if len(out) >= target:
            break
        k = rng.randint(lo, hi)
        a = random_level(rng, G)
        if k == hi or rng.random() < inf_prob:
            L = INF
            need = {k: 1}
        else:
            L = QuadReal(0) if rng.random() < zero_prob else random_level(rng, G) + QuadReal(Fraction(1, 4))
            if L < 0:
                L = -L
            need = {k: 1, k + 1: 1}
        if any(dims.get(d, 0) + n > max_dim for d, n in need.items()):
            continue
        for d, n in need.items():
            dims[d] = dims.get(d, 0) + n
        out.append((a, L, k))
    return out


@dataclass
class NormalForm:
    complex: FloerComplex
    summands: List[Summand]
    # positions[n] = (index of x in degree k, index of y in degree k+1 or None)
    positions: List[Tuple[int, Optional[int]]]


def normal_form(field: NovikovField, summands: Sequence[Summand]) -> NormalForm:
    """Direct sum of ``E(a, L, k)`` with generator positions recorded."""
    levels: Dict[int, List[QuadReal]] = {}
    edges: List[Tuple[int, int, int]] = []  # (degree of y, row x, col y)
    positions = []
    for a, L, k in summands:
        levels.setdefault(k, []).append(a)
        xi = len(levels[k]) - 1
        if L is INF:
            positions.append((xi, None))
            continue
        levels.setdefault(k + 1, []).append(a + L)
        yi = len(levels[k + 1]) - 1
        edges.append((k + 1, xi, yi))
        positions.append((xi, yi))
    zero, one = field.zero, field.one
    bnds: Dict[int, List[List]] = {}
    for k in levels:
        if k - 1 in levels:
            bnds[k] = [[zero] * len(levels[k - 1]) for _ in levels[k]]
    for k, xi, yi in edges:
        bnds[k][yi][xi] = one
    C = FloerComplex.from_levels(field, levels, bnds)
    return NormalForm(C, list(summands), positions)


# --------------------------------------------------------------------------
# filtered isomorphisms


def random_basis(rng: random.Random, space: FilteredSpace, density: float = 0.6) -> Tuple[List[Vector], List[QuadReal]]:
    """A random orthogonal basis with its levels.

    Vector ``j`` is ``lam_j e_{pi(j)} + sum_{i<j} mu_ij e_{pi(i)}`` for a random
    order ``pi``, with ``lam_j = c T^g`` and ``nu(mu_ij) >= t_{pi(i)} - level_j``
    so that the leading term dominates; such triangular families are orthogonal.
    """
    field = space.field
    G = field.group
    n = space.dim
    pi = list(range(n))
    rng.shuffle(pi)
    t = space.levels
    basis, levels = [], []
    for j in range(n):
        g = random_group_element(rng, G, spread=1)
        lead = field.monomial(_ground_nonzero(rng, field), g) if not field.trivial else _ground_nonzero(rng, field)
        lv = t[pi[j]] - g
        v = [field.zero] * n
        v[pi[j]] = lead
        for i in range(j):
            if rng.random() > density:
                continue
            bound = t[pi[i]] - lv
            if field.trivial and bound > 0:
                continue
            v[pi[i]] = random_scalar(rng, field, min_valuation=None if field.trivial else bound,
                                     allow_quotient=False)
        basis.append(tuple(v))
        levels.append(lv)
    return basis, levels


@dataclass
class Isomorphism:
    """``target`` with ``P[k]`` giving each new generator in source coordinates."""

    source: FloerComplex
    target: FloerComplex
    P: Dict[int, List[Vector]]

    def to_target(self, k: int, v: Sequence) -> Vector:
        if not self.P.get(k):
            return tuple()
        return solve_many(self.source.space(k), self.P[k], [v])[0]

    def to_source(self, k: int, coords: Sequence) -> Vector:
        space = self.source.space(k)
        out = list(space.zero())
        for c, w in zip(coords, self.P.get(k, [])):
            if c:
                for i, a in enumerate(w):
                    if a:
                        out[i] = out[i] + c * a
        return tuple(out)


def random_isomorphism(rng: random.Random, C: FloerComplex, density: float = 0.6) -> Isomorphism:
    """Re-express ``C`` in a random orthogonal basis of each chain group."""
    P: Dict[int, List[Vector]] = {}
    levels: Dict[int, List[QuadReal]] = {}
    for k in C.degrees():
        P[k], levels[k] = random_basis(rng, C.space(k), density)
    bnds = {}
    for k in C.degrees():
        if not C.dim(k - 1):
            continue
        d = C.boundary(k)
        images = [d.apply(w) for w in P[k]]
        bnds[k] = solve_many(C.space(k - 1), P[k - 1], images)
    D = FloerComplex.from_levels(C.field, levels, bnds)
    return Isomorphism(C, D, P)


def transport_map(Phi_cols: Dict[int, List[Vector]], src: Isomorphism, tgt: Isomorphism) -> Dict[int, List[Vector]]:
    """Rewrite a chain map given on the sources of two isomorphisms in their targets' bases."""
    out = {}
    for k, cols in Phi_cols.items():
        if not src.P.get(k) or not tgt.P.get(k):
            continue
        images = []
        for w in src.P[k]:
            img = list(tgt.source.space(k).zero())
            for c, col in zip(w, cols):
                if c:
                    for i, a in enumerate(col):
                        if a:
                            img[i] = img[i] + c * a
            images.append(tuple(img))
        out[k] = solve_many(tgt.source.space(k), tgt.P[k], images)
    return out


def random_complex(rng: random.Random, field: NovikovField, max_dim: int = 5,
                   degrees: Sequence[int] = (0, 1, 2), scramble: bool = True, **kw):
    """``(complex, summands)``; the summands are the expected verbose barcode."""
    summands = random_summands(rng, field, degrees, max_dim, **kw)
    nf = normal_form(field, summands)
    if not scramble:
        return nf.complex, summands
    return random_isomorphism(rng, nf.complex).target, summands


# --------------------------------------------------------------------------
# perturbations and maps between normal forms


def perturb_levels(rng: random.Random, C: FloerComplex, delta) -> FloerComplex:
    """Same boundary, each level moved by at most ``delta`` (and one by exactly ``delta``).

    Degrees are handled upward; a generator whose new level would fall below
    a term of its boundary is raised to that term, which never moves it
    more than ``delta`` from where it started.
    """
    delta = delta if isinstance(delta, QuadReal) else QuadReal(Fraction(delta))
    steps = [delta * Fraction(n, 4) for n in range(-4, 5)]
    nu = C.field.nu
    new: Dict[int, List[QuadReal]] = {}
    degs = C.degrees()
    # one generator of the lowest degree moves by exactly delta; nothing clamps it
    forced = None
    if degs and delta:
        forced = (degs[0], rng.randrange(C.dim(degs[0])), delta if rng.random() < 0.5 else -delta)
    for k in degs:
        d = C.boundary(k)
        lv = []
        for j, t in enumerate(C.levels(k)):
            s = t + (forced[2] if forced and forced[:2] == (k, j) else rng.choice(steps))
            if C.dim(k - 1):
                for i, a in enumerate(d.columns[j]):
                    if a:
                        floor = new[k - 1][i] - nu(a)
                        if floor > s:
                            s = floor
            lv.append(s)
        new[k] = lv
    bnds = {k: C.boundary(k).columns for k in degs if C.dim(k - 1)}
    return FloerComplex.from_levels(C.field, new, bnds)


def _summand_map(field: NovikovField, src: NormalForm, tgt: NormalForm, pairs, scales) -> Dict[int, List[Vector]]:
    """Chain map sending summand ``s`` of ``src`` to ``scales[s]`` times summand ``pairs[s]`` of ``tgt``."""
    C, D = src.complex, tgt.complex
    cols: Dict[int, List[List]] = {k: [[field.zero] * D.dim(k) for _ in range(C.dim(k))] for k in C.degrees() if D.dim(k)}
    for s, t in pairs.items():
        (_, _, k) = src.summands[s]
        xs, ys = src.positions[s]
        xt, yt = tgt.positions[t]
        lam = scales.get(s, field.one)
        cols[k][xs][xt] = lam
        if ys is not None and yt is not None:
            cols[k + 1][ys][yt] = lam
    return {k: [tuple(c) for c in v] for k, v in cols.items()}


def homotopy_equivalence(rng: random.Random, field: NovikovField, max_dim: int = 4, scramble: bool = True):
    """``(Phi, expected)``: a filtered homotopy equivalence ``C -> D`` with zero shift.

    ``C`` and ``D`` share a normal form and differ by zero-length pads
    ``E(a, 0, k)``; ``Phi`` is the identity on the shared part and kills the
    pads of ``C``.
    """
    core = random_summands(rng, field, (0, 1, 2), max_dim - 1, zero_prob=0.0)
    G = field.group

    def pads():
        return [(random_level(rng, G), QuadReal(0), rng.randint(0, 1)) for _ in range(rng.randint(0, 2))]

    sc, sd = core + pads(), pads() + core
    nC, nD = normal_form(field, sc), normal_form(field, sd)
    off = len(sd) - len(core)
    pairs = {s: off + s for s in range(len(core))}
    cols = _summand_map(field, nC, nD, pairs, {})
    if scramble:
        iC, iD = random_isomorphism(rng, nC.complex), random_isomorphism(rng, nD.complex)
        cols = transport_map(cols, iC, iD)
        C, D = iC.target, iD.target
    else:
        C, D = nC.complex, nD.complex
    return FilteredChainMap(C, D, cols, QuadReal(0)), sd


def split_quasiequivalence(rng: random.Random, field: NovikovField, delta, max_dim: int = 4, scramble: bool = False):
    """A split ``delta``-quasiequivalence ``Phi: C -> D`` between matched normal forms.

    Each summand ``E(a, L, k)`` of ``C`` is matched with ``E(a', L', k)`` in ``D``
    where both endpoints move by at most ``delta`` (up to a ``T^g`` rescaling,
    which shifts ``a'`` by ``g`` while ``Phi`` carries the compensating
    ``T^g``).  Unmatched summands on either side have length at most ``2 delta``.
    """
    delta = delta if isinstance(delta, QuadReal) else QuadReal(Fraction(delta))
    G = field.group
    steps = [delta * Fraction(n, 2) for n in range(-2, 3)]
    core = random_summands(rng, field, (0, 1, 2), max_dim - 1)
    matched = []
    for a, L, k in core:
        a2 = a + rng.choice(steps)
        if L is INF:
            matched.append((a2, INF, k))
            continue
        end = a + L + rng.choice(steps)
        if end < a2:
            end = a2
        matched.append((a2, end - a2, k))
    g_shift = [random_group_element(rng, G, spread=1) for _ in core]
    matched = [(a + g, L, k) for (a, L, k), g in zip(matched, g_shift)]

    def shorts():
        out = []
        for _ in range(rng.randint(0, 2)):
            L = delta * Fraction(rng.randint(0, 4), 2)
            out.append((random_level(rng, G), L, rng.randint(0, 1)))
        return out

    sc = core + shorts()
    sd = shorts() + matched
    nC, nD = normal_form(field, sc), normal_form(field, sd)
    off = len(sd) - len(matched)
    pairs = {s: off + s for s in range(len(core))}
    scales = {s: (field.T(g_shift[s]) if not field.trivial else field.one) for s in range(len(core))}
    cols = _summand_map(field, nC, nD, pairs, scales)
    if scramble:
        iC, iD = random_isomorphism(rng, nC.complex), random_isomorphism(rng, nD.complex)
        cols = transport_map(cols, iC, iD)
        C, D = iC.target, iD.target
    else:
        C, D = nC.complex, nD.complex
    return FilteredChainMap(C, D, cols, delta)


# --------------------------------------------------------------------------
# bars and points


def random_bars(rng: random.Random, G: ValueGroup, n: int, degree: int = 0, inf_prob: float = 0.2):
    from .barcode import Bar

    out = []
    for _ in range(n):
        a = random_level(rng, G)
        if rng.random() < inf_prob:
            L = INF
        else:
            L = QuadReal(rng.choice(_QUARTERS[1:9]))
            if G.d and rng.random() < 0.2:
                L = L + QuadReal(0, 1, G.d)
        out.append(Bar.make(degree, a, L, G))
    return out


def random_points(rng: random.Random, n: int, dim: int = 2, spread: int = 6) -> List[List[Fraction]]:
    return [[Fraction(rng.randint(0, spread * 2), 2) for _ in range(dim)] for _ in range(n)]
