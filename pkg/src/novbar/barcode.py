"""Verbose and concise barcodes, the classical reduction oracle, spectral invariants."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .complex import FloerComplex, ValidationError, Violation, validate
from .exactnum import INF, NEG_INF, QuadReal, ValueGroup, canonical_rep
from .filtered import FilteredSpace, Inconsistent, best_approximation, solve_many
from .svd import LinearMap, svd

__all__ = [
    "Bar",
    "Barcode",
    "barcodes",
    "classical_oracle",
    "spectral_invariant",
    "dualize_barcode",
    "project_barcode",
]


@dataclass(frozen=True)
class Bar:
    """``([a], L)`` in degree ``degree``; ``a`` is stored as the group's
    canonical representative, so two bars with the same coset may still
    print different ``a`` only when the group is dense."""

    degree: int
    a: QuadReal
    L: object  # QuadReal or INF
    group: ValueGroup

    @classmethod
    def make(cls, degree: int, a: QuadReal, L, group: ValueGroup) -> "Bar":
        return cls(degree, canonical_rep(group, a)[0], L, group)

    @property
    def infinite(self) -> bool:
        return self.L is INF

    def key(self) -> tuple:
        return (self.degree, self.group.coset_key(self.a), self.L)

    def __eq__(self, other):
        return isinstance(other, Bar) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"Bar(k={self.degree}, [{self.a}], {self.L})"


def _sort_key(b: Bar):
    return (b.degree, b.group.coset_key(b.a), 1 if b.infinite else 0, b.L if not b.infinite else 0)


class Barcode:
    """Multiset of bars over one value group; ``verbose`` marks whether
    zero-length bars are kept."""

    def __init__(self, bars: Iterable[Bar], group: ValueGroup, verbose: bool = False):
        self.group = group
        self.verbose = verbose
        self.bars: List[Bar] = sorted(bars, key=_sort_key)

    def degrees(self) -> List[int]:
        return sorted({b.degree for b in self.bars})

    def in_degree(self, k: int) -> List[Bar]:
        return [b for b in self.bars if b.degree == k]

    def concise(self) -> "Barcode":
        return Barcode([b for b in self.bars if b.infinite or b.L > 0], self.group, verbose=False)

    def multiset(self) -> Counter:
        return Counter(b.key() for b in self.bars)

    def __eq__(self, other):
        return isinstance(other, Barcode) and self.multiset() == other.multiset()

    def __len__(self):
        return len(self.bars)

    def __iter__(self):
        return iter(self.bars)

    def __repr__(self):
        kind = "verbose" if self.verbose else "concise"
        return f"Barcode({kind}, {self.bars})"


def _degree_bars(C: FloerComplex, k: int, kernel_cache: dict) -> List[Bar]:
    space = C.space(k)
    if space.dim == 0:
        return []
    if k not in kernel_cache:
        kernel_cache[k] = svd(C.boundary(k))
    r = kernel_cache[k]
    Z = r.kernel_basis
    if not Z:
        return []
    Zspace = FilteredSpace(r.kernel_levels, C.field)
    up = C.boundary(k + 1)
    G = C.group
    bars: List[Bar] = []
    if C.dim(k + 1):
        coords = solve_many(space, Z, up.columns)
        for j, c in enumerate(coords):
            if c is Inconsistent:
                raise ValidationError([Violation("d2", k + 1, C.name(k + 1, j), "boundary is not a cycle")])
        B = LinearMap(C.space(k + 1), Zspace, coords)
        s = svd(B)
        for i in range(s.rank):
            bars.append(Bar.make(k, s.x_levels[i], s.y_levels[i] - s.x_levels[i], G))
        rest = s.x_levels[s.rank:]
    else:
        rest = list(r.kernel_levels)
    for t in rest:
        bars.append(Bar.make(k, t, INF, G))
    return bars


def barcodes(C: FloerComplex, check: bool = True) -> Tuple[Barcode, Barcode]:
    """``(verbose, concise)`` barcodes of ``C`` in every degree."""
    if check:
        v = validate(C)
        if v:
            raise ValidationError(v)
    cache: dict = {}
    bars: List[Bar] = []
    for k in C.degrees():
        bars.extend(_degree_bars(C, k, cache))
    verbose = Barcode(bars, C.group, verbose=True)
    return verbose, verbose.concise()


def dualize_barcode(B: Barcode) -> Barcode:
    """The transform the dual complex induces: infinite ``([a], inf)`` in
    degree ``-k`` becomes ``([-a], inf)`` in degree ``k``; finite ``([a], L)``
    in degree ``-k-1`` becomes ``([-a-L], L)`` in degree ``k``."""
    out = []
    for b in B.bars:
        if b.infinite:
            out.append(Bar.make(-b.degree, -b.a, INF, B.group))
        else:
            out.append(Bar.make(-b.degree - 1, -b.a - b.L, b.L, B.group))
    return Barcode(out, B.group, B.verbose)


def project_barcode(B: Barcode, group: ValueGroup) -> Barcode:
    """Push cosets forward along an inclusion of value groups."""
    return Barcode([Bar.make(b.degree, b.a, b.L, group) for b in B.bars], group, B.verbose)


# --------------------------------------------------------------------------


def classical_oracle(C: FloerComplex) -> Barcode:
    """Textbook persistence by column reduction (trivial value group only).

    Generators are ordered by (level, degree, index); the reduced matrix
    pairs a birth ``i`` with a death ``j`` and yields the bar
    ``(level_i, level_j - level_i)`` in the degree of ``i``.  Returns the
    verbose barcode (zero-length pairs included).
    """
    if C.group.rank != 0:
        raise ValueError("the classical oracle only handles a trivial value group")
    gens = []
    for k in C.degrees():
        for i, t in enumerate(C.levels(k)):
            gens.append((t, k, i))
    gens.sort(key=lambda g: (g[0], g[1], g[2]))
    pos = {(k, i): n for n, (_, k, i) in enumerate(gens)}
    cols: List[Dict[int, object]] = []
    for t, k, i in gens:
        col = {}
        if C.dim(k - 1):
            for r, a in enumerate(C.boundary(k).columns[i]):
                if a:
                    col[pos[(k - 1, r)]] = a
        cols.append(col)
    low_owner: Dict[int, int] = {}
    paired_birth = set()
    bars = []
    for j, col in enumerate(cols):
        while col:
            low = max(col)
            o = low_owner.get(low)
            if o is None:
                break
            oc = cols[o]
            f = col[low] / oc[low]
            for r, a in oc.items():
                s = col.get(r, 0) - f * a
                if s:
                    col[r] = s
                else:
                    col.pop(r, None)
        if col:
            low = max(col)
            low_owner[low] = j
            paired_birth.add(low)
            tb, kb, _ = gens[low]
            td = gens[j][0]
            bars.append(Bar.make(kb, tb, td - tb, C.group))
    for n, col in enumerate(cols):
        if not col and n not in paired_birth:
            t, k, _ = gens[n]
            bars.append(Bar.make(k, t, INF, C.group))
    return Barcode(bars, C.group, verbose=True)


# --------------------------------------------------------------------------


def spectral_invariant(C: FloerComplex, k: int, cycle: Sequence, image_basis: Optional[List] = None):
    """``rho`` of the class of ``cycle``: the lowest level among its homologous chains.

    The image of ``d_{k+1}`` gets an orthogonal basis from an SVD, and the
    best approximation of ``cycle`` by that image leaves a minimal-level
    representative.  ``NEG_INF`` means the class is zero.
    """
    space = C.space(k)
    cycle = space.vector(cycle)
    if C.dim(k - 1) and any(C.boundary(k).apply(cycle)):
        raise ValueError("spectral_invariant needs a cycle")
    if image_basis is None:
        image_basis = svd(C.boundary(k + 1)).image_basis if C.dim(k + 1) else []
    _, dist = best_approximation(space, image_basis, cycle, check=False)
    return dist
