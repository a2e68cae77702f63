"""Non-Archimedean singular value decompositions and boundary depths."""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import List, Optional, Sequence

from .exactnum import QuadReal, ValueGroup
from .filtered import (
    FilteredSpace,
    Vector,
    _run_kernel,
    dual_space,
    extend_coefficients_space,
    extend_vector,
    is_orthogonal,
    level,
    orthogonal_complement,
    solve_many,
)


__all__ = [
    "LinearMap",
    "SvdResult",
    "SvdCheckError",
    "svd",
    "check_svd",
    "dual_svd",
    "extend_svd",
    "boundary_depths",
    "torsion_exponents",
    "robustness_oracle",
]


class LinearMap:
    """``A: domain -> codomain``; ``columns[j]`` is the image of reference vector j."""

    def __init__(self, domain: FilteredSpace, codomain: FilteredSpace, columns: Sequence[Sequence]):
        if domain.field != codomain.field:
            raise ValueError("domain and codomain live over different fields")
        if len(columns) != domain.dim:
            raise ValueError(f"map needs {domain.dim} columns, got {len(columns)}")
        for j, c in enumerate(columns):
            if len(c) != codomain.dim:
                raise ValueError(f"column {j} has {len(c)} entries, codomain has dimension {codomain.dim}")
        self.domain = domain
        self.codomain = codomain
        coerce = domain.field.coerce
        self.columns: List[Vector] = [tuple(coerce(a) for a in c) for c in columns]

    @property
    def field(self):
        return self.domain.field

    @classmethod
    def zero(cls, domain: FilteredSpace, codomain: FilteredSpace) -> "LinearMap":
        return cls(domain, codomain, [codomain.zero() for _ in range(domain.dim)])

    def apply(self, v: Sequence) -> Vector:
        out = list(self.codomain.zero())
        for c, col in zip(v, self.columns):
            if not c:
                continue
            for i, a in enumerate(col):
                if a:
                    out[i] = out[i] + c * a
        return tuple(out)

    def entry(self, i: int, j: int):
        return self.columns[j][i]

    def rows(self) -> List[Vector]:
        m = self.codomain.dim
        return [tuple(c[i] for c in self.columns) for i in range(m)]

    def adjoint(self) -> "LinearMap":
        """The transpose, as a map between dual spaces."""
        return LinearMap(dual_space(self.codomain), dual_space(self.domain), self.rows())

    def compose(self, other: "LinearMap") -> "LinearMap":
        """``self o other``."""
        return LinearMap(other.domain, self.codomain, [self.apply(c) for c in other.columns])

    def is_zero(self) -> bool:
        return not any(any(c) for c in self.columns)

    def extend(self, group: ValueGroup) -> "LinearMap":
        dom = extend_coefficients_space(self.domain, group)
        cod = extend_coefficients_space(self.codomain, group)
        src = self.field
        return LinearMap(dom, cod, [extend_vector(c, src, dom.field) for c in self.columns])

    def __repr__(self):
        return f"LinearMap({self.domain.dim} -> {self.codomain.dim})"


@dataclass
class SvdResult:
    """Orthogonal bases ``y`` (domain) and ``x`` (codomain) with ``A y_i = x_i``
    for ``i < rank`` and ``A y_i = 0`` after, ``diffs`` non-increasing."""

    y: List[Vector]
    x: List[Vector]
    rank: int
    y_levels: List[QuadReal]
    x_levels: List[QuadReal]
    pivots: list = dc_field(default_factory=list)

    @property
    def diffs(self) -> List[QuadReal]:
        return [self.y_levels[i] - self.x_levels[i] for i in range(self.rank)]

    @property
    def kernel_basis(self) -> List[Vector]:
        return self.y[self.rank:]

    @property
    def kernel_levels(self) -> List[QuadReal]:
        return self.y_levels[self.rank:]

    @property
    def image_basis(self) -> List[Vector]:
        return self.x[: self.rank]


class SvdCheckError(AssertionError):
    pass


def svd(A: LinearMap, debug: bool = False) -> SvdResult:
    """Decompose ``A`` with the pivot loop, sort by level drop, complete the image."""
    dom, cod = A.domain, A.codomain
    res = _run_kernel(A.field, cod.levels, dom.levels, A.columns, 0, True, True)
    used = [j for _, j in res.pivots]
    used_set = set(used)
    ylev = {j: level(dom, res.transform[j]) for j in range(dom.dim)}
    entries = []
    for j in used:
        xj = res.columns[j]
        entries.append((ylev[j] - level(cod, xj), j))
    # stable sort by decreasing level drop: ties keep pivot order
    order = sorted(range(len(entries)), key=_DescKey(entries))
    sorted_used = [entries[k][1] for k in order]
    y = [res.transform[j] for j in sorted_used]
    x = [res.columns[j] for j in sorted_used]
    kernel_cols = [j for j in range(dom.dim) if j not in used_set]
    y += [res.transform[j] for j in kernel_cols]
    x += orthogonal_complement(cod, x) if len(x) < cod.dim else []
    out = SvdResult(
        y=y,
        x=x,
        rank=len(sorted_used),
        y_levels=[level(dom, v) for v in y],
        x_levels=[level(cod, v) for v in x],
        pivots=list(res.pivots),
    )
    if debug:
        problems = check_svd(A, out)
        if problems:
            raise SvdCheckError("; ".join(problems))
    return out


class _DescKey:
    """Sort key object giving a stable descending order on exact diffs."""

    def __init__(self, entries):
        self.entries = entries

    def __call__(self, k):
        return _Desc(self.entries[k][0], k)


class _Desc:
    __slots__ = ("v", "k")

    def __init__(self, v, k):
        self.v, self.k = v, k

    def __lt__(self, other):
        if self.v != other.v:
            return self.v > other.v
        return self.k < other.k


def check_svd(A: LinearMap, r: SvdResult) -> List[str]:
    """All four defining conditions; returns human-readable failures."""
    problems = []
    dom, cod = A.domain, A.codomain
    if len(r.y) != dom.dim:
        problems.append(f"expected {dom.dim} domain vectors, got {len(r.y)}")
    if len(r.x) != cod.dim:
        problems.append(f"expected {cod.dim} codomain vectors, got {len(r.x)}")
    if problems:
        return problems
    if not is_orthogonal(dom, r.y):
        problems.append("domain basis is not orthogonal")
    if not is_orthogonal(cod, r.x):
        problems.append("codomain basis is not orthogonal")
    for i, v in enumerate(r.y):
        img = A.apply(v)
        if i < r.rank:
            if tuple(img) != tuple(r.x[i]):
                problems.append(f"A y_{i} differs from x_{i}")
        elif any(img):
            problems.append(f"y_{i} is not in the kernel")
    for i in range(r.rank):
        if r.y_levels[i] != level(dom, r.y[i]) or r.x_levels[i] != level(cod, r.x[i]):
            problems.append(f"stored level of pair {i} is stale")
    d = r.diffs
    for i in range(len(d) - 1):
        if d[i] < d[i + 1]:
            problems.append(f"level drops not sorted at {i}")
    return problems


def dual_svd(A: LinearMap, r: SvdResult) -> tuple:
    """From an SVD of ``A`` build the SVD ``((x_i*), (y_i*))`` of the adjoint.

    Dual basis vectors are rows of the inverse basis matrix, found by
    solving against the reference vectors.
    """
    def dual_basis(space: FilteredSpace, basis: List[Vector]) -> List[Vector]:
        n = space.dim
        sols = solve_many(space, basis, space.basis())
        return [tuple(sols[k][j] for k in range(n)) for j in range(n)]

    xs = dual_basis(A.codomain, r.x)
    ys = dual_basis(A.domain, r.y)
    At = A.adjoint()
    res = SvdResult(
        y=xs,
        x=ys,
        rank=r.rank,
        y_levels=[level(At.domain, v) for v in xs],
        x_levels=[level(At.codomain, v) for v in ys],
    )
    return At, res


def extend_svd(A: LinearMap, r: SvdResult, group: ValueGroup) -> tuple:
    """Tensor an SVD with a larger Novikov field."""
    B = A.extend(group)
    src = A.field
    res = SvdResult(
        y=[extend_vector(v, src, B.field) for v in r.y],
        x=[extend_vector(v, src, B.field) for v in r.x],
        rank=r.rank,
        y_levels=list(r.y_levels),
        x_levels=list(r.x_levels),
    )
    return B, res


def boundary_depths(A: LinearMap, pad_to: Optional[int] = None) -> List[QuadReal]:
    """``beta_1 >= beta_2 >= ...``: the level drops of an SVD, zero-padded on request."""
    d = svd(A).diffs
    if pad_to is not None and pad_to > len(d):
        d = d + [QuadReal(0)] * (pad_to - len(d))
    return d


def torsion_exponents(A: LinearMap, pad_to: Optional[int] = None) -> List[QuadReal]:
    # The torsion exponents of the Floer complex are exactly the generalized
    # boundary depths, so this is deliberately the same computation.
    return boundary_depths(A, pad_to)


# --------------------------------------------------------------------------
# Brute-force robustness oracle (test use only)

ORACLE_MAX_IMAGE_DIM = 4
ORACLE_MAX_DOMAIN_DIM = 10


def robustness_oracle(A: LinearMap, k: int) -> QuadReal:
    """``beta_k`` straight from the definition via delta-robust subspaces, over F2.

    Every vector of the domain is enumerated once, which gives the lowest
    level among the primitives of each image vector.  A subspace ``V`` is
    delta-robust exactly when ``delta`` is strictly below the smallest gap
    ``min_level(x) - level(x)`` over ``x`` in ``V``, so the supremum over
    admissible ``delta >= 0`` equals that gap when it is positive and is
    zero otherwise.
    """
    field = A.field
    if not field.trivial or field.ground.p != 2:
        raise ValueError("robustness_oracle needs F2 coefficients and a trivial value group")
    n, m = A.domain.dim, A.codomain.dim
    if n > ORACLE_MAX_DOMAIN_DIM:
        raise ValueError(f"robustness_oracle refuses a domain of dimension {n}")
    cols = [sum(1 << i for i, a in enumerate(c) if a) for c in A.columns]
    dom_lv, cod_lv = list(A.domain.levels), list(A.codomain.levels)

    def lev(mask, lv):
        best = None
        for i, t in enumerate(lv):
            if mask >> i & 1 and (best is None or t > best):
                best = t
        return best

    cheapest = {}
    for y in range(1 << n):
        img = 0
        for j in range(n):
            if y >> j & 1:
                img ^= cols[j]
        if img == 0:
            continue
        ly = lev(y, dom_lv)
        if img not in cheapest or ly < cheapest[img]:
            cheapest[img] = ly
    image = sorted(cheapest)
    rank = 0
    while (1 << rank) - 1 < len(image):
        rank += 1
    if rank > ORACLE_MAX_IMAGE_DIM:
        raise ValueError(f"robustness_oracle refuses an image of dimension {rank}")
    zero = QuadReal(0)
    if k < 1 or k > rank:
        return zero
    gap = {x: cheapest[x] - lev(x, cod_lv) for x in image}

    best = None
    seen = set()

    def span(vs):
        out = {0}
        for v in vs:
            out |= {u ^ v for u in out}
        return frozenset(out)

    def grow(chosen, start, current):
        nonlocal best
        if len(chosen) == k:
            if current in seen:
                return
            seen.add(current)
            worst = min(gap[x] for x in current if x)
            if best is None or worst > best:
                best = worst
            return
        for idx in range(start, len(image)):
            v = image[idx]
            if v in current:
                continue
            grow(chosen + [v], idx + 1, span(chosen + [v]))

    grow([], 0, frozenset({0}))
    return best if best is not None and best > zero else zero
