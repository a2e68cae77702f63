"""Orthogonalizable spaces over a Novikov field and the orthogonality toolkit.

A :class:`FilteredSpace` is ``Lambda^n`` with a reference basis
``e_1..e_n`` declared orthogonal at levels ``t_1..t_n``, so that

    level(sum c_i e_i) = max_i (t_i - nu(c_i)).

Vectors are plain coordinate tuples in that reference basis.

Everything constructive here (best approximation, Gram-Schmidt,
orthogonality tests, complements, linear solves) is one call into the
elimination loop with a suitable forced column order.  Ordinary
Gram-Schmidt would need a separate best-approximation routine; here the
pivot rule already produces the orthogonal residual.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from . import kernel
from .exactnum import NEG_INF, ConfigurationError, FpElem, QuadReal, ValueGroup
from .novikov import NovikovField

Vector = Tuple

__all__ = [
    "FilteredSpace",
    "TriangularResult",
    "Inconsistent",
    "DependentVectorsError",
    "OrthogonalityError",
    "level",
    "triangularize",
    "best_approximation",
    "gram_schmidt",
    "is_orthogonal",
    "orthogonal_complement",
    "dual_space",
    "extend_coefficients_space",
    "extend_vector",
    "filtration_spectrum",
    "solve_linear",
    "solve_many",
]


class DependentVectorsError(ValueError):
    def __init__(self, index: int):
        super().__init__(f"vector {index} depends linearly on the vectors before it")
        self.index = index


class OrthogonalityError(ValueError):
    """A routine that needs an orthogonal basis was handed something else."""


class _InconsistentType:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "Inconsistent"

    def __bool__(self):
        return False


Inconsistent = _InconsistentType()


class FilteredSpace:
    """``(Lambda^n, -nu_t)``: n reference vectors at the given levels."""

    __slots__ = ("levels", "field")

    def __init__(self, levels: Sequence, field: NovikovField):
        d = field.group.d
        lv = []
        for t in levels:
            q = t if isinstance(t, QuadReal) else QuadReal.parse(t, d or None)
            if q.q1 and q.d != d:
                raise ConfigurationError(f"level {q} does not live in Q(sqrt({d}))")
            lv.append(q)
        self.levels = tuple(lv)
        self.field = field

    @property
    def dim(self) -> int:
        return len(self.levels)

    def __len__(self):
        return len(self.levels)

    def __eq__(self, other):
        return (
            isinstance(other, FilteredSpace)
            and self.levels == other.levels
            and self.field == other.field
        )

    def __repr__(self):
        return f"FilteredSpace([{', '.join(map(str, self.levels))}])"

    def zero(self) -> Vector:
        return (self.field.zero,) * self.dim

    def basis_vector(self, i: int) -> Vector:
        z, o = self.field.zero, self.field.one
        return tuple(o if k == i else z for k in range(self.dim))

    def basis(self) -> List[Vector]:
        return [self.basis_vector(i) for i in range(self.dim)]

    def vector(self, coords: Sequence) -> Vector:
        if len(coords) != self.dim:
            raise ValueError(f"expected {self.dim} coordinates, got {len(coords)}")
        c = self.field.coerce
        return tuple(c(x) for x in coords)

    def level(self, v: Sequence):
        return level(self, v)


def level(space: FilteredSpace, v: Sequence):
    """``max_i (t_i - nu(v_i))``, or ``NEG_INF`` for the zero vector."""
    best = NEG_INF
    nu = space.field.nu
    if space.field.trivial:
        for t, c in zip(space.levels, v):
            if c and t > best:
                best = t
        return best
    for t, c in zip(space.levels, v):
        if c:
            x = t - nu(c)
            if x > best:
                best = x
    return best


# --------------------------------------------------------------------------
# vector helpers


def vadd(u: Sequence, v: Sequence) -> Vector:
    return tuple(a + b for a, b in zip(u, v))


def vsub(u: Sequence, v: Sequence) -> Vector:
    return tuple(a - b for a, b in zip(u, v))


def vscale(c, v: Sequence) -> Vector:
    return tuple(c * a for a in v)


def vcomb(coeffs: Sequence, vectors: Sequence[Sequence], zero) -> Vector:
    """``sum coeffs[k] * vectors[k]`` (needs at least the dimension via ``vectors``)."""
    if not vectors:
        return ()
    out = [zero] * len(vectors[0])
    for c, v in zip(coeffs, vectors):
        if not c:
            continue
        for i, a in enumerate(v):
            if a:
                out[i] = out[i] + c * a
    return tuple(out)


def is_zero(v: Sequence) -> bool:
    return not any(v)


# --------------------------------------------------------------------------
# elimination


@dataclass
class TriangularResult:
    columns: List[Vector]
    transform: Optional[List[Vector]]
    pivots: List[Tuple[int, int]]

    @property
    def zero_columns(self) -> List[int]:
        return [j for j, c in enumerate(self.columns) if not any(c)]


def _scaled_ints(levels: Sequence[QuadReal]) -> Optional[List[int]]:
    den = 1
    for t in levels:
        if t.q1:
            return None
        den = den * t.q0.denominator // math.gcd(den, t.q0.denominator)
    return [int(t.q0 * den) for t in levels]


def _run_kernel(
    field: NovikovField,
    row_levels: Sequence[QuadReal],
    col_levels: Sequence[QuadReal],
    columns: Sequence[Sequence],
    forced: int,
    free: bool,
    track: bool,
):
    m = len(row_levels)
    n = len(columns)
    sparse = [{i: a for i, a in enumerate(c) if a} for c in columns]
    ints = _scaled_ints(list(row_levels) + list(col_levels)) if field.trivial else None
    if ints is not None:
        rl, cl = ints[:m], ints[m:]
        p = field.ground.p
        if p and p < 2 ** 31:
            cols, trans, piv = kernel.triangularize_modp(
                rl, cl, [{i: a.v for i, a in c.items()} for c in sparse], p, forced, free, track
            )
            cols = [{i: FpElem(v, p) for i, v in c.items()} for c in cols]
            if trans is not None:
                trans = [{i: FpElem(v, p) for i, v in c.items()} for c in trans]
        else:
            cols, trans, piv = kernel.triangularize_flat(rl, cl, sparse, field.one, forced, free, track)
    else:
        cols, trans, piv = kernel.triangularize_generic(
            row_levels, col_levels, sparse, field.nu, field.one, forced, free, track
        )
    zero = field.zero
    dense = [tuple(c.get(i, zero) for i in range(m)) for c in cols]
    dtrans = None
    if trans is not None:
        dtrans = [tuple(t.get(k, zero) for k in range(n)) for t in trans]
    return TriangularResult(dense, dtrans, piv)


def triangularize(
    space: FilteredSpace,
    columns: Sequence[Sequence],
    forced_prefix: int = 0,
    col_levels: Optional[Sequence] = None,
    free: bool = True,
    track: bool = False,
) -> TriangularResult:
    """Run the pivot loop on ``columns`` (coordinates in ``space``).

    ``col_levels`` are the domain levels used by free pivoting; they
    default to the levels of the columns themselves, which makes free
    pivoting pick the pair that loses the most level relative to its own
    column.  The nonzero columns of the result are orthogonal in either
    mode.
    """
    if forced_prefix > len(columns):
        raise ValueError("forced_prefix exceeds the number of columns")
    columns = _vecs(space, columns)
    if col_levels is None:
        col_levels = [_level_or_zero(space, c) for c in columns]
    return _run_kernel(space.field, space.levels, col_levels, columns, forced_prefix, free, track)


def _vecs(space: FilteredSpace, vectors) -> List[Vector]:
    coerce = space.field.coerce
    out = []
    for v in vectors:
        if len(v) != space.dim:
            raise ValueError(f"vector of length {len(v)} in a space of dimension {space.dim}")
        out.append(tuple(coerce(a) for a in v))
    return out


def _level_or_zero(space, c):
    lv = level(space, c)
    return lv if lv is not NEG_INF else QuadReal(0)


# --------------------------------------------------------------------------
# orthogonality toolkit


def best_approximation(space: FilteredSpace, W: Sequence[Sequence], x: Sequence, check: bool = True):
    """Closest point ``w0`` of ``span(W)`` to ``x``; returns ``(w0, level(x - w0))``.

    ``W`` must be an orthogonal basis.  The forced pass pivots on ``W`` in
    order and leaves the residual ``x - w0`` in the last column; that
    residual is orthogonal to ``span(W)``, which is exactly the condition
    for ``w0`` to be optimal.
    """
    W = _vecs(space, W)
    x = _vecs(space, [x])[0]
    if check and W and not is_orthogonal(space, W):
        raise OrthogonalityError("best_approximation needs an orthogonal basis of W")
    res = _run_kernel(space.field, space.levels, [QuadReal(0)] * (len(W) + 1), W + [x], len(W), False, False)
    resid = res.columns[-1]
    w0 = vsub(x, resid)
    return w0, level(space, resid)


def gram_schmidt(space: FilteredSpace, vectors: Sequence[Sequence], prefix_len: int = 0) -> List[Vector]:
    """Orthogonalize in order; the first ``prefix_len`` vectors (already
    orthogonal) come back untouched, each later one as ``x_i`` minus a
    combination of its predecessors."""
    vectors = _vecs(space, vectors)
    n = len(vectors)
    res = _run_kernel(space.field, space.levels, [QuadReal(0)] * n, vectors, n, False, False)
    out = []
    for j, c in enumerate(res.columns):
        if not any(c):
            raise DependentVectorsError(j)
        out.append(vectors[j] if j < prefix_len else c)
    return out


def is_orthogonal(space: FilteredSpace, vectors: Sequence[Sequence]) -> bool:
    """True iff the ordered list is orthogonal.

    Vector ``j`` is orthogonal to the span of its predecessors exactly when
    its best-approximation residual keeps the level of ``v_j``; a list
    whose every member passes that test is orthogonal by induction.
    """
    vectors = _vecs(space, vectors)
    n = len(vectors)
    if n == 0:
        return True
    res = _run_kernel(space.field, space.levels, [QuadReal(0)] * n, vectors, n, False, False)
    for v, c in zip(vectors, res.columns):
        if not any(v) or level(space, c) != level(space, v):
            return False
    return True


def orthogonal_complement(space: FilteredSpace, U: Sequence[Sequence]) -> List[Vector]:
    """Basis of a subspace ``V`` with ``U + V`` the whole space, ``U`` and ``V``
    orthogonal.  Reference vectors are appended greedily in index order;
    each kept one is reduced against everything before it."""
    U = _vecs(space, U)
    p = len(U)
    cols = U + space.basis()
    res = _run_kernel(space.field, space.levels, [QuadReal(0)] * len(cols), cols, len(cols), False, False)
    for j in range(p):
        if not any(res.columns[j]):
            raise DependentVectorsError(j)
    return [c for c in res.columns[p:] if any(c)]


def dual_space(space: FilteredSpace) -> FilteredSpace:
    return FilteredSpace([-t for t in space.levels], space.field)


def extend_coefficients_space(space: FilteredSpace, group: ValueGroup) -> FilteredSpace:
    if not space.field.group.is_subgroup_of(group):
        raise ConfigurationError(f"{space.field.group!r} is not contained in {group!r}")
    return FilteredSpace(space.levels, NovikovField(space.field.ground, group))


def extend_vector(v: Sequence, source: NovikovField, target: NovikovField) -> Vector:
    return tuple(source.extend_to(a, target) for a in v)


def filtration_spectrum(space: FilteredSpace) -> List[QuadReal]:
    """Sorted multiset of level cosets (each as the group's reduced representative)."""
    key = space.field.group.coset_key
    return sorted(key(t) for t in space.levels)


def spectrum_counter(space: FilteredSpace) -> Counter:
    return Counter(filtration_spectrum(space))


# --------------------------------------------------------------------------
# linear solves


def solve_many(space: FilteredSpace, columns: Sequence[Sequence], rhs: Sequence[Sequence]):
    """Coefficients expressing each right-hand side in ``span(columns)``.

    Returns a list with one coefficient tuple (or ``Inconsistent``) per
    right-hand side.  When ``columns`` is dependent the coefficients of
    redundant columns are zero.
    """
    columns = _vecs(space, columns)
    p = len(columns)
    allcols = columns + _vecs(space, rhs)
    res = _run_kernel(space.field, space.levels, [QuadReal(0)] * len(allcols), allcols, p, False, True)
    out = []
    zero = space.field.zero
    for j in range(p, len(allcols)):
        if any(res.columns[j]):
            out.append(Inconsistent)
            continue
        t = res.transform[j]
        # 0 = b_j + sum_k t[k] col_k, with t[j] == 1
        out.append(tuple(-t[k] if t[k] else zero for k in range(p)))
    return out


def solve_linear(space: FilteredSpace, columns: Sequence[Sequence], b: Sequence):
    """Single right-hand side version of :func:`solve_many`."""
    return solve_many(space, columns, [b])[0]
