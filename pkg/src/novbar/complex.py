"""Floer-type complexes and the constructions built from them.

A :class:`FloerComplex` stores, per degree ``k``, a filtered space ``C_k``
and the boundary ``d_k: C_k -> C_{k-1}`` as a :class:`LinearMap`.  Degrees
not listed are zero.  Levels are only checked on reference generators:
the reference basis is orthogonal, so ``level(d v) <= level(v)`` on each
generator already gives it for every chain.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence

from .exactnum import INF, ConfigurationError, QuadReal, ValueGroup
from .filtered import (
    FilteredSpace,
    Vector,
    dual_space,
    extend_coefficients_space,
    extend_vector,
    is_orthogonal,
    level,
    solve_many,
)
from .novikov import NovikovField
from .svd import LinearMap, svd

__all__ = [
    "FloerComplex",
    "Violation",
    "ValidationError",
    "validate",
    "elementary",
    "direct_sum",
    "dual_complex",
    "coefficient_extension",
    "Splitting",
    "splitting",
    "FilteredChainMap",
    "split_map",
    "mapping_cylinder",
    "mapping_cone",
]


@dataclass(frozen=True)
class Violation:
    kind: str  # "level", "strict", "d2" or "shape"
    degree: int
    where: str
    detail: str

    def __str__(self):
        return f"[{self.kind}] degree {self.degree}, {self.where}: {self.detail}"


class ValidationError(ValueError):
    def __init__(self, violations: List[Violation]):
        self.violations = violations
        super().__init__("; ".join(str(v) for v in violations[:5]))


class FloerComplex:
    def __init__(
        self,
        field: NovikovField,
        spaces: Dict[int, FilteredSpace],
        boundaries: Optional[Dict[int, Sequence[Sequence]]] = None,
        names: Optional[Dict[int, List[str]]] = None,
        strict: bool = False,
    ):
        self.field = field
        self.spaces: Dict[int, FilteredSpace] = {
            k: s for k, s in sorted(spaces.items()) if s.dim > 0
        }
        for s in self.spaces.values():
            if s.field != field:
                raise ConfigurationError("all chain groups must share one Novikov field")
        self.strict = strict
        self.names = {k: list(v) for k, v in (names or {}).items()}
        self._d: Dict[int, LinearMap] = {}
        for k, cols in (boundaries or {}).items():
            if isinstance(cols, LinearMap):
                cols = cols.columns
            src = self.space(k)
            dst = self.space(k - 1)
            if src.dim == 0:
                if any(len(c) for c in cols):
                    raise ValueError(f"boundary given in empty degree {k}")
                continue
            if dst.dim == 0:
                if any(any(c) for c in cols):
                    raise ValueError(f"degree {k} boundary lands in an empty degree")
                continue
            self._d[k] = LinearMap(src, dst, cols)

    # -- access
    @classmethod
    def from_levels(cls, field, levels: Dict[int, Sequence], boundaries=None, **kw) -> "FloerComplex":
        return cls(field, {k: FilteredSpace(v, field) for k, v in levels.items()}, boundaries, **kw)

    @property
    def group(self) -> ValueGroup:
        return self.field.group

    def degrees(self) -> List[int]:
        return list(self.spaces)

    def space(self, k: int) -> FilteredSpace:
        s = self.spaces.get(k)
        return s if s is not None else FilteredSpace([], self.field)

    def dim(self, k: int) -> int:
        return self.space(k).dim

    def boundary(self, k: int) -> LinearMap:
        d = self._d.get(k)
        if d is None:
            d = LinearMap.zero(self.space(k), self.space(k - 1))
        return d

    def name(self, k: int, i: int) -> str:
        nm = self.names.get(k)
        if nm and i < len(nm):
            return nm[i]
        return f"g{k}_{i}"

    def levels(self, k: int) -> List[QuadReal]:
        return list(self.space(k).levels)

    def __eq__(self, other):
        if not isinstance(other, FloerComplex) or other.field != self.field:
            return False
        if self.degrees() != other.degrees():
            return False
        for k in self.degrees():
            if self.space(k).levels != other.space(k).levels:
                return False
            if self.boundary(k).columns != other.boundary(k).columns:
                return False
        return True

    def __repr__(self):
        dims = ", ".join(f"{k}:{s.dim}" for k, s in self.spaces.items())
        return f"FloerComplex({dims})"

    def total_dim(self) -> int:
        return sum(s.dim for s in self.spaces.values())


def validate(C: FloerComplex, strict: Optional[bool] = None) -> List[Violation]:
    """Return every violated condition (an empty list means the complex is fine)."""
    strict = C.strict if strict is None else strict
    out: List[Violation] = []
    for k in C.degrees():
        d = C.boundary(k)
        src, dst = C.space(k), C.space(k - 1)
        for j, col in enumerate(d.columns):
            if not any(col):
                continue
            lv = level(dst, col)
            if lv > src.levels[j]:
                out.append(Violation("level", k, C.name(k, j),
                                     f"boundary has level {lv} above generator level {src.levels[j]}"))
            elif strict and lv == src.levels[j]:
                out.append(Violation("strict", k, C.name(k, j),
                                     f"boundary level {lv} equals generator level"))
        if C.dim(k - 2) and C.dim(k - 1):
            dd = C.boundary(k - 1)
            for j, col in enumerate(d.columns):
                img = dd.apply(col)
                for i, a in enumerate(img):
                    if a:
                        out.append(Violation("d2", k, f"entry ({C.name(k - 2, i)}, {C.name(k, j)})",
                                             "boundary of boundary is nonzero"))
    return out


def check(C: FloerComplex) -> FloerComplex:
    v = validate(C)
    if v:
        raise ValidationError(v)
    return C


# --------------------------------------------------------------------------
# elementary pieces and sums


def elementary(field: NovikovField, a, L, k: int) -> FloerComplex:
    """``E(a, L, k)``: one generator at ``a`` if ``L`` is infinite, else
    ``x`` at ``a`` in degree ``k`` and ``y`` at ``a + L`` in degree ``k + 1``
    with ``d y = x``."""
    a = a if isinstance(a, QuadReal) else QuadReal.parse(a, field.group.d or None)
    if L is INF or L == "inf":
        return FloerComplex.from_levels(field, {k: [a]}, names={k: ["x"]})
    L = L if isinstance(L, QuadReal) else QuadReal.parse(L, field.group.d or None)
    if L < 0:
        raise ValueError("bar length must be nonnegative")
    return FloerComplex.from_levels(
        field,
        {k: [a], k + 1: [a + L]},
        {k + 1: [[field.one]]},
        names={k: ["x"], k + 1: ["y"]},
    )


def direct_sum(complexes: Sequence[FloerComplex], field: Optional[NovikovField] = None) -> FloerComplex:
    """Block-diagonal sum; generators are concatenated in the given order."""
    complexes = list(complexes)
    if field is None:
        if not complexes:
            raise ValueError("direct_sum of nothing needs an explicit field")
        field = complexes[0].field
    for c in complexes:
        if c.field != field:
            raise ConfigurationError("direct summands must share the Novikov field")
    degrees = sorted({k for c in complexes for k in c.degrees()})
    levels = {k: [t for c in complexes for t in c.levels(k)] for k in degrees}
    names = {k: [f"{n}.{c.name(k, i)}" for n, c in enumerate(complexes) for i in range(c.dim(k))] for k in degrees}
    zero = field.zero
    bounds = {}
    for k in degrees:
        if not levels.get(k - 1):
            continue
        cols = []
        row_off = 0
        offsets = []
        for c in complexes:
            offsets.append(row_off)
            row_off += c.dim(k - 1)
        m = row_off
        for n, c in enumerate(complexes):
            d = c.boundary(k)
            for col in d.columns:
                full = [zero] * m
                full[offsets[n]: offsets[n] + len(col)] = col
                cols.append(full)
        bounds[k] = cols
    return FloerComplex.from_levels(field, levels, bounds, names=names)


def dual_complex(C: FloerComplex) -> FloerComplex:
    """Degree ``-k`` is the dual of ``C_k``; the boundary is the transpose of
    ``d_{k+1}`` and all levels are negated."""
    spaces = {-k: dual_space(C.space(k)) for k in C.degrees()}
    bounds = {}
    for k in C.degrees():
        if C.dim(k + 1):
            bounds[-k] = C.boundary(k + 1).adjoint().columns
    names = {-k: [f"{C.name(k, i)}*" for i in range(C.dim(k))] for k in C.degrees()}
    return FloerComplex(C.field, spaces, bounds, names=names, strict=C.strict)


def coefficient_extension(C: FloerComplex, group: ValueGroup) -> FloerComplex:
    spaces = {k: extend_coefficients_space(C.space(k), group) for k in C.degrees()}
    if not spaces:
        field = NovikovField(C.field.ground, group)
        return FloerComplex(field, {})
    field = next(iter(spaces.values())).field
    bounds = {k: C.boundary(k).extend(group).columns for k in C.degrees() if C.dim(k - 1)}
    return FloerComplex(field, spaces, bounds, names=C.names, strict=C.strict)


# --------------------------------------------------------------------------
# splittings and split maps


@dataclass
class Splitting:
    """Per degree: ``basis[k]`` spans ``F_k`` and ``kernel[k]`` spans ``ker d_k``."""

    complex: FloerComplex
    basis: Dict[int, List[Vector]]
    kernel: Dict[int, List[Vector]]

    def project(self, k: int, v: Sequence) -> Vector:
        """``pi(v)``: the ``F_k`` component along ``ker d_k``."""
        F, Z = self.basis.get(k, []), self.kernel.get(k, [])
        space = self.complex.space(k)
        if not F:
            return space.zero()
        coeffs = solve_many(space, F + Z, [v])[0]
        out = list(space.zero())
        for c, f in zip(coeffs[: len(F)], F):
            if c:
                for i, a in enumerate(f):
                    if a:
                        out[i] = out[i] + c * a
        return tuple(out)

    def is_valid(self) -> bool:
        for k in self.complex.degrees():
            joint = self.basis.get(k, []) + self.kernel.get(k, [])
            if len(joint) != self.complex.dim(k) or not is_orthogonal(self.complex.space(k), joint):
                return False
            d = self.complex.boundary(k)
            imgs = [d.apply(f) for f in self.basis.get(k, [])]
            if imgs and not is_orthogonal(self.complex.space(k - 1), imgs):
                # injective with orthogonal image is what the SVD gives
                return False
        return True


def splitting(C: FloerComplex) -> Splitting:
    basis, kern = {}, {}
    for k in C.degrees():
        r = svd(C.boundary(k))
        basis[k] = r.y[: r.rank]
        kern[k] = r.y[r.rank:]
    return Splitting(C, basis, kern)


class FilteredChainMap:
    """Degree-preserving chain map with ``level(Phi v) <= level(v) + shift``."""

    def __init__(self, source: FloerComplex, target: FloerComplex, maps: Dict[int, Sequence[Sequence]], shift=QuadReal(0)):
        if source.field != target.field:
            raise ConfigurationError("chain map between complexes over different fields")
        self.source = source
        self.target = target
        self.shift = shift if isinstance(shift, QuadReal) else QuadReal.parse(shift, source.group.d or None)
        self._maps: Dict[int, LinearMap] = {}
        for k, cols in maps.items():
            if isinstance(cols, LinearMap):
                cols = cols.columns
            if source.dim(k) and target.dim(k):
                self._maps[k] = LinearMap(source.space(k), target.space(k), cols)

    def map(self, k: int) -> LinearMap:
        m = self._maps.get(k)
        if m is None:
            m = LinearMap.zero(self.source.space(k), self.target.space(k))
        return m

    def degrees(self) -> List[int]:
        return sorted(set(self.source.degrees()) | set(self.target.degrees()))

    def violations(self, shift=None) -> List[str]:
        shift = self.shift if shift is None else shift
        out = []
        for k in self.degrees():
            P = self.map(k)
            for j, col in enumerate(P.columns):
                if any(col) and level(P.codomain, col) > P.domain.levels[j] + shift:
                    out.append(f"degree {k}: generator {j} shifted by more than {shift}")
            # chain equation d_D Phi_k = Phi_{k-1} d_C
            dC = self.source.boundary(k)
            dD = self.target.boundary(k)
            Pm = self.map(k - 1)
            for j in range(self.source.dim(k)):
                lhs = dD.apply(P.columns[j]) if self.target.dim(k) else self.target.space(k - 1).zero()
                rhs = Pm.apply(dC.columns[j]) if self.source.dim(k - 1) else self.target.space(k - 1).zero()
                if tuple(lhs) != tuple(rhs):
                    out.append(f"degree {k}: chain equation fails on generator {j}")
        return out

    def compose(self, other: "FilteredChainMap") -> "FilteredChainMap":
        """``self o other``."""
        maps = {k: self.map(k).compose(other.map(k)).columns for k in other.source.degrees()
                if self.target.dim(k)}
        return FilteredChainMap(other.source, self.target, maps, self.shift + other.shift)


def split_map(Phi: FilteredChainMap, sC: Optional[Splitting] = None, sD: Optional[Splitting] = None) -> FilteredChainMap:
    """``pi_D Phi pi_C + Phi (I - pi_C)``: a split chain map agreeing with
    ``Phi`` on cycles and keeping its level shift."""
    sC = sC or splitting(Phi.source)
    sD = sD or splitting(Phi.target)
    maps = {}
    for k in Phi.source.degrees():
        if not Phi.target.dim(k):
            continue
        P = Phi.map(k)
        space = Phi.source.space(k)
        cols = []
        for j in range(space.dim):
            e = space.basis_vector(j)
            pe = sC.project(k, e)
            rest = tuple(a - b for a, b in zip(e, pe))
            v1 = sD.project(k, P.apply(pe))
            v2 = P.apply(rest)
            cols.append(tuple(a + b for a, b in zip(v1, v2)))
        maps[k] = cols
    return FilteredChainMap(Phi.source, Phi.target, maps, Phi.shift)


# --------------------------------------------------------------------------
# cylinders and cones


def _check_shift(Phi: FilteredChainMap, delta: QuadReal):
    bad = Phi.violations(delta)
    if bad:
        raise ValueError("chain map does not respect the requested shift: " + bad[0])


def mapping_cylinder(Phi: FilteredChainMap, variant: str = "plain", delta=None) -> FloerComplex:
    """``Cyl_k = C_k + D_k + C_{k-1}`` with ``d(c, d, e) = (dc - e, dd + Phi e, -de)``.

    Generator levels by variant: ``plain`` keeps all three levels (needs a
    zero shift); ``l0`` raises the C-blocks by ``delta``; ``l1`` raises
    the D-block by ``delta`` and the shifted copy of C by ``2 delta``.
    """
    C, D = Phi.source, Phi.target
    field = C.field
    delta = Phi.shift if delta is None else (delta if isinstance(delta, QuadReal) else QuadReal.parse(delta))
    if variant == "plain":
        if delta != 0:
            raise ValueError("the plain cylinder needs a zero shift")
        sc, sd, se = QuadReal(0), QuadReal(0), QuadReal(0)
    elif variant in ("l0", "ell0"):
        sc, sd, se = delta, QuadReal(0), delta
    elif variant in ("l1", "ell1"):
        sc, sd, se = QuadReal(0), delta, delta + delta
    else:
        raise ValueError(f"unknown cylinder variant {variant!r}")
    if delta < 0:
        raise ValueError("shift must be nonnegative")
    _check_shift(Phi, delta)
    degs = sorted(set(C.degrees()) | set(D.degrees()) | {k + 1 for k in C.degrees()})
    levels, names = {}, {}
    for k in degs:
        levels[k] = ([t + sc for t in C.levels(k)] + [t + sd for t in D.levels(k)]
                     + [t + se for t in C.levels(k - 1)])
        names[k] = ([f"c.{C.name(k, i)}" for i in range(C.dim(k))]
                    + [f"d.{D.name(k, i)}" for i in range(D.dim(k))]
                    + [f"e.{C.name(k - 1, i)}" for i in range(C.dim(k - 1))])
    zero = field.zero
    bounds = {}
    for k in degs:
        nc1, nd1, ne1 = C.dim(k - 1), D.dim(k - 1), C.dim(k - 2)
        if nc1 + nd1 + ne1 == 0:
            continue
        cols = []
        dC, dD = C.boundary(k), D.boundary(k)
        for col in dC.columns:
            cols.append(tuple(col) + (zero,) * (nd1 + ne1))
        for col in dD.columns:
            cols.append((zero,) * nc1 + tuple(col) + (zero,) * ne1)
        dCe = C.boundary(k - 1)
        Pm = Phi.map(k - 1)
        for i in range(C.dim(k - 1)):
            minus_e = tuple(-field.one if t == i else zero for t in range(nc1))
            phi_e = tuple(Pm.columns[i]) if nd1 else ()
            d_e = tuple(-a for a in dCe.columns[i]) if ne1 else ()
            cols.append(minus_e + phi_e + d_e)
        bounds[k] = cols
    return FloerComplex.from_levels(field, levels, bounds, names=names)


def mapping_cone(Phi: FilteredChainMap, delta=None) -> FloerComplex:
    """``Cone_k = D_k + C_{k-1}``, ``d(d, e) = (dd - Phi e, -de)``, levels
    ``(level_D + delta, level_C + 2 delta)``."""
    C, D = Phi.source, Phi.target
    field = C.field
    delta = Phi.shift if delta is None else (delta if isinstance(delta, QuadReal) else QuadReal.parse(delta))
    if delta < 0:
        raise ValueError("shift must be nonnegative")
    _check_shift(Phi, delta)
    two = delta + delta
    degs = sorted(set(D.degrees()) | {k + 1 for k in C.degrees()})
    levels = {k: [t + delta for t in D.levels(k)] + [t + two for t in C.levels(k - 1)] for k in degs}
    names = {k: [f"d.{D.name(k, i)}" for i in range(D.dim(k))] + [f"e.{C.name(k - 1, i)}" for i in range(C.dim(k - 1))]
             for k in degs}
    zero = field.zero
    bounds = {}
    for k in degs:
        nd1, ne1 = D.dim(k - 1), C.dim(k - 2)
        if nd1 + ne1 == 0:
            continue
        cols = []
        for col in D.boundary(k).columns:
            cols.append(tuple(col) + (zero,) * ne1)
        Pm = Phi.map(k - 1)
        dCe = C.boundary(k - 1)
        for i in range(C.dim(k - 1)):
            phi_e = tuple(-a for a in Pm.columns[i]) if nd1 else ()
            d_e = tuple(-a for a in dCe.columns[i]) if ne1 else ()
            cols.append(phi_e + d_e)
        bounds[k] = cols
    return FloerComplex.from_levels(field, levels, bounds, names=names)
