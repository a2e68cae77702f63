"""Reading and writing complexes and barcodes, plus filtered Rips complexes.

File layout for a complex (JSON)::

    {
      "field": "Q",                      # or "Fp:2", "Fp:5", ...
      "value_group": {"d": 2, "generators": [["1", "0"], ["0", "1"]]},
      "degrees": {"0": {"levels": ["0", "1"]}, "1": {"levels": ["2"]}},
      "boundaries": {"1": [[ [["1", "0"]] ], [ [["-1", "1+sqrt(2)"]] ]]}
    }

``boundaries[k]`` is the matrix of ``d_k`` in row-major order: one row per
generator of degree ``k-1``, one entry per generator of degree ``k``.  An
entry is a list of ``[coefficient, exponent]`` terms (``[]`` is zero), or
``{"num": [...], "den": [...]}`` for a genuine quotient.  Exponents and
levels are exact strings such as ``"3/2"`` or ``"1-2*sqrt(2)"``.
"""
from __future__ import annotations

import csv
import io
import itertools
import json
from fractions import Fraction
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Union

from .barcode import Bar, Barcode
from .complex import FloerComplex, ValidationError, validate
from .exactnum import INF, ConfigurationError, GroundField, QuadReal, ValueGroup, parse_rational, QQ
from .filtered import FilteredSpace, filtration_spectrum
from .novikov import NovikovField
from .svd import SvdResult

__all__ = [
    "IngestError",
    "load_complex",
    "save_complex",
    "complex_from_dict",
    "complex_to_dict",
    "load_barcode",
    "save_barcode",
    "barcode_to_dict",
    "barcode_from_dict",
    "barcode_csv",
    "barcode_svg",
    "svd_to_dict",
    "spectrum_to_dict",
    "save_outputs",
    "load_points",
    "rips_complex",
    "RIPS_MAX_SIMPLICES",
]

RIPS_MAX_SIMPLICES = 20000
PathLike = Union[str, Path]


class IngestError(ValueError):
    """A malformed input; ``location`` is a JSON path such as ``boundaries.1[0][2]``."""

    def __init__(self, location: str, message: str):
        self.location = location
        super().__init__(f"{location}: {message}" if location else message)


# --------------------------------------------------------------------------
# scalars


def _entry_from_json(field: NovikovField, raw, where: str):
    try:
        if isinstance(raw, dict):
            if set(raw) != {"num", "den"}:
                raise IngestError(where, "a quotient entry needs exactly the keys num and den")
            num = _entry_from_json(field, raw["num"], where + ".num")
            den = _entry_from_json(field, raw["den"], where + ".den")
            if not den:
                raise IngestError(where, "denominator is zero")
            return num / den
        if isinstance(raw, list):
            for n, t in enumerate(raw):
                if not isinstance(t, list) or len(t) != 2:
                    raise IngestError(f"{where}[{n}]", f"term {t!r} is not a [coefficient, exponent] pair")
                e = QuadReal.parse(t[1], field.group.d or None)
                if not field.group.contains(e):
                    raise IngestError(
                        f"{where}[{n}]", f"exponent {e} of term {t!r} is outside the value group {field.group.spec()}"
                    )
        return field.from_terms(raw)
    except IngestError:
        raise
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise IngestError(where, str(exc)) from None


def _entry_to_json(field: NovikovField, x):
    return field.to_terms(x)


def _level_from_json(raw, d: int, where: str) -> QuadReal:
    try:
        return QuadReal.parse(raw, d or None)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise IngestError(where, f"bad level {raw!r}: {exc}") from None


def _level_to_json(t) -> str:
    return "inf" if t is INF else str(t)


# --------------------------------------------------------------------------
# complexes


def complex_to_dict(C: FloerComplex) -> dict:
    field = C.field
    out: dict = {
        "field": field.ground.name,
        "value_group": C.group.to_dict(),
        "degrees": {},
        "boundaries": {},
    }
    if C.strict:
        out["strict"] = True
    for k in C.degrees():
        entry: dict = {"levels": [str(t) for t in C.levels(k)]}
        if C.names.get(k):
            entry["names"] = list(C.names[k])
        out["degrees"][str(k)] = entry
        if C.dim(k - 1):
            d = C.boundary(k)
            if not d.is_zero():
                out["boundaries"][str(k)] = [[_entry_to_json(field, a) for a in row] for row in d.rows()]
    return out


def complex_from_dict(data: dict, check: bool = True) -> FloerComplex:
    """Build (and by default validate) a complex from its JSON document."""
    if not isinstance(data, dict):
        raise IngestError("", "top level must be an object")
    try:
        ground = GroundField.parse(str(data.get("field", "Q")))
    except ConfigurationError as exc:
        raise IngestError("field", str(exc)) from None
    try:
        group = ValueGroup.from_dict(data.get("value_group", {"d": 0, "generators": []}))
    except (ValueError, TypeError) as exc:
        raise IngestError("value_group", str(exc)) from None
    field = NovikovField(ground, group)
    degrees = data.get("degrees", {})
    if not isinstance(degrees, dict):
        raise IngestError("degrees", "must be an object keyed by degree")
    spaces: Dict[int, FilteredSpace] = {}
    names: Dict[int, List[str]] = {}
    for key, body in degrees.items():
        where = f"degrees.{key}"
        try:
            k = int(key)
        except ValueError:
            raise IngestError(where, f"degree {key!r} is not an integer") from None
        if not isinstance(body, dict) or "levels" not in body:
            raise IngestError(where, "needs a levels list")
        lv = [_level_from_json(t, group.d, f"{where}.levels[{i}]") for i, t in enumerate(body["levels"])]
        spaces[k] = FilteredSpace(lv, field)
        if "names" in body:
            names[k] = [str(s) for s in body["names"]]
    bnds: Dict[int, List[List]] = {}
    for key, rows in data.get("boundaries", {}).items():
        where = f"boundaries.{key}"
        try:
            k = int(key)
        except ValueError:
            raise IngestError(where, f"degree {key!r} is not an integer") from None
        n = spaces[k].dim if k in spaces else 0
        m = spaces[k - 1].dim if (k - 1) in spaces else 0
        if not isinstance(rows, list) or len(rows) != m:
            raise IngestError(where, f"expected {m} rows (generators in degree {k - 1})")
        cols = [[None] * m for _ in range(n)]
        for i, row in enumerate(rows):
            if not isinstance(row, list) or len(row) != n:
                raise IngestError(f"{where}[{i}]", f"expected {n} entries (generators in degree {k})")
            for j, raw in enumerate(row):
                cols[j][i] = _entry_from_json(field, raw, f"{where}[{i}][{j}]")
        bnds[k] = cols
    try:
        C = FloerComplex(field, spaces, bnds, names=names, strict=bool(data.get("strict", False)))
    except (ValueError, ConfigurationError) as exc:
        raise IngestError("boundaries", str(exc)) from None
    if check:
        v = validate(C)
        if v:
            raise ValidationError(v)
    return C


def _read_json(path: PathLike):
    text = Path(path).read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise IngestError(f"{path}:{exc.lineno}:{exc.colno}", exc.msg) from None


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


def load_complex(path: PathLike, check: bool = True) -> FloerComplex:
    return complex_from_dict(_read_json(path), check=check)


def save_complex(C: FloerComplex, path: PathLike) -> None:
    Path(path).write_text(_dump(complex_to_dict(C)))


# --------------------------------------------------------------------------
# barcodes


def barcode_to_dict(B: Barcode) -> dict:
    by_deg: Dict[int, list] = {}
    for b in B.bars:
        row = {"a": str(b.a), "L": _level_to_json(b.L)}
        if B.verbose and b.L is not INF and not b.L:
            row["verbose_only"] = True
        by_deg.setdefault(b.degree, []).append(row)
    return {
        "value_group": B.group.to_dict(),
        "verbose": B.verbose,
        "degrees": [{"degree": k, "bars": by_deg[k]} for k in sorted(by_deg)],
    }


def barcode_from_dict(data: dict) -> Barcode:
    try:
        group = ValueGroup.from_dict(data.get("value_group", {"d": 0, "generators": []}))
    except (ValueError, TypeError) as exc:
        raise IngestError("value_group", str(exc)) from None
    bars = []
    for n, block in enumerate(data.get("degrees", [])):
        where = f"degrees[{n}]"
        if "degree" not in block:
            raise IngestError(where, "missing degree")
        k = int(block["degree"])
        for i, row in enumerate(block.get("bars", [])):
            w = f"{where}.bars[{i}]"
            a = _level_from_json(row.get("a"), group.d, w + ".a")
            L = INF if row.get("L") == "inf" else _level_from_json(row.get("L"), group.d, w + ".L")
            if L is not INF and L.sign() < 0:
                raise IngestError(w + ".L", "bar length is negative")
            bars.append(Bar.make(k, a, L, group))
    return Barcode(bars, group, verbose=bool(data.get("verbose", False)))


def load_barcode(path: PathLike) -> Barcode:
    return barcode_from_dict(_read_json(path))


def save_barcode(B: Barcode, path: PathLike) -> None:
    Path(path).write_text(_dump(barcode_to_dict(B)))


def barcode_csv(B: Barcode) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["degree", "a", "L"])
    for b in B.bars:
        w.writerow([b.degree, str(b.a), _level_to_json(b.L)])
    return buf.getvalue()


def barcode_svg(B: Barcode, width: int = 640, row_height: int = 14) -> str:
    """One horizontal segment per bar; infinite bars run to the right edge.

    Coordinates are floats because they only place pixels; labels carry the
    exact values.
    """
    pad = 60
    bars = list(B.bars)
    ends = []
    for b in bars:
        ends.append(float(b.a))
        if b.L is not INF:
            ends.append(float(b.a + b.L))
    lo = min(ends) if ends else 0.0
    hi = max(ends) if ends else 1.0
    if hi - lo < 1e-12:
        hi = lo + 1.0
    span = hi - lo
    lo, hi = lo - 0.05 * span, hi + 0.15 * span
    scale = (width - 2 * pad) / (hi - lo)
    height = max(1, len(bars)) * row_height + 2 * row_height
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        '<g font-family="monospace" font-size="10">',
    ]
    for n, b in enumerate(bars):
        y = row_height * (n + 1)
        x0 = pad + (float(b.a) - lo) * scale
        x1 = width - pad if b.L is INF else pad + (float(b.a + b.L) - lo) * scale
        label = f"H{b.degree} [{b.a}] L={_level_to_json(b.L)}"
        out.append(f'<line x1="{x0:.2f}" y1="{y}" x2="{max(x1, x0 + 1):.2f}" y2="{y}" stroke="black" stroke-width="3"/>')
        out.append(f'<text x="4" y="{y + 3}">{_xml(label)}</text>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _xml(s: str) -> str:
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


# --------------------------------------------------------------------------
# other outputs


def svd_to_dict(res: SvdResult, field: NovikovField) -> dict:
    vec = lambda v: [field.to_terms(a) for a in v]  # noqa: E731
    return {
        "rank": res.rank,
        "diffs": [str(t) for t in res.diffs],
        "y_levels": [str(t) for t in res.y_levels],
        "x_levels": [str(t) for t in res.x_levels],
        "y": [vec(v) for v in res.y],
        "x": [vec(v) for v in res.x],
    }


def spectrum_to_dict(C: FloerComplex) -> dict:
    return {
        "value_group": C.group.to_dict(),
        "spectrum": {str(k): [str(t) for t in filtration_spectrum(C.space(k))] for k in C.degrees()},
    }


def save_outputs(obj, path: PathLike, fmt: str = "json", field: Optional[NovikovField] = None) -> None:
    """Write a barcode, an SvdResult (needs ``field``) or a complex's spectrum."""
    path = Path(path)
    if isinstance(obj, Barcode):
        if fmt == "json":
            text = _dump(barcode_to_dict(obj))
        elif fmt == "csv":
            text = barcode_csv(obj)
        elif fmt == "svg":
            text = barcode_svg(obj)
        else:
            raise ValueError(f"unknown format {fmt!r}")
    elif isinstance(obj, SvdResult):
        if fmt != "json" or field is None:
            raise ValueError("an SVD is written as json and needs its field")
        text = _dump(svd_to_dict(obj, field))
    elif isinstance(obj, FloerComplex):
        if fmt == "json":
            text = _dump(spectrum_to_dict(obj))
        elif fmt == "csv":
            buf = io.StringIO()
            w = csv.writer(buf, lineterminator="\n")
            w.writerow(["degree", "coset"])
            for k, vals in spectrum_to_dict(obj)["spectrum"].items():
                for t in vals:
                    w.writerow([k, t])
            text = buf.getvalue()
        else:
            raise ValueError(f"a spectrum cannot be written as {fmt!r}")
    else:
        raise TypeError(f"do not know how to save {type(obj).__name__}")
    path.write_text(text)


# --------------------------------------------------------------------------
# Rips complexes


def load_points(path: PathLike) -> List[List[Fraction]]:
    data = _read_json(path)
    if not isinstance(data, list):
        raise IngestError("", "points file must be a JSON array of coordinate arrays")
    pts = []
    for i, p in enumerate(data):
        if not isinstance(p, list):
            raise IngestError(f"[{i}]", "point must be an array")
        try:
            pts.append([parse_rational(c) for c in p])
        except (ValueError, TypeError, ZeroDivisionError) as exc:
            raise IngestError(f"[{i}]", str(exc)) from None
    return pts


def _metric(name: str):
    if name == "L1":
        return lambda p, q: sum(abs(a - b) for a, b in zip(p, q))
    if name == "Linf":
        return lambda p, q: max((abs(a - b) for a, b in zip(p, q)), default=Fraction(0))
    if name == "EuclidSq":
        return lambda p, q: sum((a - b) * (a - b) for a, b in zip(p, q))
    raise ConfigurationError(f"unknown metric {name!r} (L1, Linf or EuclidSq)")


def rips_complex(
    points: Sequence[Sequence],
    max_dim: int = 2,
    metric: str = "Linf",
    cap=None,
    ground: GroundField = QQ,
    max_simplices: int = RIPS_MAX_SIMPLICES,
) -> FloerComplex:
    """Filtered Rips complex over ``ground`` with the trivial value group.

    A simplex sits at its diameter.  ``EuclidSq`` uses squared distances,
    which keeps levels rational and only reparametrizes the filtration axis
    monotonically.  Simplices are oriented by increasing vertex index, so
    face ``i`` enters the boundary with sign ``(-1)^i``.
    """
    if max_dim < 0 or max_dim > 3:
        raise ConfigurationError("rips_complex supports max_dim between 0 and 3")
    pts = [[parse_rational(c) for c in p] for p in points]
    if pts and len({len(p) for p in pts}) != 1:
        raise ConfigurationError("points have different dimensions")
    dist = _metric(metric)
    cap_q = None if cap is None else parse_rational(cap)
    n = len(pts)
    D = [[dist(pts[i], pts[j]) for j in range(n)] for i in range(n)]
    field = NovikovField(ground)
    simplices: Dict[int, List[tuple]] = {}
    levels: Dict[int, List[QuadReal]] = {}
    total = 0
    for k in range(max_dim + 1):
        simplices[k], levels[k] = [], []
        for sigma in itertools.combinations(range(n), k + 1):
            diam = max((D[i][j] for i, j in itertools.combinations(sigma, 2)), default=Fraction(0))
            if cap_q is not None and diam > cap_q:
                continue
            simplices[k].append(sigma)
            levels[k].append(QuadReal(diam))
            total += 1
            if total > max_simplices:
                raise ConfigurationError(
                    f"Rips complex exceeds {max_simplices} simplices; lower max_dim or set a cap"
                )
    index = {k: {s: i for i, s in enumerate(simplices[k])} for k in simplices}
    one, zero = field.one, field.zero
    bnds = {}
    for k in range(1, max_dim + 1):
        cols = []
        for sigma in simplices[k]:
            col = [zero] * len(simplices[k - 1])
            for i in range(k + 1):
                face = sigma[:i] + sigma[i + 1:]
                col[index[k - 1][face]] = one if i % 2 == 0 else -one
            cols.append(col)
        bnds[k] = cols
    names = {k: ["".join(f"v{v}" for v in s) for s in simplices[k]] for k in simplices}
    return FloerComplex(field, {k: FilteredSpace(levels[k], field) for k in simplices}, bnds, names=names)
