"""Arithmetic in the Novikov field over a ground field K and value group.

Elements with finite support are group-ring polynomials ``sum a_g T^g``.
The field operations need quotients, so a general element is stored as a
fraction ``num/den`` of two such polynomials, with ``den`` normalized to
have lowest exponent 0 and lowest coefficient 1.  Then ``nu(num/den)`` is
just the lowest exponent of ``num``.

Internally an exponent is not a ``QuadReal`` but an integer code for its
coordinates in the lattice basis of the group (one coordinate for rank
one, two packed into one int for rank two).  Codes add like the exponents
they stand for, hash quickly, and the valuation order between them is
decided with integer arithmetic only.  ``QuadReal`` appears again at the
edges: valuations, file terms and printing.

When the value group is trivial the Novikov field is K itself, and the
field hands out raw ground scalars (``Fraction`` or ``FpElem``) instead of
wrapping them.  Every other module goes through :meth:`NovikovField.nu`
so it never needs to know which representation is in play.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Dict, Sequence

from .exactnum import (
    INF,
    ConfigurationError,
    FpElem,
    GroundField,
    QuadReal,
    ValueGroup,
    ZERO,
)

__all__ = [
    "GroupRingPoly",
    "NovikovScalar",
    "NovikovField",
    "valuation",
    "nov_arith",
    "normalize",
]

Poly = Dict[object, object]  # exponent (code or QuadReal) -> nonzero coefficient

_PACK = 1 << 32  # rank-two code: i + j * _PACK


# --------------------------------------------------------------------------
# raw polynomial helpers; keys may be ints or QuadReals, zero is falsy for both


def _padd(a: Poly, b: Poly, sign: int = 1) -> Poly:
    out = dict(a)
    for e, c in b.items():
        if e in out:
            s = out[e] + c if sign > 0 else out[e] - c
            if s:
                out[e] = s
            else:
                del out[e]
        else:
            out[e] = c if sign > 0 else -c
    return out


def _pmul(a: Poly, b: Poly) -> Poly:
    if len(a) == 1:
        (ea, ca), = a.items()
        if not ea and ca == 1:
            return b
        return {ea + e: ca * c for e, c in b.items()}
    if len(b) == 1:
        return _pmul(b, a)
    out: Poly = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = ea + eb
            if e in out:
                s = out[e] + ca * cb
                if s:
                    out[e] = s
                else:
                    del out[e]
            else:
                out[e] = ca * cb
    return out


def _pshift_scale(a: Poly, e0, c0) -> Poly:
    """Return ``a / (c0 T^e0)``."""
    if not e0:
        if c0 == 1:
            return a
        return {e: c / c0 for e, c in a.items()}
    return {e - e0: c / c0 for e, c in a.items()}


def _is_one(p: Poly) -> bool:
    if len(p) != 1:
        return False
    (e, c), = p.items()
    return not e and c == 1


# dense univariate helpers for the rank-one gcd (coefficient lists, low -> high)


def _dense_trim(a: list) -> list:
    while a and not a[-1]:
        a.pop()
    return a


def _dense_divmod(a: list, b: list):
    a = list(a)
    db = len(b) - 1
    lead = b[-1]
    q = [0] * max(len(a) - db, 0)
    for k in range(len(a) - 1 - db, -1, -1):
        c = a[k + db]
        if c:
            f = c / lead
            q[k] = f
            for t in range(db + 1):
                a[k + t] = a[k + t] - f * b[t]
    return q, _dense_trim(a[:db] if db else [])


def _dense_gcd(a: list, b: list) -> list:
    while b:
        _, r = _dense_divmod(a, b)
        a, b = b, r
    lead = a[-1]
    return [c / lead for c in a]


# --------------------------------------------------------------------------
# exponent codes


class _Exponents:
    """Encode group elements as ints and order the codes by real value."""

    def __init__(self, G: ValueGroup):
        self.G = G
        self.rank = G.rank
        self._dec: Dict[int, QuadReal] = {0: ZERO}
        self._enc: Dict[QuadReal, int] = {ZERO: 0}
        if self.rank == 1:
            self.unit = G.unit
        elif self.rank == 2:
            (self.h11, self.h12), (_, self.h22) = G._basis
            self.d = G.d
            self.b1, self.b2 = G.basis_elements()

    def encode(self, e: QuadReal) -> int:
        c = self._enc.get(e)
        if c is not None:
            return c
        if not self.G.contains(e):
            raise ConfigurationError(f"exponent {e} is not in {self.G!r}")
        if self.rank == 1:
            c = int((e / self.unit).q0)
        else:
            i, j = self.G.lattice_coords(e)
            c = i + j * _PACK
        self._enc[e] = c
        self._dec[c] = e
        return c

    def decode(self, c: int) -> QuadReal:
        e = self._dec.get(c)
        if e is not None:
            return e
        if self.rank == 1:
            e = self.unit * c
        else:
            j = (c + _PACK // 2) // _PACK
            i = c - j * _PACK
            e = self.b1 * i + self.b2 * j
        self._dec[c] = e
        self._enc[e] = c
        return e

    def _pair(self, c: int):
        # den * value = a + b sqrt(d)
        j = (c + _PACK // 2) // _PACK
        i = c - j * _PACK
        return i * self.h11, i * self.h12 + j * self.h22

    def less(self, x: int, y: int) -> bool:
        if self.rank == 1:
            return x < y
        a1, b1 = self._pair(x)
        a2, b2 = self._pair(y)
        a, b = a2 - a1, b2 - b1  # is a + b sqrt(d) > 0 ?
        if b == 0:
            return a > 0
        if a >= 0 and b >= 0:
            return True
        if a <= 0 and b <= 0:
            return False
        if a > 0:
            return a * a > b * b * self.d
        return b * b * self.d > a * a

    def low(self, p: Poly) -> int:
        it = iter(p)
        best = next(it)
        if self.rank == 1:
            for e in it:
                if e < best:
                    best = e
            return best
        for e in it:
            if self.less(e, best):
                best = e
        return best

    def sort(self, codes) -> list:
        if self.rank == 1:
            return sorted(codes)
        return sorted(codes, key=self.decode)


# --------------------------------------------------------------------------


class GroupRingPoly:
    """Finitely supported ``sum a_g T^g`` with ``QuadReal`` exponents."""

    __slots__ = ("terms",)

    def __init__(self, terms: Poly | None = None):
        self.terms = {e: c for e, c in (terms or {}).items() if c}

    def valuation(self):
        return min(self.terms) if self.terms else INF

    def __add__(self, o: "GroupRingPoly") -> "GroupRingPoly":
        return GroupRingPoly(_padd(self.terms, o.terms))

    def __sub__(self, o: "GroupRingPoly") -> "GroupRingPoly":
        return GroupRingPoly(_padd(self.terms, o.terms, -1))

    def __mul__(self, o: "GroupRingPoly") -> "GroupRingPoly":
        return GroupRingPoly(_pmul(self.terms, o.terms))

    def __eq__(self, o):
        return isinstance(o, GroupRingPoly) and self.terms == o.terms

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        return f"GroupRingPoly({_format_poly(self.terms)})"


def _format_poly(p: Poly) -> str:
    if not p:
        return "0"
    parts = []
    for e in sorted(p):
        c = p[e]
        cs = str(c.v) if isinstance(c, FpElem) else str(c)
        parts.append(cs if not e else f"{cs}*T^({e})")
    return " + ".join(parts)


# --------------------------------------------------------------------------


class NovikovScalar:
    """Element ``num/den`` of a Novikov field with a nontrivial value group.

    ``num`` and ``den`` are keyed by exponent codes; use :attr:`numerator`
    and :attr:`denominator` for the ``QuadReal``-keyed view.
    """

    __slots__ = ("num", "den", "field")

    def __init__(self, num: Poly, den: Poly, field: "NovikovField"):
        self.num = num
        self.den = den
        self.field = field

    # construction goes through field._make, which normalizes

    def _coerce(self, o):
        if isinstance(o, NovikovScalar):
            if o.field is not self.field and o.field != self.field:
                raise ConfigurationError("mixing scalars from different Novikov fields")
            return o
        if isinstance(o, (int, Fraction, FpElem)):
            return self.field.constant(o)
        return None

    def __add__(self, o):
        o = self._coerce(o)
        if o is None:
            return NotImplemented
        f = self.field
        if not o.num:
            return self
        if not self.num:
            return o
        if self.den is o.den or self.den == o.den:
            return f._make(_padd(self.num, o.num), self.den, reduce=len(self.den) > 1)
        return f._make(
            _padd(_pmul(self.num, o.den), _pmul(o.num, self.den)),
            _pmul(self.den, o.den),
        )

    __radd__ = __add__

    def __neg__(self):
        return NovikovScalar({e: -c for e, c in self.num.items()}, self.den, self.field)

    def __sub__(self, o):
        o = self._coerce(o)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, o):
        o = self._coerce(o)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, o):
        o = self._coerce(o)
        if o is None:
            return NotImplemented
        if not self.num or not o.num:
            return self.field.zero
        return self.field._make(_pmul(self.num, o.num), _pmul(self.den, o.den))

    __rmul__ = __mul__

    def inverse(self) -> "NovikovScalar":
        if not self.num:
            raise ZeroDivisionError("inverse of zero in the Novikov field")
        return self.field._make(self.den, self.num)

    def __truediv__(self, o):
        o = self._coerce(o)
        if o is None:
            return NotImplemented
        if not o.num:
            raise ZeroDivisionError("division by zero in the Novikov field")
        if not self.num:
            return self
        return self.field._make(_pmul(self.num, o.den), _pmul(self.den, o.num))

    def __rtruediv__(self, o):
        o = self._coerce(o)
        if o is None:
            return NotImplemented
        return o / self

    def __bool__(self):
        return bool(self.num)

    def __eq__(self, o):
        o = self._coerce(o)
        if o is None:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((frozenset(self.num.items()), frozenset(self.den.items())))

    @property
    def valuation(self):
        return self.field.nu(self)

    @property
    def numerator(self) -> GroupRingPoly:
        dec = self.field._exps.decode
        return GroupRingPoly({dec(e): c for e, c in self.num.items()})

    @property
    def denominator(self) -> GroupRingPoly:
        dec = self.field._exps.decode
        return GroupRingPoly({dec(e): c for e, c in self.den.items()})

    @property
    def is_polynomial(self) -> bool:
        return _is_one(self.den)

    def __repr__(self):
        if _is_one(self.den):
            return _format_poly(self.numerator.terms)
        return f"({_format_poly(self.numerator.terms)})/({_format_poly(self.denominator.terms)})"


class NovikovField:
    """The Novikov field over ``ground`` with value group ``group``.

    Every stored fraction is fully reduced (a univariate Euclid for rank
    one, a bivariate gcd for rank two), and the denominator is normalized,
    so equal elements have identical ``num``/``den`` dicts.
    """

    def __init__(self, ground: GroundField, group: ValueGroup | None = None):
        self.ground = ground
        self.group = group if group is not None else ValueGroup.trivial()
        self.trivial = self.group.rank == 0
        self._exps = _Exponents(self.group)
        self._one_poly: Poly = {0: ground.one}
        if self.trivial:
            self.zero = ground.zero
            self.one = ground.one
        else:
            self.zero = NovikovScalar({}, self._one_poly, self)
            self.one = NovikovScalar(dict(self._one_poly), self._one_poly, self)

    # -- identity
    def __eq__(self, other):
        return (
            isinstance(other, NovikovField)
            and other.ground == self.ground
            and other.group == self.group
        )

    def __hash__(self):
        return hash((self.ground, self.group))

    def __repr__(self):
        return f"NovikovField({self.ground.name}, {self.group!r})"

    # -- construction
    def constant(self, c):
        c = self.ground(c)
        if self.trivial:
            return c
        if not c:
            return self.zero
        return NovikovScalar({0: c}, self._one_poly, self)

    def monomial(self, coef, exponent) -> object:
        exponent = exponent if isinstance(exponent, QuadReal) else QuadReal.parse(exponent, self.group.d or None)
        if not self.group.contains(exponent):
            raise ConfigurationError(f"exponent {exponent} is not in {self.group!r}")
        c = self.ground(coef)
        if self.trivial:
            return c
        if not c:
            return self.zero
        return NovikovScalar({self._exps.encode(exponent): c}, self._one_poly, self)

    def T(self, g) -> object:
        return self.monomial(1, g)

    def polynomial(self, terms: Poly) -> object:
        """Build from an ``{exponent: coefficient}`` map (``QuadReal`` exponents in the group)."""
        if self.trivial:
            s = self.ground.zero
            for e, c in terms.items():
                if e:
                    raise ConfigurationError(f"exponent {e} is not in the trivial group")
                s = s + self.ground(c)
            return s
        clean: Poly = {}
        enc = self._exps.encode
        for e, c in terms.items():
            e = e if isinstance(e, QuadReal) else QuadReal.parse(e, self.group.d or None)
            code = enc(e)
            c = self.ground(c)
            if c:
                clean[code] = clean[code] + c if code in clean else c
        clean = {e: c for e, c in clean.items() if c}
        return self._make(clean, self._one_poly)

    def from_terms(self, terms: Sequence) -> object:
        """Read a file literal: list of ``[coefficient, exponent]`` pairs, or a bare number."""
        if isinstance(terms, (int, str)) and not isinstance(terms, bool):
            return self.constant(terms)
        poly: Poly = {}
        for t in terms:
            if not isinstance(t, (list, tuple)) or len(t) != 2:
                raise ValueError(f"term {t!r} is not a [coefficient, exponent] pair")
            e = QuadReal.parse(t[1], self.group.d or None)
            c = self.ground(t[0])
            poly[e] = poly[e] + c if e in poly else c
        return self.polynomial(poly)

    def to_terms(self, x) -> list | dict:
        if self.trivial:
            return [[self.ground.format(x), "0"]] if x else []
        fmt = self.ground.format
        dec = self._exps.decode

        def side(p: Poly):
            return [[fmt(p[e]), str(dec(e))] for e in self._exps.sort(p)]

        if _is_one(x.den):
            return side(x.num)
        return {"num": side(x.num), "den": side(x.den)}

    def _make(self, num: Poly, den: Poly, reduce: bool = True) -> NovikovScalar:
        if not num:
            return self.zero
        if len(den) == 1:
            (e0, c0), = den.items()
            if not e0 and c0 == 1:
                return NovikovScalar(num, self._one_poly, self)
            return NovikovScalar(_pshift_scale(num, e0, c0), self._one_poly, self)
        e0 = self._exps.low(den)
        c0 = den[e0]
        num = _pshift_scale(num, e0, c0)
        den = _pshift_scale(den, e0, c0)
        if reduce and self.group.rank == 1:
            num, den = self._cancel_rank1(num, den)
        elif reduce and self.group.rank == 2:
            num, den = self._cancel_rank2(num, den)
        return NovikovScalar(num, den, self)

    def _cancel_rank1(self, num: Poly, den: Poly):
        # codes are multiples of the positive unit, so they index dense lists
        ln = min(num)
        dn = [self.ground.zero] * (max(num) - ln + 1)
        for e, c in num.items():
            dn[e - ln] = c
        dd = [self.ground.zero] * (max(den) + 1)
        for e, c in den.items():
            dd[e] = c
        g = _dense_gcd(dd, dn)
        if len(g) == 1:
            return num, den
        qn, _ = _dense_divmod(dn, g)
        qd, _ = _dense_divmod(dd, g)
        # qd has nonzero constant term because den did and g is monic with g(0) != 0
        c0 = qd[0]
        num = {k + ln: c / c0 for k, c in enumerate(qn) if c}
        den = {k: c / c0 for k, c in enumerate(qd) if c}
        return num, den

    def _cancel_rank2(self, num: Poly, den: Poly):
        """Divide out the gcd in the two-variable Laurent ring.

        The packed codes unpack to lattice coordinates ``(i, j)``, so after
        a monomial shift the group ring is ``K[X, Y]``; the bivariate gcd
        comes from sympy's sparse polynomial rings.
        """
        R, to_k, from_k = _rank2_ring(self)

        def unpack(c):
            j = (c + _PACK // 2) // _PACK
            return c - j * _PACK, j

        cn = {e: unpack(e) for e in num}
        cd = {e: unpack(e) for e in den}
        si = min(min(c[0] for c in cn.values()), min(c[0] for c in cd.values()))
        sj = min(min(c[1] for c in cn.values()), min(c[1] for c in cd.values()))
        pn = R({(c[0] - si, c[1] - sj): to_k(num[e]) for e, c in cn.items()})
        pd = R({(c[0] - si, c[1] - sj): to_k(den[e]) for e, c in cd.items()})
        g, qn, qd = pn.cofactors(pd)
        if g.is_ground:
            return num, den

        def back(p):
            return {(i + si) + (j + sj) * _PACK: from_k(c) for (i, j), c in p.items()}

        num, den = back(qn), back(qd)
        e0 = self._exps.low(den)
        c0 = den[e0]
        return _pshift_scale(num, e0, c0), _pshift_scale(den, e0, c0)

    # -- queries
    def nu(self, x):
        """Valuation; ``INF`` for zero."""
        if self.trivial:
            return ZERO if x else INF
        return self._exps.decode(self._exps.low(x.num)) if x.num else INF

    def coerce(self, x):
        """Accept ints, rationals, residues or scalars of this field."""
        if isinstance(x, NovikovScalar):
            if x.field is self:
                return x
            if x.field == self:
                return NovikovScalar(x.num, x.den, self)
            raise ConfigurationError("scalar belongs to a different Novikov field")
        if self.trivial and isinstance(x, (Fraction, FpElem)) and not isinstance(x, bool):
            return self.ground(x)
        return self.constant(x)

    def extend_to(self, x, target: "NovikovField"):
        """Reinterpret ``x`` over a field with a larger value group."""
        if target.ground != self.ground:
            raise ConfigurationError("coefficient extension must keep the ground field")
        if not self.group.is_subgroup_of(target.group):
            raise ConfigurationError(f"{self.group!r} is not contained in {target.group!r}")
        if self.trivial:
            return target.constant(x)
        if target.trivial:
            raise ConfigurationError("cannot extend into the trivial group")
        dec, enc = self._exps.decode, target._exps.encode
        num = {enc(dec(e)): c for e, c in x.num.items()}
        den = {enc(dec(e)): c for e, c in x.den.items()}
        return target._make(num, den)


# --------------------------------------------------------------------------
# functional surface


def valuation(field: NovikovField, x):
    return field.nu(x)


def nov_arith(op: str, a, b=None):
    """Dispatch ``add``, ``sub``, ``mul``, ``div``, ``neg`` or ``inv``."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        if not b:
            raise ZeroDivisionError("division by zero in the Novikov field")
        return a / b
    if op == "neg":
        return -a
    if op == "inv":
        if not a:
            raise ZeroDivisionError("inverse of zero in the Novikov field")
        return 1 / a if not isinstance(a, NovikovScalar) else a.inverse()
    raise ValueError(f"unknown operation {op!r}")


def normalize(x):
    """Return the normalized form (idempotent; every constructor already normalizes)."""
    if isinstance(x, NovikovScalar):
        return x.field._make(dict(x.num), dict(x.den))
    return x


_RANK2_RINGS: dict = {}


def _rank2_ring(field: NovikovField):
    """``(ring, to_domain, from_domain)`` for ``K[X, Y]`` over the ground field."""
    p = field.ground.p
    hit = _RANK2_RINGS.get(p)
    if hit is not None:
        return hit
    from sympy.polys.domains import GF as SymGF, QQ as SymQQ
    from sympy.polys.rings import ring

    if p:
        dom = SymGF(p)
        R, _, _ = ring("X,Y", dom)
        ground = field.ground

        def to_k(c):
            return dom(int(c.v))

        def from_k(c):
            return ground(int(c) % p)
    else:
        dom = SymQQ
        R, _, _ = ring("X,Y", dom)

        def to_k(c):
            return dom(c.numerator, c.denominator)

        def from_k(c):
            return Fraction(int(c.numerator), int(c.denominator))

    hit = (R, to_k, from_k)
    _RANK2_RINGS[p] = hit
    return hit
