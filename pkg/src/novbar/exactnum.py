"""Exact scalars: ground fields, real quadratic numbers and value groups.

Every comparison in the library goes through :class:`QuadReal`, which
represents ``q0 + q1*sqrt(d)`` with rational ``q0, q1`` and a squarefree
``d``.  Signs are decided by squaring, never by floating point.
"""
from __future__ import annotations

import enum
import math
import re
from fractions import Fraction
from functools import total_ordering
from typing import Iterable, Sequence

__all__ = [
    "ConfigurationError",
    "Ordering",
    "QuadReal",
    "INF",
    "NEG_INF",
    "ZERO",
    "GroundField",
    "QQ",
    "GF",
    "FpElem",
    "ValueGroup",
    "quad_compare",
    "lattice_membership",
    "canonical_rep",
    "parse_rational",
    "format_rational",
    "is_prime",
    "is_squarefree",
]


class ConfigurationError(ValueError):
    """Inconsistent arithmetic configuration (field, discriminant, group)."""


class Ordering(enum.Enum):
    LT = -1
    EQ = 0
    GT = 1


def parse_rational(text) -> Fraction:
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, str):
        return Fraction(text.strip())
    raise TypeError(f"cannot read a rational from {text!r}")


def format_rational(q: Fraction) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


def is_squarefree(d: int) -> bool:
    if d < 0:
        return False
    if d in (0, 1):
        return True
    f = 2
    while f * f <= d:
        if d % (f * f) == 0:
            return False
        f += 1
    return True


def _square_part(d: int) -> tuple[int, int]:
    """Split ``d = s*s*r`` with ``r`` squarefree; returns ``(s, r)``."""
    s, f = 1, 2
    while f * f <= d:
        while d % (f * f) == 0:
            d //= f * f
            s *= f
        f += 1
    return s, d


def _sign_fraction(q: Fraction) -> int:
    return (q > 0) - (q < 0)


# --------------------------------------------------------------------------
# Ground fields


class FpElem:
    """Residue class modulo a prime ``p``."""

    __slots__ = ("v", "p")

    def __init__(self, v: int, p: int):
        self.v = v % p
        self.p = p

    def _other(self, o):
        if isinstance(o, FpElem):
            if o.p != self.p:
                raise ConfigurationError(f"mixing F_{self.p} and F_{o.p}")
            return o.v
        if isinstance(o, int):
            return o
        if isinstance(o, Fraction):
            return o.numerator * pow(o.denominator, -1, self.p)
        return None

    def __add__(self, o):
        w = self._other(o)
        if w is None:
            return NotImplemented
        return FpElem(self.v + w, self.p)

    __radd__ = __add__

    def __sub__(self, o):
        w = self._other(o)
        if w is None:
            return NotImplemented
        return FpElem(self.v - w, self.p)

    def __rsub__(self, o):
        w = self._other(o)
        if w is None:
            return NotImplemented
        return FpElem(w - self.v, self.p)

    def __mul__(self, o):
        w = self._other(o)
        if w is None:
            return NotImplemented
        return FpElem(self.v * w, self.p)

    __rmul__ = __mul__

    def __truediv__(self, o):
        w = self._other(o)
        if w is None:
            return NotImplemented
        if w % self.p == 0:
            raise ZeroDivisionError("division by zero in F_p")
        return FpElem(self.v * pow(w, -1, self.p), self.p)

    def __rtruediv__(self, o):
        w = self._other(o)
        if w is None:
            return NotImplemented
        if self.v == 0:
            raise ZeroDivisionError("division by zero in F_p")
        return FpElem(w * pow(self.v, -1, self.p), self.p)

    def __neg__(self):
        return FpElem(-self.v, self.p)

    def __pos__(self):
        return self

    def __bool__(self):
        return self.v != 0

    def __eq__(self, o):
        w = self._other(o)
        if w is None:
            return NotImplemented
        return (self.v - w) % self.p == 0

    def __hash__(self):
        return hash((self.v, self.p))

    def __repr__(self):
        return f"{self.v} mod {self.p}"


class GroundField:
    """The coefficient field K: either the rationals or F_p."""

    def __init__(self, p: int = 0):
        if p and not is_prime(p):
            raise ConfigurationError(f"{p} is not prime")
        self.p = p
        self.zero = FpElem(0, p) if p else Fraction(0)
        self.one = FpElem(1, p) if p else Fraction(1)

    @property
    def name(self) -> str:
        return f"Fp:{self.p}" if self.p else "Q"

    @classmethod
    def parse(cls, text: str) -> "GroundField":
        text = text.strip()
        if text in ("Q", "QQ"):
            return QQ
        m = re.fullmatch(r"(?:Fp:|F|GF)(\d+)", text)
        if m:
            return GF(int(m.group(1)))
        raise ConfigurationError(f"unknown field {text!r} (expected Q or Fp:p)")

    def __call__(self, value):
        if self.p:
            if isinstance(value, FpElem):
                if value.p != self.p:
                    raise ConfigurationError(f"mixing F_{self.p} and F_{value.p}")
                return value
            q = parse_rational(value)
            if q.denominator % self.p == 0:
                raise ConfigurationError(f"{value!r} has no image in F_{self.p}")
            return FpElem(q.numerator * pow(q.denominator, -1, self.p), self.p)
        if isinstance(value, FpElem):
            raise ConfigurationError("F_p residue used where a rational is expected")
        return parse_rational(value)

    def format(self, c) -> str:
        if self.p:
            return str(c.v)
        return format_rational(c)

    def __eq__(self, other):
        return isinstance(other, GroundField) and other.p == self.p

    def __hash__(self):
        return hash(("GroundField", self.p))

    def __repr__(self):
        return f"GroundField({self.name})"


QQ = GroundField(0)
_GF_CACHE: dict[int, GroundField] = {}


def GF(p: int) -> GroundField:
    if p not in _GF_CACHE:
        _GF_CACHE[p] = GroundField(p)
    return _GF_CACHE[p]


# --------------------------------------------------------------------------
# Real quadratic numbers


class _Infinity:
    """Signed infinity, ordered against every :class:`QuadReal`."""

    __slots__ = ("sign",)

    def __init__(self, sign: int):
        self.sign = sign

    def __neg__(self):
        return NEG_INF if self.sign > 0 else INF

    def __add__(self, o):
        if isinstance(o, _Infinity) and o.sign != self.sign:
            raise ArithmeticError("inf - inf")
        return self

    __radd__ = __add__

    def __sub__(self, o):
        if isinstance(o, _Infinity) and o.sign == self.sign:
            raise ArithmeticError("inf - inf")
        return self

    def __rsub__(self, o):
        if isinstance(o, _Infinity) and o.sign == self.sign:
            raise ArithmeticError("inf - inf")
        return -self

    def __eq__(self, o):
        return isinstance(o, _Infinity) and o.sign == self.sign

    def __hash__(self):
        return hash(("inf", self.sign))

    def __lt__(self, o):
        if isinstance(o, _Infinity):
            return self.sign < o.sign
        return self.sign < 0

    def __le__(self, o):
        return self == o or self < o

    def __gt__(self, o):
        if isinstance(o, _Infinity):
            return self.sign > o.sign
        return self.sign > 0

    def __ge__(self, o):
        return self == o or self > o

    def __repr__(self):
        return "inf" if self.sign > 0 else "-inf"

    __str__ = __repr__


INF = _Infinity(1)
NEG_INF = _Infinity(-1)

_QUAD_RE = re.compile(
    r"""^\s*(?P<a>[+-]?\d+(?:/\d+)?)?\s*
        (?:(?P<sgn>[+-])?\s*(?:(?P<b>\d+(?:/\d+)?)\s*\*?\s*)?sqrt\(?(?P<d>\d+)\)?)?\s*$""",
    re.X,
)


@total_ordering
class QuadReal:
    """The real number ``q0 + q1*sqrt(d)``.

    Pure rationals (``q1 == 0``) carry ``d = 0`` and combine with numbers
    of any discriminant; two irrational operands must share ``d``.
    """

    __slots__ = ("q0", "q1", "d")

    def __init__(self, q0=0, q1=0, d: int = 0):
        q0 = q0 if type(q0) is Fraction else Fraction(q0)
        q1 = q1 if type(q1) is Fraction else Fraction(q1)
        if d < 0:
            raise ConfigurationError(f"sqrt({d}) is not real")
        if d > 1 and q1 and not is_squarefree(d):
            s, d = _square_part(d)
            q1 *= s
        if d == 1:
            q0 += q1
            q1 = Fraction(0)
        if d == 0 or q1 == 0:
            q1 = Fraction(0)
            d = 0
        self.q0 = q0
        self.q1 = q1
        self.d = d

    @classmethod
    def _raw(cls, q0: Fraction, q1: Fraction, d: int) -> "QuadReal":
        obj = object.__new__(cls)
        if not q1:
            d = 0
        obj.q0 = q0
        obj.q1 = q1
        obj.d = d
        return obj

    # -- helpers
    def _d_with(self, o: "QuadReal") -> int:
        if self.d == o.d or not o.d:
            return self.d
        if not self.d:
            return o.d
        raise ConfigurationError(f"mixing sqrt({self.d}) and sqrt({o.d})")

    @staticmethod
    def _lift(o) -> "QuadReal | None":
        if isinstance(o, QuadReal):
            return o
        if isinstance(o, (int, Fraction)):
            return QuadReal._raw(Fraction(o), Fraction(0), 0)
        return None

    @property
    def is_rational(self) -> bool:
        return not self.q1

    def sign(self) -> int:
        a, b = self.q0, self.q1
        if not b:
            return _sign_fraction(a)
        sa, sb = _sign_fraction(a), _sign_fraction(b)
        if sa == 0:
            return sb
        if sa == sb:
            return sa
        # opposite signs: compare a^2 with b^2 d
        lhs, rhs = a * a, b * b * self.d
        if lhs > rhs:
            return sa
        return sb

    # -- arithmetic
    def __add__(self, o):
        if type(o) is not QuadReal:
            if isinstance(o, _Infinity):
                return o
            o = self._lift(o)
            if o is None:
                return NotImplemented
        if not o.q1 and not self.q1:
            return QuadReal._raw(self.q0 + o.q0, Fraction(0), 0)
        d = self._d_with(o)
        return QuadReal._raw(self.q0 + o.q0, self.q1 + o.q1, d)

    __radd__ = __add__

    def __neg__(self):
        return QuadReal._raw(-self.q0, -self.q1, self.d)

    def __sub__(self, o):
        if type(o) is not QuadReal:
            if isinstance(o, _Infinity):
                return -o
            o = self._lift(o)
            if o is None:
                return NotImplemented
        if not o.q1 and not self.q1:
            return QuadReal._raw(self.q0 - o.q0, Fraction(0), 0)
        d = self._d_with(o)
        return QuadReal._raw(self.q0 - o.q0, self.q1 - o.q1, d)

    def __rsub__(self, o):
        if isinstance(o, _Infinity):
            return o
        o = self._lift(o)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, o):
        o = self._lift(o)
        if o is None:
            return NotImplemented
        d = self._d_with(o)
        a, b, c, e = self.q0, self.q1, o.q0, o.q1
        return QuadReal._raw(a * c + b * e * d, a * e + b * c, d)

    __rmul__ = __mul__

    def __truediv__(self, o):
        o = self._lift(o)
        if o is None:
            return NotImplemented
        if not o.q1:
            if not o.q0:
                raise ZeroDivisionError("QuadReal division by zero")
            return QuadReal._raw(self.q0 / o.q0, self.q1 / o.q0, self.d)
        d = self._d_with(o)
        c, e = o.q0, o.q1
        norm = c * c - e * e * d
        a, b = self.q0, self.q1
        return QuadReal._raw((a * c - b * e * d) / norm, (b * c - a * e) / norm, d)

    def __abs__(self):
        return -self if self.sign() < 0 else self

    # -- order
    def __eq__(self, o):
        if type(o) is QuadReal:
            return self.q0 == o.q0 and self.q1 == o.q1 and (not self.q1 or self.d == o.d)
        if isinstance(o, _Infinity):
            return False
        o = self._lift(o)
        if o is None:
            return NotImplemented
        return self.q0 == o.q0 and self.q1 == o.q1

    def __hash__(self):
        if not self.q1:
            return hash(self.q0)
        return hash((self.q0, self.q1, self.d))

    def __lt__(self, o):
        if type(o) is QuadReal:
            if not self.q1 and not o.q1:
                return self.q0 < o.q0
            return (self - o).sign() < 0
        if isinstance(o, _Infinity):
            return o.sign > 0
        o = self._lift(o)
        if o is None:
            return NotImplemented
        return (self - o).sign() < 0

    def __gt__(self, o):
        if type(o) is QuadReal:
            if not self.q1 and not o.q1:
                return self.q0 > o.q0
            return (self - o).sign() > 0
        if isinstance(o, _Infinity):
            return o.sign < 0
        o = self._lift(o)
        if o is None:
            return NotImplemented
        return (self - o).sign() > 0

    def __le__(self, o):
        return not self.__gt__(o)

    def __ge__(self, o):
        return not self.__lt__(o)

    def __bool__(self):
        return bool(self.q0) or bool(self.q1)

    # -- rounding
    def floor(self) -> int:
        if not self.q1:
            return math.floor(self.q0)
        b = self.q1
        n2 = b.numerator * b.numerator * self.d
        r = math.isqrt(n2)  # floor(|b| sqrt d) * den <= ...
        low = Fraction(r, b.denominator)
        if b < 0:
            low = -Fraction(r + 1, b.denominator)
        est = math.floor(self.q0 + low)
        while QuadReal(est) > self:
            est -= 1
        while QuadReal(est + 1) <= self:
            est += 1
        return est

    def ceil(self) -> int:
        return -((-self).floor())

    def __float__(self):
        return float(self.q0) + float(self.q1) * math.sqrt(self.d)

    # -- text
    def __str__(self):
        if not self.q1:
            return format_rational(self.q0)
        b = self.q1
        tail = f"sqrt({self.d})" if abs(b) == 1 else f"{format_rational(abs(b))}*sqrt({self.d})"
        if not self.q0:
            return ("-" if b < 0 else "") + tail
        return f"{format_rational(self.q0)}{'-' if b < 0 else '+'}{tail}"

    def __repr__(self):
        return f"QuadReal({self})"

    @classmethod
    def parse(cls, text, d: int | None = None) -> "QuadReal":
        """Read ``"3/2"``, ``"1-2*sqrt(2)"``, ``["p/q", "r/s"]`` or a number.

        The pair form needs the session discriminant ``d``.
        """
        if isinstance(text, QuadReal):
            return text
        if isinstance(text, (int, Fraction)):
            return cls(text)
        if isinstance(text, (list, tuple)):
            if len(text) != 2:
                raise ValueError(f"QuadReal pair must have two entries: {text!r}")
            q1 = parse_rational(text[1])
            if q1 and not d:
                raise ConfigurationError("irrational part given without a discriminant d")
            return cls(parse_rational(text[0]), q1, d or 0)
        if not isinstance(text, str):
            raise TypeError(f"cannot read a QuadReal from {text!r}")
        m = _QUAD_RE.match(text)
        if not m or (m.group("a") is None and m.group("d") is None):
            raise ValueError(f"malformed quadratic number {text!r}")
        a = Fraction(m.group("a")) if m.group("a") else Fraction(0)
        if m.group("d") is None:
            return cls(a)
        dd = int(m.group("d"))
        if d is not None and d not in (0, dd) and dd not in (0, 1):
            raise ConfigurationError(f"sqrt({dd}) in a session with d={d}")
        b = Fraction(m.group("b")) if m.group("b") else Fraction(1)
        if m.group("sgn") == "-":
            b = -b
        if m.group("a") is None and m.group("sgn") is None and text.strip().startswith("-"):
            b = -b
        if not is_squarefree(dd):
            raise ConfigurationError(f"discriminant {dd} is not squarefree")
        return cls(a, b, dd)

    def to_pair(self) -> list[str]:
        return [format_rational(self.q0), format_rational(self.q1)]


ZERO = QuadReal(0)


def quad_compare(u: QuadReal, v: QuadReal) -> Ordering:
    """Exact three-way comparison.  Mixing discriminants raises."""
    if u.q1 and v.q1 and u.d != v.d:
        raise ConfigurationError(f"mixing sqrt({u.d}) and sqrt({v.d})")
    s = (u - v).sign()
    return Ordering(s)


# --------------------------------------------------------------------------
# Value groups


def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def _hnf_2col(rows: list[tuple[int, int]]) -> list[tuple[int, int]]:
    """Row Hermite normal form of an integer n x 2 matrix (nonzero rows only)."""
    rows = [r for r in rows if r != (0, 0)]
    first = [r for r in rows if r[0] != 0]
    rest = [r for r in rows if r[0] == 0]
    basis: list[tuple[int, int]] = []
    if first:
        piv = first[0]
        for r in first[1:]:
            g, s, t = _ext_gcd(piv[0], r[0])
            new_piv = (s * piv[0] + t * r[0], s * piv[1] + t * r[1])
            a, b = piv[0] // g, r[0] // g
            rest.append((0, b * piv[1] - a * r[1]))
            piv = new_piv
        if piv[0] < 0:
            piv = (-piv[0], -piv[1])
        basis.append(piv)
    h22 = 0
    for r in rest:
        h22 = math.gcd(h22, r[1])
    if h22:
        if basis:
            h11, h12 = basis[0]
            basis[0] = (h11, h12 % h22)
        basis.append((0, h22))
    return basis


class ValueGroup:
    """A finitely generated subgroup of the real line inside Q(sqrt(d)).

    Internally each element ``q0 + q1*sqrt(d)`` is the vector ``(q0, q1)``
    and the group is a lattice in Q^2 kept in Hermite normal form.
    """

    def __init__(self, generators: Iterable = (), d: int = 0):
        if not is_squarefree(d):
            raise ConfigurationError(f"discriminant {d} is not squarefree")
        gens = [QuadReal.parse(g, d) for g in generators]
        for g in gens:
            if not g:
                raise ConfigurationError("value group generators must be nonzero")
            if g.q1 and g.d != d:
                raise ConfigurationError(f"generator {g} does not live in Q(sqrt({d}))")
        if d == 1:
            d = 0
        self.d = d
        self.generators = tuple(gens)
        den = 1
        for g in gens:
            den = den * g.q0.denominator // math.gcd(den, g.q0.denominator)
            den = den * g.q1.denominator // math.gcd(den, g.q1.denominator)
        self._den = den
        rows = [(int(g.q0 * den), int(g.q1 * den)) for g in gens]
        self._basis = _hnf_2col(rows)
        self.rank = len(self._basis)
        if self.rank == 0:
            self.kind = "trivial"
        elif self.rank == 1:
            self.kind = "discrete"
        else:
            self.kind = "dense"
        self.unit: QuadReal | None = None
        if self.rank == 1:
            h1, h2 = self._basis[0]
            u = QuadReal(Fraction(h1, den), Fraction(h2, den), d)
            self.unit = u if u > 0 else -u

    # -- constructors
    @classmethod
    def trivial(cls) -> "ValueGroup":
        return cls((), 0)

    @classmethod
    def parse(cls, spec: str) -> "ValueGroup":
        """Parse ``trivial``, ``discrete:g`` or ``quad:d:g1,g2``."""
        spec = spec.strip()
        if spec in ("trivial", "0", "{0}"):
            return cls.trivial()
        if spec.startswith("discrete:"):
            g = QuadReal.parse(spec[len("discrete:"):])
            return cls([g], g.d)
        if spec.startswith("quad:"):
            parts = spec.split(":", 2)
            if len(parts) != 3:
                raise ConfigurationError(f"malformed value group {spec!r}")
            d = int(parts[1])
            gens = [QuadReal.parse(s, d) for s in parts[2].split(",") if s.strip()]
            return cls(gens, d)
        raise ConfigurationError(f"unknown value group {spec!r}")

    def to_dict(self) -> dict:
        return {"d": self.d, "generators": [g.to_pair() for g in self.generators]}

    @classmethod
    def from_dict(cls, data: dict) -> "ValueGroup":
        d = int(data.get("d", 0))
        return cls([QuadReal.parse(g, d) for g in data.get("generators", [])], d)

    # -- queries
    def _coords(self, g: QuadReal) -> tuple[Fraction, Fraction] | None:
        if g.q1 and g.d != self.d:
            return None
        return g.q0 * self._den, g.q1 * self._den

    def contains(self, g) -> bool:
        g = QuadReal.parse(g, self.d or None) if not isinstance(g, QuadReal) else g
        c = self._coords(g)
        if c is None:
            return False
        x, y = c
        if x.denominator != 1 or y.denominator != 1:
            return False
        x, y = int(x), int(y)
        if self.rank == 0:
            return x == 0 and y == 0
        h11, h12 = self._basis[0]
        if h11 == 0:  # rank one, purely irrational generator
            return x == 0 and y % h12 == 0 if h12 else False
        if x % h11:
            return False
        k = x // h11
        y -= k * h12
        if self.rank == 2:
            return y % self._basis[1][1] == 0
        return y == 0

    __contains__ = contains

    def lattice_coords(self, g: QuadReal) -> tuple[int, ...]:
        """Integer coordinates of a member along the Hermite basis."""
        x, y = self._coords(g)
        x, y = int(x), int(y)
        if self.rank == 0:
            return ()
        h11, h12 = self._basis[0]
        if self.rank == 1:
            return (x // h11,) if h11 else (y // h12,)
        k = x // h11
        return (k, (y - k * h12) // self._basis[1][1])

    def basis_elements(self) -> tuple[QuadReal, ...]:
        return tuple(QuadReal(Fraction(a, self._den), Fraction(b, self._den), self.d) for a, b in self._basis)

    def coset_key(self, a: QuadReal) -> QuadReal:
        """Canonical element of ``a + Gamma`` (reduction in lattice coordinates)."""
        if self.rank == 0:
            return a
        if self.rank == 1:
            u = self.unit
            return a - u * (a / u).floor()
        x, y = a.q0 * self._den, a.q1 * self._den
        (h11, h12), (_, h22) = self._basis
        k = math.floor(x / h11)
        x -= k * h11
        y -= k * h12
        y -= math.floor(y / h22) * h22
        return QuadReal(x / self._den, y / self._den, self.d)

    def same_coset(self, a: QuadReal, b: QuadReal) -> bool:
        return self.contains(a - b)

    def is_subgroup_of(self, other: "ValueGroup") -> bool:
        return all(other.contains(g) for g in self.generators)

    def __eq__(self, other):
        if not isinstance(other, ValueGroup):
            return NotImplemented
        return self.is_subgroup_of(other) and other.is_subgroup_of(self)

    def __hash__(self):
        return hash((self.rank, self.d if self.rank == 2 else 0))

    def __repr__(self):
        if self.rank == 0:
            return "ValueGroup(trivial)"
        gens = ", ".join(str(g) for g in self.generators)
        return f"ValueGroup(<{gens}>, {self.kind})"

    def spec(self) -> str:
        if self.rank == 0:
            return "trivial"
        if self.rank == 1 and len(self.generators) == 1:
            return f"discrete:{self.generators[0]}"
        return f"quad:{self.d}:" + ",".join(str(g) for g in self.generators)


def lattice_membership(G: ValueGroup, g: QuadReal) -> bool:
    return G.contains(g)


def canonical_rep(G: ValueGroup, a: QuadReal) -> tuple[QuadReal, bool]:
    """Coset representative for output: reduced into [0, g) for discrete groups."""
    if G.kind == "dense":
        return a, False
    return G.coset_key(a), True
