"""Decidable representations of the infinite sets used by the constructions.

Everything here is exact: finite/cofinite subsets of designated countable
index families, residue-class subsets of the naturals, rational balls with
finitely many excluded points, and a fixed bijection between the naturals
and (natural, rational) pairs.  Rationals are ``fractions.Fraction`` values
(unbounded integers, always reduced); the alias :data:`Rational` names that
choice in signatures.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import NamedTuple

from .errors import NotInImageError

__all__ = [
    "CofiniteSubset",
    "Rational",
    "RationalBall",
    "ResidueClassSet",
    "ball_disjoint",
    "ball_member",
    "cantor_pair",
    "cantor_unpair",
    "cof_disjoint",
    "cof_intersect",
    "cof_member",
    "format_rational",
    "pair_decode",
    "pair_encode",
    "parse_rational",
    "rational_at",
    "rational_index",
    "residues_disjoint",
]

Rational = Fraction


def format_rational(q: Fraction) -> str:
    """Render as ``p/q`` with the denominator always shown."""
    return f"{q.numerator}/{q.denominator}"


def parse_rational(text: str) -> Fraction:
    return Fraction(text)


class CofiniteSubset:
    """A finite or cofinite subset of a designated countable index family.

    ``domain`` is an opaque identifier naming the (infinite) family; indices
    are naturals within it.  In cofinite mode the represented set is always
    infinite.
    """

    __slots__ = ("domain", "members", "excluded")

    def __init__(self, domain, members=None, excluded=None):
        if (members is None) == (excluded is None):
            raise ValueError("exactly one of members/excluded must be given")
        self.domain = domain
        self.members = None if members is None else frozenset(members)
        self.excluded = None if excluded is None else frozenset(excluded)

    @classmethod
    def finite(cls, domain, members) -> "CofiniteSubset":
        return cls(domain, members=members)

    @classmethod
    def cofinite(cls, domain, excluded=()) -> "CofiniteSubset":
        return cls(domain, excluded=excluded)

    @property
    def is_cofinite(self) -> bool:
        return self.excluded is not None

    def __eq__(self, other):
        return (
            isinstance(other, CofiniteSubset)
            and self.domain == other.domain
            and self.members == other.members
            and self.excluded == other.excluded
        )

    def __hash__(self):
        return hash((self.domain, self.members, self.excluded))

    def __repr__(self):
        if self.is_cofinite:
            return f"CofiniteSubset.cofinite({self.domain!r}, {sorted(self.excluded)})"
        return f"CofiniteSubset.finite({self.domain!r}, {sorted(self.members)})"


def cof_member(s: CofiniteSubset, i) -> bool:
    if s.is_cofinite:
        return i not in s.excluded
    return i in s.members


def cof_intersect(s1: CofiniteSubset, s2: CofiniteSubset) -> CofiniteSubset:
    """Exact intersection; both sets must live on the same domain."""
    if s1.domain != s2.domain:
        raise ValueError(f"domains differ: {s1.domain!r} vs {s2.domain!r}")
    if s1.is_cofinite and s2.is_cofinite:
        return CofiniteSubset.cofinite(s1.domain, s1.excluded | s2.excluded)
    if s1.is_cofinite:
        return CofiniteSubset.finite(s1.domain, s2.members - s1.excluded)
    if s2.is_cofinite:
        return CofiniteSubset.finite(s1.domain, s1.members - s2.excluded)
    return CofiniteSubset.finite(s1.domain, s1.members & s2.members)


def cof_disjoint(s1: CofiniteSubset, s2: CofiniteSubset) -> bool:
    """Exact disjointness; sets on different domains are trivially disjoint.

    Two cofinite-mode sets on one (infinite) domain always intersect.
    """
    if s1.domain != s2.domain:
        return True
    if s1.is_cofinite and s2.is_cofinite:
        return False
    inter = cof_intersect(s1, s2)
    return not inter.members


class ResidueClassSet(NamedTuple):
    """The arithmetic progression ``{offset + modulus*k : k natural}``."""

    offset: int
    modulus: int

    def contains(self, x: int) -> bool:
        return x >= self.offset and (x - self.offset) % self.modulus == 0

    def render(self) -> str:
        if self.offset == 0:
            return f"{{{self.modulus}n}}"
        return f"{{{self.modulus}n+{self.offset}}}"


def residues_disjoint(d1: ResidueClassSet, d2: ResidueClassSet) -> bool:
    """Whether two residue-class sets share no element.

    A common element exists iff the congruence system is solvable, i.e. the
    offsets agree modulo gcd of the moduli; solutions form an upward-infinite
    progression, so one always lies above both offsets.
    """
    if d1.modulus < 1 or d2.modulus < 1:
        raise ValueError("modulus must be >= 1")
    g = math.gcd(d1.modulus, d2.modulus)
    return (d1.offset - d2.offset) % g != 0


class RationalBall:
    """A cofinite subset of ``{x} x B_delta(center) x {0,1}``.

    ``B_delta(center)`` is the open rational interval of radius ``radius``
    around ``center``.  ``excluded`` is a finite set of (rational, level)
    pairs, all strictly inside the ball.  The represented set is always
    infinite.
    """

    __slots__ = ("x_index", "center", "radius", "excluded")

    def __init__(self, x_index: int, center: Fraction, radius: Fraction, excluded=()):
        center = Fraction(center)
        radius = Fraction(radius)
        if x_index < 0:
            raise ValueError("x_index must be a natural")
        if radius <= 0:
            raise ValueError("radius must be positive")
        excluded = frozenset((Fraction(q), int(level)) for q, level in excluded)
        for q, level in excluded:
            if level not in (0, 1):
                raise ValueError(f"level must be 0 or 1: {level}")
            if abs(q - center) >= radius:
                raise ValueError(f"excluded point outside the ball: {format_rational(q)}")
        self.x_index = x_index
        self.center = center
        self.radius = radius
        self.excluded = excluded

    def __eq__(self, other):
        return (
            isinstance(other, RationalBall)
            and (self.x_index, self.center, self.radius, self.excluded)
            == (other.x_index, other.center, other.radius, other.excluded)
        )

    def __hash__(self):
        return hash((self.x_index, self.center, self.radius, self.excluded))

    def render(self) -> str:
        excl = ",".join(f"({format_rational(q)},{level})" for q, level in sorted(self.excluded))
        return (
            f"ball(x={self.x_index},q={format_rational(self.center)},"
            f"d={format_rational(self.radius)},excl=[{excl}])"
        )

    __repr__ = render


def ball_member(b: RationalBall, point: tuple[int, Fraction, int]) -> bool:
    x, q, level = point
    return (
        x == b.x_index
        and abs(q - b.center) < b.radius
        and (q, level) not in b.excluded
    )


def ball_disjoint(b1: RationalBall, b2: RationalBall) -> bool:
    """Exact disjointness of two balls.

    Exclusions never matter: overlapping open rational intervals share
    infinitely many points while exclusion sets are finite.
    """
    if b1.x_index != b2.x_index:
        return True
    return abs(b1.center - b2.center) >= b1.radius + b2.radius


# --- fixed bijection between the naturals and (natural, rational) pairs ---

def cantor_pair(a: int, b: int) -> int:
    s = a + b
    return s * (s + 1) // 2 + b

def cantor_unpair(n: int) -> tuple[int, int]:
    w = (math.isqrt(8 * n + 1) - 1) // 2
    b = n - w * (w + 1) // 2
    return w - b, b


def _positive_rational_at(k: int) -> Fraction:
    # Node k+1 of the Calkin-Wilf tree in heap numbering: root 1/1,
    # left child a/(a+b), right child (a+b)/b.
    v = k + 1
    a, b = 1, 1
    for shift in range(v.bit_length() - 2, -1, -1):
        if v >> shift & 1:
            a = a + b
        else:
            b = a + b
    return Fraction(a, b)


def _positive_rational_index(q: Fraction) -> int:
    a, b = q.numerator, q.denominator
    if a <= 0:
        raise ValueError("positive rational required")
    bits = []
    while (a, b) != (1, 1):
        if a > b:
            bits.append(1)
            a -= b
        else:
            bits.append(0)
            b -= a
    v = 1
    for bit in reversed(bits):
        v = v << 1 | bit
    return v - 1


def rational_at(k: int) -> Fraction:
    """The k-th rational: 0 first, then positives and negatives interleaved."""
    if k == 0:
        return Fraction(0)
    t, sign = divmod(k - 1, 2)
    q = _positive_rational_at(t)
    return q if sign == 0 else -q


def rational_index(q: Fraction) -> int:
    """Position of a rational in the fixed enumeration; inverse of rational_at."""
    q = Fraction(q)
    if q == 0:
        return 0
    try:
        t = _positive_rational_index(abs(q))
    except ValueError as exc:  # unreachable for reduced rationals; reserved
        raise NotInImageError(str(exc)) from exc
    return 2 * t + 1 if q > 0 else 2 * t + 2


def pair_encode(n: int) -> tuple[int, Fraction]:
    """The fixed bijection from naturals to (natural, rational) pairs."""
    a, b = cantor_unpair(n)
    return a, rational_at(b)


def pair_decode(pair: tuple[int, Fraction]) -> int:
    a, q = pair
    return cantor_pair(a, rational_index(q))
