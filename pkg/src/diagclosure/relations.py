"""Relations, partitions, and symbolic partition specifications.

The finite side works with bit-matrix relations and explicit partitions of
``{0..n-1}``.  The symbolic side describes an equivalence relation on a
countably infinite ground set by its block profile: how many singleton
blocks, which finite block sizes (an explicit list, or an infinite family
whose sizes repeat cyclically), and how many infinite blocks.  Points of
the symbolic ground set are addressed by (class, block, element) triples,
and ``omega`` stands for countable infinity throughout.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import IntEnum
from typing import Iterable, Iterator, NamedTuple

from .errors import (
    GroundSetFiniteError,
    InvalidAddressError,
    NotEquivalenceError,
    SpecSyntaxError,
)

__all__ = [
    "OMEGA",
    "BlockClass",
    "BlockRef",
    "Count",
    "FiniteBlocks",
    "FinitePartition",
    "FiniteRelation",
    "PartitionSpec",
    "PointAddr",
    "all_partitions",
    "eq_of_partition",
    "is_t1_realisable",
    "parse_point",
    "parse_spec",
    "partition_of_eq",
    "same_block",
]


class Count:
    """A natural number or omega (countably infinite).

    Arithmetic follows cardinal rules at this scale: finite + finite is
    finite, anything + omega is omega.  Comparisons treat omega as larger
    than every natural number.
    """

    __slots__ = ("value",)

    def __init__(self, value: int | None = None):
        if value is not None and (not isinstance(value, int) or isinstance(value, bool) or value < 0):
            raise ValueError(f"count must be a natural number or None for omega: {value!r}")
        self.value = value

    @property
    def is_omega(self) -> bool:
        return self.value is None

    @property
    def is_finite(self) -> bool:
        return self.value is not None

    def finite(self) -> int:
        """The finite value; raises if this count is omega."""
        if self.value is None:
            raise ValueError("count is omega")
        return self.value

    @staticmethod
    def parse(text: str) -> "Count":
        if text == "omega":
            return OMEGA
        if not text.isdigit():
            raise SpecSyntaxError(f"bad count (expected a natural number or 'omega'): {text!r}")
        return Count(int(text))

    @staticmethod
    def _value_of(other) -> "int | None | type(NotImplemented)":
        if isinstance(other, Count):
            return other.value
        if isinstance(other, int) and not isinstance(other, bool):
            return other
        return NotImplemented

    def __add__(self, other):
        v = self._value_of(other)
        if v is NotImplemented:
            return NotImplemented
        if self.value is None or v is None:
            return OMEGA
        return Count(self.value + v)

    __radd__ = __add__

    def __eq__(self, other):
        v = self._value_of(other)
        if v is NotImplemented:
            return NotImplemented
        return self.value == v

    def __lt__(self, other):
        v = self._value_of(other)
        if v is NotImplemented:
            return NotImplemented
        if self.value is None:
            return False
        if v is None:
            return True
        return self.value < v

    def __le__(self, other):
        eq = self.__eq__(other)
        lt = self.__lt__(other)
        if eq is NotImplemented or lt is NotImplemented:
            return NotImplemented
        return eq or lt

    def __gt__(self, other):
        le = self.__le__(other)
        return NotImplemented if le is NotImplemented else not le

    def __ge__(self, other):
        lt = self.__lt__(other)
        return NotImplemented if lt is NotImplemented else not lt

    def __hash__(self):
        return hash(self.value)

    def __str__(self):
        return "omega" if self.value is None else str(self.value)

    def __repr__(self):
        return f"Count({self})"


OMEGA = Count(None)


class BlockClass(IntEnum):
    """The three block classes of a symbolic spec."""

    SINGLETON = 0
    FINITE = 1
    INFINITE = 2


_CLASS_PREFIX = {BlockClass.SINGLETON: "s", BlockClass.FINITE: "f", BlockClass.INFINITE: "i"}
_PREFIX_CLASS = {v: k for k, v in _CLASS_PREFIX.items()}


class BlockRef(NamedTuple):
    """Reference to one block of a partition spec."""

    cls: BlockClass
    index: int

    def render(self) -> str:
        return f"{_CLASS_PREFIX[self.cls]}:{self.index}"


class PointAddr(NamedTuple):
    """Canonical address of a point of the symbolic ground set.

    Singleton points always have ``elem == 0``; elements 0 and 1 of every
    non-singleton block are its canonical representatives.
    """

    cls: BlockClass
    block: int
    elem: int

    @property
    def block_ref(self) -> BlockRef:
        return BlockRef(self.cls, self.block)

    def render(self) -> str:
        if self.cls is BlockClass.SINGLETON:
            return f"s:{self.block}"
        return f"{_CLASS_PREFIX[self.cls]}:{self.block}:{self.elem}"


_POINT_RE = re.compile(r"^([sfi]):(\d+)(?::(\d+))?$")


def parse_point(text: str) -> PointAddr:
    """Parse ``s:<i>``, ``f:<j>:<k>``, or ``i:<j>:<k>`` into a PointAddr."""
    m = _POINT_RE.match(text.strip())
    if m is None:
        raise InvalidAddressError(f"bad point address: {text!r}")
    prefix, block, elem = m.group(1), m.group(2), m.group(3)
    cls = _PREFIX_CLASS[prefix]
    if cls is BlockClass.SINGLETON:
        if elem is not None:
            raise InvalidAddressError(f"singleton addresses take one index: {text!r}")
        return PointAddr(cls, int(block), 0)
    if elem is None:
        raise InvalidAddressError(f"{prefix}-addresses take two indices: {text!r}")
    return PointAddr(cls, int(block), int(elem))


@dataclass(frozen=True)
class FiniteBlocks:
    """The finite-block part of a spec: explicit sizes, or a cyclic family.

    ``cyclic=True`` means countably many finite blocks whose sizes repeat
    the given list cyclically; block ``j`` then has size ``sizes[j % len]``.
    """

    sizes: tuple[int, ...] = ()
    cyclic: bool = False

    def __post_init__(self):
        object.__setattr__(self, "sizes", tuple(self.sizes))
        for s in self.sizes:
            if not isinstance(s, int) or s < 2:
                raise SpecSyntaxError(f"finite block sizes must be naturals >= 2: {s!r}")
        if self.cyclic and not self.sizes:
            raise SpecSyntaxError("a cyclic finite-block family needs at least one size")

    @property
    def is_empty(self) -> bool:
        return not self.cyclic and not self.sizes

    @property
    def count(self) -> Count:
        return OMEGA if self.cyclic else Count(len(self.sizes))

    def size_of(self, j: int) -> int:
        if self.cyclic:
            return self.sizes[j % len(self.sizes)]
        return self.sizes[j]

    def render(self) -> str:
        body = ",".join(str(s) for s in self.sizes)
        return f"cycle[{body}]" if self.cyclic else f"[{body}]"


@dataclass(frozen=True)
class PartitionSpec:
    """Symbolic block profile of an equivalence relation on a countable set.

    Rejected at construction when the described ground set is finite (in
    particular when there are no blocks at all).
    """

    singletons: Count
    fin: FiniteBlocks
    inf: Count

    def __post_init__(self):
        if not (self.singletons.is_omega or self.fin.cyclic or self.inf >= 1):
            raise GroundSetFiniteError(f"spec describes a finite ground set: {self.render()}")

    @property
    def part_count(self) -> Count:
        """Number of blocks."""
        return self.singletons + self.fin.count + self.inf

    @property
    def is_part_finite(self) -> bool:
        return self.part_count.is_finite

    @property
    def has_finite_gt1_block(self) -> bool:
        return not self.fin.is_empty

    def valid_addr(self, a: PointAddr) -> bool:
        if not isinstance(a, PointAddr) or a.block < 0 or a.elem < 0:
            return False
        if a.cls is BlockClass.SINGLETON:
            return a.elem == 0 and a.block < self.singletons
        if a.cls is BlockClass.FINITE:
            if self.fin.is_empty:
                return False
            if not self.fin.cyclic and a.block >= len(self.fin.sizes):
                return False
            return a.elem < self.fin.size_of(a.block)
        return a.block < self.inf

    def check_addr(self, a: PointAddr) -> PointAddr:
        if not self.valid_addr(a):
            raise InvalidAddressError(f"no such point for {self.render()}: {a!r}")
        return a

    def block_size(self, ref: BlockRef) -> Count:
        """Number of elements of one block."""
        if ref.cls is BlockClass.SINGLETON:
            return Count(1)
        if ref.cls is BlockClass.FINITE:
            return Count(self.fin.size_of(ref.index))
        return OMEGA

    def render(self) -> str:
        return f"singletons={self.singletons};fin={self.fin.render()};inf={self.inf}"


def _parse_finspec(text: str) -> FiniteBlocks:
    cyclic = False
    body = text
    if body.startswith("cycle["):
        cyclic = True
        if not body.endswith("]"):
            raise SpecSyntaxError(f"bad finite-block clause: {text!r}")
        body = body[len("cycle[") : -1]
        if not body:
            raise SpecSyntaxError("cycle[...] needs at least one size")
    elif body.startswith("[") and body.endswith("]"):
        body = body[1:-1]
    else:
        raise SpecSyntaxError(f"bad finite-block clause: {text!r}")
    if not body.strip():
        return FiniteBlocks((), cyclic)
    sizes = []
    for item in body.split(","):
        item = item.strip()
        if not item.isdigit():
            raise SpecSyntaxError(f"bad finite block size: {item!r}")
        n = int(item)
        if n < 2:
            raise SpecSyntaxError(f"finite block sizes must be >= 2: {n}")
        sizes.append(n)
    return FiniteBlocks(tuple(sizes), cyclic)


def parse_spec(text: str) -> PartitionSpec:
    """Parse ``singletons=<count>;fin=<finspec>;inf=<count>`` (any clause order)."""
    parts = text.split(";")
    if len(parts) != 3:
        raise SpecSyntaxError(f"expected exactly three ';'-separated clauses: {text!r}")
    seen: dict[str, str] = {}
    for raw in parts:
        key, sep, val = raw.strip().partition("=")
        key = key.strip()
        if not sep or key not in ("singletons", "fin", "inf"):
            raise SpecSyntaxError(f"bad clause: {raw.strip()!r}")
        if key in seen:
            raise SpecSyntaxError(f"duplicate clause: {key!r}")
        seen[key] = val.strip()
    return PartitionSpec(
        singletons=Count.parse(seen["singletons"]),
        fin=_parse_finspec(seen["fin"]),
        inf=Count.parse(seen["inf"]),
    )


def same_block(spec: PartitionSpec, p: PointAddr, q: PointAddr) -> bool:
    """Symbolic membership test for the relation: same class and block index."""
    spec.check_addr(p)
    spec.check_addr(q)
    return p.cls is q.cls and p.block == q.block


def is_t1_realisable(spec: PartitionSpec) -> bool:
    """Decide realisability as a diagonal closure under a T1 topology.

    False exactly when the spec has finitely many blocks and at least one
    finite block with more than one element; true otherwise.
    """
    return not (spec.is_part_finite and spec.has_finite_gt1_block)


class FiniteRelation:
    """Binary relation on ``{0..n-1}`` stored as bitmask rows."""

    __slots__ = ("n", "rows")

    def __init__(self, n: int, rows: Iterable[int]):
        rows = tuple(rows)
        if len(rows) != n:
            raise ValueError(f"expected {n} rows, got {len(rows)}")
        full = (1 << n) - 1
        if any(r & ~full for r in rows):
            raise ValueError("row bits outside the ground set")
        self.n = n
        self.rows = rows

    @classmethod
    def diagonal(cls, n: int) -> "FiniteRelation":
        return cls(n, (1 << i for i in range(n)))

    @classmethod
    def full(cls, n: int) -> "FiniteRelation":
        mask = (1 << n) - 1
        return cls(n, (mask for _ in range(n)))

    @classmethod
    def from_pairs(cls, n: int, pairs: Iterable[tuple[int, int]], include_diagonal: bool = True) -> "FiniteRelation":
        rows = [(1 << i) if include_diagonal else 0 for i in range(n)]
        for i, j in pairs:
            rows[i] |= 1 << j
        return cls(n, rows)

    def has(self, i: int, j: int) -> bool:
        return bool(self.rows[i] >> j & 1)

    def pairs(self) -> Iterator[tuple[int, int]]:
        for i in range(self.n):
            row = self.rows[i]
            for j in range(self.n):
                if row >> j & 1:
                    yield (i, j)

    def is_reflexive(self) -> bool:
        return all(self.rows[i] >> i & 1 for i in range(self.n))

    def is_symmetric(self) -> bool:
        return all(
            (self.rows[i] >> j & 1) == (self.rows[j] >> i & 1)
            for i in range(self.n)
            for j in range(i + 1, self.n)
        )

    def is_transitive(self) -> bool:
        for i in range(self.n):
            row = self.rows[i]
            for j in range(self.n):
                if row >> j & 1 and self.rows[j] & ~row:
                    return False
        return True

    def is_equivalence(self) -> bool:
        return self.is_reflexive() and self.is_symmetric() and self.is_transitive()

    def issubset(self, other: "FiniteRelation") -> bool:
        return self.n == other.n and all(a & ~b == 0 for a, b in zip(self.rows, other.rows))

    def __eq__(self, other):
        return isinstance(other, FiniteRelation) and self.n == other.n and self.rows == other.rows

    def __hash__(self):
        return hash((self.n, self.rows))

    def __repr__(self):
        off = sorted((i, j) for i, j in self.pairs() if i != j)
        return f"FiniteRelation(n={self.n}, off_diagonal={off})"


class FinitePartition:
    """Partition of ``{0..n-1}`` into disjoint nonempty blocks.

    Blocks are normalised to sorted tuples ordered by least element, so two
    partitions are equal exactly when they have the same blocks.
    """

    __slots__ = ("n", "blocks", "block_of")

    def __init__(self, n: int, blocks: Iterable[Iterable[int]]):
        canon = sorted(tuple(sorted(b)) for b in blocks)
        block_of = [-1] * n
        for bi, block in enumerate(canon):
            if not block:
                raise ValueError("empty block")
            for x in block:
                if not 0 <= x < n or block_of[x] != -1:
                    raise ValueError(f"blocks must partition 0..{n - 1}")
                block_of[x] = bi
        if any(b == -1 for b in block_of):
            raise ValueError("blocks must cover the ground set")
        self.n = n
        self.blocks = tuple(canon)
        self.block_of = tuple(block_of)

    def __eq__(self, other):
        return isinstance(other, FinitePartition) and self.n == other.n and self.blocks == other.blocks

    def __hash__(self):
        return hash((self.n, self.blocks))

    def __repr__(self):
        return f"FinitePartition({self.n}, {list(map(list, self.blocks))})"


def eq_of_partition(p: FinitePartition) -> FiniteRelation:
    """The equivalence relation whose classes are the blocks of ``p``."""
    masks = []
    for block in p.blocks:
        m = 0
        for x in block:
            m |= 1 << x
        masks.append(m)
    return FiniteRelation(p.n, (masks[p.block_of[i]] for i in range(p.n)))


def partition_of_eq(r: FiniteRelation) -> FinitePartition:
    """Blocks of an equivalence relation; inverse of :func:`eq_of_partition`."""
    if not r.is_equivalence():
        raise NotEquivalenceError("relation is not an equivalence (reflexive, symmetric, transitive)")
    seen: dict[int, list[int]] = {}
    for i in range(r.n):
        seen.setdefault(r.rows[i], []).append(i)
    return FinitePartition(r.n, seen.values())


def all_partitions(n: int) -> Iterator[FinitePartition]:
    """All set partitions of ``{0..n-1}``, in restricted-growth order."""

    def rec(i: int, blocks: list[list[int]]) -> Iterator[FinitePartition]:
        if i == n:
            yield FinitePartition(n, [list(b) for b in blocks])
            return
        for b in blocks:
            b.append(i)
            yield from rec(i + 1, blocks)
            b.pop()
        blocks.append([i])
        yield from rec(i + 1, blocks)
        blocks.pop()

    if n == 0:
        yield FinitePartition(0, [])
        return
    yield from rec(0, [])
