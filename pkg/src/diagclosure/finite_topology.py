"""Topologies on n labeled points and their diagonal closures.

Finite topologies correspond exactly to preorders: open sets are the
up-sets of the specialization preorder (an orientation fixed here and
pinned by tests), and the minimal open neighborhood of ``x`` is the up-set
of ``x``.  Subsets of the ground set are bitmasks throughout.
"""

from __future__ import annotations

from typing import Iterable, Iterator

from .errors import InvalidRepresentativeError, NotATopologyError, SpecSyntaxError
from .relations import FinitePartition, FiniteRelation

__all__ = [
    "FiniteTopology",
    "Preorder",
    "cl_delta",
    "cl_delta_open_family",
    "generate_from_subbasis",
    "is_t0",
    "is_t1",
    "is_t2",
    "minimal_neighborhoods",
    "parse_topology",
    "preorder_of_topology",
    "render_topology",
    "t0_saturation",
    "tau_r",
    "topology_of_preorder",
]


def _mask_points(mask: int) -> tuple[int, ...]:
    return tuple(i for i in range(mask.bit_length()) if mask >> i & 1)


def _render_mask(mask: int) -> str:
    if mask == 0:
        return "-"
    return ",".join(str(i) for i in _mask_points(mask))


class Preorder:
    """Reflexive transitive relation; ``rows[i]`` is the up-set of point i."""

    __slots__ = ("n", "rows")

    def __init__(self, n: int, rows: Iterable[int], validate: bool = True):
        rows = tuple(rows)
        self.n = n
        self.rows = rows
        if validate:
            full = (1 << n) - 1
            if len(rows) != n or any(r & ~full for r in rows):
                raise ValueError("bad row masks")
            for i in range(n):
                if not rows[i] >> i & 1:
                    raise ValueError(f"not reflexive at {i}")
                for j in range(n):
                    if rows[i] >> j & 1 and rows[j] & ~rows[i]:
                        raise ValueError(f"not transitive through {i} <= {j}")

    def leq(self, i: int, j: int) -> bool:
        return bool(self.rows[i] >> j & 1)

    def __eq__(self, other):
        return isinstance(other, Preorder) and self.n == other.n and self.rows == other.rows

    def __hash__(self):
        return hash((self.n, self.rows))

    def __repr__(self):
        return f"Preorder(n={self.n}, up={[ _mask_points(r) for r in self.rows ]})"


class FiniteTopology:
    """Family of open sets on ``{0..n-1}``, stored as a frozenset of bitmasks."""

    __slots__ = ("n", "opens")

    def __init__(self, n: int, opens: Iterable[int], validate: bool = True):
        opens = frozenset(opens)
        self.n = n
        self.opens = opens
        if validate:
            self.validate()

    def validate(self) -> None:
        full = (1 << self.n) - 1
        if any(o & ~full for o in self.opens):
            raise NotATopologyError("open set outside the ground set")
        if 0 not in self.opens:
            raise NotATopologyError("the empty set is not in the family")
        if full not in self.opens:
            raise NotATopologyError("the full set is not in the family")
        opens = sorted(self.opens)
        for a in opens:
            for b in opens:
                if a < b:
                    for op, res in (("union", a | b), ("intersection", a & b)):
                        if res not in self.opens:
                            raise NotATopologyError(
                                f"family not closed under {op}: "
                                f"{{{_render_mask(a)}}} and {{{_render_mask(b)}}} "
                                f"give {{{_render_mask(res)}}}",
                                witness=(_mask_points(a), _mask_points(b), op),
                            )

    def __eq__(self, other):
        return isinstance(other, FiniteTopology) and self.n == other.n and self.opens == other.opens

    def __hash__(self):
        return hash((self.n, self.opens))

    def __repr__(self):
        shown = sorted(self.opens, key=lambda m: (bin(m).count("1"), m))
        return f"FiniteTopology(n={self.n}, opens={[ _mask_points(m) for m in shown ]})"


def generate_from_subbasis(n: int, sets: Iterable[Iterable[int] | int]) -> FiniteTopology:
    """Smallest topology containing the given sets."""
    full = (1 << n) - 1
    masks = set()
    for s in sets:
        if isinstance(s, int):
            m = s
        else:
            m = 0
            for x in s:
                m |= 1 << x
        if m & ~full:
            raise ValueError("subbasis set outside the ground set")
        masks.add(m)
    # Close under pairwise intersection, then pairwise union; both reach a
    # fixpoint because there are at most 2^n candidate sets.
    family = set(masks) | {full}
    for op in ((lambda a, b: a & b), (lambda a, b: a | b)):
        changed = True
        while changed:
            changed = False
            items = sorted(family)
            for a in items:
                for b in items:
                    c = op(a, b)
                    if c not in family:
                        family.add(c)
                        changed = True
    family.add(0)
    return FiniteTopology(n, family, validate=False)


def topology_of_preorder(p: Preorder) -> FiniteTopology:
    """Opens are exactly the up-sets of the preorder."""
    rows = p.rows
    opens = []
    for mask in range(1 << p.n):
        m = mask
        ok = True
        while m:
            low = m & -m
            if rows[low.bit_length() - 1] & ~mask:
                ok = False
                break
            m ^= low
        if ok:
            opens.append(mask)
    return FiniteTopology(p.n, opens, validate=False)


def minimal_neighborhoods(t: FiniteTopology) -> list[int]:
    """Intersection of all opens containing each point (open on finite sets)."""
    full = (1 << t.n) - 1
    mins = [full] * t.n
    for o in t.opens:
        m = o
        while m:
            low = m & -m
            mins[low.bit_length() - 1] &= o
            m ^= low
    return mins


def preorder_of_topology(t: FiniteTopology) -> Preorder:
    return Preorder(t.n, minimal_neighborhoods(t), validate=False)


def cl_delta(t: FiniteTopology) -> FiniteRelation:
    """Diagonal closure: (x, y) related iff their minimal neighborhoods meet."""
    mins = minimal_neighborhoods(t)
    rows = []
    for i in range(t.n):
        row = 0
        for j in range(t.n):
            if mins[i] & mins[j]:
                row |= 1 << j
        rows.append(row)
    return FiniteRelation(t.n, rows)


def cl_delta_open_family(t: FiniteTopology) -> FiniteRelation:
    """Diagonal closure computed directly from the open family.

    (x, y) is excluded exactly when some disjoint pair of opens separates
    them.  Quadratic in the family size; kept as the cross-check oracle for
    :func:`cl_delta`.
    """
    opens = sorted(t.opens)
    rows = [(1 << t.n) - 1 for _ in range(t.n)]
    for a in opens:
        for b in opens:
            if a & b == 0:
                for i in _mask_points(a):
                    for j in _mask_points(b):
                        rows[i] &= ~(1 << j)
    return FiniteRelation(t.n, rows)


def is_t2(t: FiniteTopology) -> bool:
    return cl_delta(t) == FiniteRelation.diagonal(t.n)


def is_t1(t: FiniteTopology) -> bool:
    """All singletons closed."""
    full = (1 << t.n) - 1
    return all((full ^ (1 << i)) in t.opens for i in range(t.n))


def is_t0(t: FiniteTopology) -> bool:
    """Distinct points have distinct minimal neighborhoods."""
    mins = minimal_neighborhoods(t)
    return len(set(mins)) == t.n


def tau_r(p: FinitePartition) -> FiniteTopology:
    """The block-saturated topology: opens are exactly unions of blocks."""
    masks = []
    for block in p.blocks:
        m = 0
        for x in block:
            m |= 1 << x
        masks.append(m)
    opens = set()
    for pick in range(1 << len(masks)):
        u = 0
        for bi, m in enumerate(masks):
            if pick >> bi & 1:
                u |= m
        opens.add(u)
    return FiniteTopology(p.n, opens, validate=False)


def t0_saturation(p: FinitePartition, rep=None) -> FiniteTopology:
    """The representative-saturated topology.

    A set is open iff it contains the representative of every block it
    meets.  ``rep`` maps block index to its representative point; by default
    the least point of each block.  The result is T0, and not T1 whenever
    some block has more than one element.
    """
    if rep is None:
        reps = [block[0] for block in p.blocks]
    else:
        reps = [rep[bi] for bi in range(len(p.blocks))]
        for bi, r in enumerate(reps):
            if r not in p.blocks[bi]:
                raise InvalidRepresentativeError(f"point {r} is not in block {list(p.blocks[bi])}")
    block_masks = []
    for block in p.blocks:
        m = 0
        for x in block:
            m |= 1 << x
        block_masks.append(m)
    opens = []
    for mask in range(1 << p.n):
        if all(not (mask & bm) or (mask >> reps[bi] & 1) for bi, bm in enumerate(block_masks)):
            opens.append(mask)
    return FiniteTopology(p.n, opens, validate=False)


def render_topology(t: FiniteTopology) -> str:
    """One open per line: sorted comma-separated points, '-' for the empty set."""
    shown = sorted(t.opens, key=lambda m: (bin(m).count("1"), m))
    return "\n".join(_render_mask(m) for m in shown) + "\n"


def parse_topology(text: str) -> FiniteTopology:
    """Parse the line format of :func:`render_topology` and validate it."""
    masks = set()
    max_point = -1
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line == "-":
            masks.add(0)
            continue
        m = 0
        for item in line.split(","):
            item = item.strip()
            if not item.isdigit():
                raise SpecSyntaxError(f"line {lineno}: bad point {item!r}")
            x = int(item)
            m |= 1 << x
            max_point = max(max_point, x)
        masks.add(m)
    n = max_point + 1
    return FiniteTopology(n, masks, validate=True)
