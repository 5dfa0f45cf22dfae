"""Symbolic realisations: separation oracles with checkable certificates.

Each construction realises an equivalence relation given by a
:class:`~diagclosure.relations.PartitionSpec` as the diagonal closure of a
topology on the (countably infinite) symbolic ground set.  A construction
answers three kinds of questions, all decidable and exact:

* ``separable(p, q)`` - can the two points be separated by disjoint basic
  opens of this construction;
* ``witness(p, q)`` - a :class:`Certificate`, a concrete pair of disjoint
  basic opens around the points, checkable by :func:`check_certificate`
  using only the membership and disjointness rules;
* ``t1_witness(p, q)`` - for the T1 constructions, a basic open containing
  the first point but not the second.

Canonical choices are fixed once so that every answer is deterministic:
elements 0 and 1 of a block are its two representatives, reservoirs are
assigned by block index modulo the number of finite blocks, and the pair
system uses the fixed natural/rational pairing of
:mod:`diagclosure.symbolic_sets`.

``separable`` is computed from the structure of the basic-open families,
not from the block profile, so the verification harness can compare it
against the independent block-membership oracle.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .errors import (
    ForeignVariantError,
    InvalidAddressError,
    NotDisjointError,
    NotRealisableError,
    NotT1ConstructionError,
)
from .relations import (
    BlockClass,
    BlockRef,
    PartitionSpec,
    PointAddr,
    is_t1_realisable,
)
from .symbolic_sets import (
    RationalBall,
    ResidueClassSet,
    ball_disjoint,
    ball_member,
    format_rational,
    pair_encode,
    residues_disjoint,
)

__all__ = [
    "Ball",
    "BlockOpen",
    "Certificate",
    "CofInBlock",
    "CofInD",
    "CofOmega",
    "Construction",
    "DEFAULT_DESIGNATED",
    "ExtPt",
    "ExtendPairs",
    "FinPt1",
    "FinPt2",
    "FinTwoCase1",
    "FinTwoCase2",
    "InfBlocks",
    "InfOrSingleton",
    "NonTransitiveReport",
    "PairBlocks",
    "SatPair",
    "SingletonPt",
    "SplitUnion",
    "SubbasisExample",
    "T0Sat",
    "TauR",
    "check_certificate",
    "nontransitive_demo",
    "realise_t0",
    "realise_t1",
    "realise_tau_r",
    "render_open",
]

_S, _F, _I = BlockClass.SINGLETON, BlockClass.FINITE, BlockClass.INFINITE


# --------------------------------------------------------------------------
# basic opens

def _render_points(points) -> str:
    return ",".join(p.render() for p in sorted(points))


def _render_ball_args(b: RationalBall) -> str:
    excl = ",".join(f"({format_rational(q)},{lev})" for q, lev in sorted(b.excluded))
    return f"x={b.x_index},q={format_rational(b.center)},d={format_rational(b.radius)},excl=[{excl}]"


@dataclass(frozen=True)
class SingletonPt:
    """The one-point open {x} of an isolated (singleton-block) point."""

    point: PointAddr

    def render(self) -> str:
        return f"SingletonPt({self.point.render()})"


@dataclass(frozen=True)
class CofInBlock:
    """A cofinite subset of a single (infinite) block."""

    block: BlockRef
    excluded: frozenset = frozenset()

    def render(self) -> str:
        return f"CofInBlock(block={self.block.render()}, excl=[{_render_points(self.excluded)}])"


@dataclass(frozen=True)
class FinPt1:
    """A finite-block point plus a cofinite subset of its singleton reservoir."""

    block: int
    elem: int
    excluded: frozenset = frozenset()

    def render(self) -> str:
        return f"FinPt1(block={self.block}, elem={self.elem}, excl=[{_render_points(self.excluded)}])"


@dataclass(frozen=True)
class FinPt2:
    """A finite-block point plus all but finitely many blocks of its infinite-block pool."""

    block: int
    elem: int
    excluded_blocks: frozenset = frozenset()

    def render(self) -> str:
        excl = ",".join(str(b) for b in sorted(self.excluded_blocks))
        return f"FinPt2(block={self.block}, elem={self.elem}, excl_blocks=[{excl}])"


@dataclass(frozen=True)
class Ball:
    """A cofinite subset of a rational ball in the pair system."""

    ball: RationalBall

    def render(self) -> str:
        return f"Ball({_render_ball_args(self.ball)})"


@dataclass(frozen=True)
class ExtPt:
    """A non-representative point plus a ball around its block, minus the
    level-0 representative image (the ball must contain that image)."""

    block: int
    elem: int
    ball: RationalBall

    def render(self) -> str:
        return f"ExtPt(block={self.block}, elem={self.elem}, ball=({_render_ball_args(self.ball)}))"


@dataclass(frozen=True)
class SatPair:
    """The open {x, rep(block(x))} of the representative-saturated topology."""

    point: PointAddr

    def render(self) -> str:
        return f"SatPair({self.point.render()})"


@dataclass(frozen=True)
class BlockOpen:
    """An entire block, as a basic open of the block-saturated topology."""

    block: BlockRef

    def render(self) -> str:
        return f"BlockOpen({self.block.render()})"


@dataclass(frozen=True)
class CofOmega:
    """A cofinite subset of the naturals."""

    excluded: frozenset = frozenset()

    def render(self) -> str:
        return f"CofOmega(excl=[{','.join(str(x) for x in sorted(self.excluded))}])"


@dataclass(frozen=True)
class CofInD:
    """A cofinite subset of one designated residue-class set (1-based index)."""

    index: int
    excluded: frozenset = frozenset()

    def render(self) -> str:
        return f"CofInD(d={self.index}, excl=[{','.join(str(x) for x in sorted(self.excluded))}])"


def render_open(o) -> str:
    return o.render()


@dataclass(frozen=True)
class Certificate:
    """A disjoint pair of basic opens, the first around the first query point."""

    open_a: object
    open_b: object

    def render(self) -> str:
        return f"{self.open_a.render()}\n{self.open_b.render()}"


def check_certificate(c: "Construction", p, q, cert: Certificate) -> bool:
    """Accept iff open_a contains p, open_b contains q, and they are disjoint.

    Pure re-checking through the construction's exact membership and
    disjointness rules; independent of how the certificate was produced.
    """
    return (
        c.member(cert.open_a, p)
        and c.member(cert.open_b, q)
        and c.disjoint(cert.open_a, cert.open_b)
    )


# --------------------------------------------------------------------------
# construction base

class Construction:
    """Base class: a separation oracle over a partition spec."""

    kind: str = ""
    is_t1: bool = True
    _variants: tuple = ()
    _domain: frozenset = frozenset((_S, _F, _I))

    def __init__(self, spec: Optional[PartitionSpec]):
        self.spec = spec

    # -- plumbing --

    def _check_point(self, p):
        self.spec.check_addr(p)
        if p.cls not in self._domain:
            raise InvalidAddressError(f"{self.kind} does not cover {p.render()}")
        return p

    def _check_pair(self, p, q):
        self._check_point(p)
        self._check_point(q)
        if p == q:
            raise InvalidAddressError("query points must be distinct")

    def _check_variant(self, o):
        if type(o) not in self._variants:
            raise ForeignVariantError(f"{type(o).__name__} does not belong to {self.kind}")
        return o

    # -- oracle API --

    def separable(self, p, q) -> bool:
        self._check_pair(p, q)
        return self._separable(p, q)

    def witness(self, p, q) -> Optional[Certificate]:
        self._check_pair(p, q)
        if not self._separable(p, q):
            return None
        a, b = self._witness_opens(p, q)
        return Certificate(a, b)

    def t1_witness(self, p, q):
        """A basic open containing p but not q."""
        if not self.is_t1:
            raise NotT1ConstructionError(f"{self.kind} is not a T1 construction")
        self._check_pair(p, q)
        return self._t1_witness(p, q)

    def member(self, o, p) -> bool:
        self._check_variant(o)
        return self._member(o, p)

    def disjoint(self, o1, o2) -> bool:
        self._check_variant(o1)
        self._check_variant(o2)
        return self._disjoint(o1, o2)

    def basic_nbhd(self, p, avoid=None):
        """Canonical basic open around p, excluding ``avoid`` where the family permits."""
        self._check_point(p)
        return self._basic_nbhd(p, avoid)

    def sample_open(self, p, rng, bounds=(50, 50)):
        """A randomly decorated basic open containing p (harness plumbing)."""
        self._check_point(p)
        return self._sample_open(p, rng, bounds)

    def refine(self, o1, o2, p):
        """Basis axiom, constructively: an open with p inside both arguments."""
        self._check_variant(o1)
        self._check_variant(o2)
        if not (self._member(o1, p) and self._member(o2, p)):
            raise ValueError("refine needs a common point of both opens")
        return self._refine(o1, o2, p)

    def contains(self, outer, inner) -> bool:
        """Exact containment inner <= outer, for this construction's variants."""
        self._check_variant(outer)
        self._check_variant(inner)
        return self._contains(outer, inner)

    # -- per-kind hooks --

    def _separable(self, p, q) -> bool:
        raise NotImplementedError

    def _witness_opens(self, p, q):
        raise NotImplementedError

    def _t1_witness(self, p, q):
        return self._basic_nbhd(p, q)

    def _member(self, o, p) -> bool:
        raise NotImplementedError

    def _disjoint(self, o1, o2) -> bool:
        raise NotImplementedError

    def _basic_nbhd(self, p, avoid=None):
        raise NotImplementedError

    def _sample_open(self, p, rng, bounds):
        return self._basic_nbhd(p)

    def _refine(self, o1, o2, p):
        raise NotImplementedError

    def _contains(self, outer, inner) -> bool:
        raise NotImplementedError


def _same_block_addr(p: PointAddr, q: PointAddr) -> bool:
    return p.cls is q.cls and p.block == q.block


def _sample_block_excl(p: PointAddr, rng, elem_bound: int, size: Optional[int] = None) -> frozenset:
    """A few random same-block points distinct from p, as an exclusion set."""
    out = set()
    hi = elem_bound if size is None else min(elem_bound, size - 1)
    for _ in range(rng.randrange(3)):
        e = rng.randint(0, hi)
        if e != p.elem:
            out.add(PointAddr(p.cls, p.block, e))
    return frozenset(out)


# --------------------------------------------------------------------------
# all blocks infinite

class InfBlocks(Construction):
    """Every block infinite; basic opens are cofinite subsets of single blocks.

    Two opens meet exactly when they sit in the same block, so points are
    separable iff their blocks differ, and excluding one point from a
    cofinite subset keeps it basic - which gives the T1 witnesses.
    """

    kind = "InfBlocks"
    _variants = (CofInBlock,)
    _domain = frozenset((_I,))

    def __init__(self, spec, _as_child=False):
        super().__init__(spec)
        if not _as_child and (not spec.fin.is_empty or spec.singletons >= 1):
            raise ValueError("InfBlocks requires a spec with only infinite blocks")

    def _separable(self, p, q):
        return p.block != q.block

    def _witness_opens(self, p, q):
        return CofInBlock(p.block_ref), CofInBlock(q.block_ref)

    def _member(self, o, p):
        return p.block_ref == o.block and p not in o.excluded

    def _disjoint(self, o1, o2):
        return o1.block != o2.block

    def _basic_nbhd(self, p, avoid=None):
        excl = frozenset()
        if isinstance(avoid, PointAddr) and avoid != p and avoid.block_ref == p.block_ref:
            excl = frozenset((avoid,))
        return CofInBlock(p.block_ref, excl)

    def _sample_open(self, p, rng, bounds):
        return CofInBlock(p.block_ref, _sample_block_excl(p, rng, bounds[1]))

    def _refine(self, o1, o2, p):
        return CofInBlock(o1.block, o1.excluded | o2.excluded)

    def _contains(self, outer, inner):
        return inner.block == outer.block and outer.excluded <= inner.excluded


# --------------------------------------------------------------------------
# blocks infinite or singletons

class InfOrSingleton(Construction):
    """Singleton points are isolated; infinite blocks carry the cofinite opens."""

    kind = "InfOrSingleton"
    _variants = (SingletonPt, CofInBlock)
    _domain = frozenset((_S, _I))

    def __init__(self, spec, _as_child=False):
        super().__init__(spec)
        if not _as_child and not spec.fin.is_empty:
            raise ValueError("InfOrSingleton requires a spec without finite blocks of size >= 2")

    def _separable(self, p, q):
        return not _same_block_addr(p, q)

    def _witness_opens(self, p, q):
        return self._basic_nbhd(p), self._basic_nbhd(q)

    def _member(self, o, p):
        if isinstance(o, SingletonPt):
            return o.point == p
        return p.block_ref == o.block and p not in o.excluded

    def _disjoint(self, o1, o2):
        if isinstance(o1, SingletonPt):
            return not self._member(o2, o1.point) if not isinstance(o2, SingletonPt) else o1 != o2
        if isinstance(o2, SingletonPt):
            return not self._member(o1, o2.point)
        return o1.block != o2.block

    def _basic_nbhd(self, p, avoid=None):
        if p.cls is _S:
            return SingletonPt(p)
        excl = frozenset()
        if isinstance(avoid, PointAddr) and avoid != p and avoid.block_ref == p.block_ref:
            excl = frozenset((avoid,))
        return CofInBlock(p.block_ref, excl)

    def _sample_open(self, p, rng, bounds):
        if p.cls is _S:
            return SingletonPt(p)
        return CofInBlock(p.block_ref, _sample_block_excl(p, rng, bounds[1]))

    def _refine(self, o1, o2, p):
        if isinstance(o1, SingletonPt) or isinstance(o2, SingletonPt):
            return SingletonPt(p)
        return CofInBlock(o1.block, o1.excluded | o2.excluded)

    def _contains(self, outer, inner):
        if isinstance(inner, SingletonPt):
            return self._member(outer, inner.point)
        if isinstance(outer, SingletonPt):
            return False
        return inner.block == outer.block and outer.excluded <= inner.excluded


# --------------------------------------------------------------------------
# finitely many finite blocks, infinitely many singletons

class FinTwoCase1(Construction):
    """Finite blocks draw opens from disjoint singleton reservoirs.

    Finite block j owns the reservoir S_j of all singleton points whose
    index is congruent to ``block_residues[j]`` modulo the number of finite
    blocks; a basic open around a finite-block point is that point together
    with a cofinite subset of its reservoir.  The default residue
    assignment is injective, as the realisation requires; other assignments
    are accepted so the verification harness can prove it would notice.
    """

    kind = "FinTwoCase1"
    _variants = (SingletonPt, CofInBlock, FinPt1)

    def __init__(self, spec, block_residues: Optional[Sequence[int]] = None):
        super().__init__(spec)
        if spec.fin.is_empty or spec.fin.cyclic:
            raise ValueError("FinTwoCase1 needs an explicit nonempty finite-block list")
        if not spec.singletons.is_omega:
            raise ValueError("FinTwoCase1 needs infinitely many singleton blocks")
        m = len(spec.fin.sizes)
        if block_residues is None:
            block_residues = tuple(range(m))
        block_residues = tuple(block_residues)
        if len(block_residues) != m or any(not 0 <= r < m for r in block_residues):
            raise ValueError("block_residues must assign each finite block a residue mod m")
        self.modulus = m
        self.block_residues = block_residues

    def _in_reservoir(self, j: int, s: PointAddr) -> bool:
        return s.cls is _S and s.block % self.modulus == self.block_residues[j]

    def _separable(self, p, q):
        if p.cls is _F and q.cls is _F:
            if p.block == q.block:
                return False
            return self.block_residues[p.block] != self.block_residues[q.block]
        if p.cls is _I and q.cls is _I:
            return p.block != q.block
        return True

    def _witness_opens(self, p, q):
        return self._sep_nbhd(p, q), self._sep_nbhd(q, p)

    def _sep_nbhd(self, p, other):
        if p.cls is _S:
            return SingletonPt(p)
        if p.cls is _I:
            return CofInBlock(p.block_ref)
        excl = frozenset((other,)) if self._in_reservoir(p.block, other) else frozenset()
        return FinPt1(p.block, p.elem, excl)

    def _member(self, o, p):
        if isinstance(o, SingletonPt):
            return o.point == p
        if isinstance(o, CofInBlock):
            return p.block_ref == o.block and p not in o.excluded
        if p.cls is _F:
            return p.block == o.block and p.elem == o.elem
        return self._in_reservoir(o.block, p) and p not in o.excluded

    def _disjoint(self, o1, o2):
        if isinstance(o1, SingletonPt):
            return o1 != o2 if isinstance(o2, SingletonPt) else not self._member(o2, o1.point)
        if isinstance(o2, SingletonPt):
            return not self._member(o1, o2.point)
        c1, c2 = isinstance(o1, CofInBlock), isinstance(o2, CofInBlock)
        if c1 and c2:
            return o1.block != o2.block
        if c1 or c2:
            return True  # reservoirs live on singleton points, never in infinite blocks
        if o1.block == o2.block:
            return False
        return self.block_residues[o1.block] != self.block_residues[o2.block]

    def _basic_nbhd(self, p, avoid=None):
        if p.cls is _S:
            return SingletonPt(p)
        if p.cls is _I:
            excl = frozenset()
            if isinstance(avoid, PointAddr) and avoid != p and avoid.block_ref == p.block_ref:
                excl = frozenset((avoid,))
            return CofInBlock(p.block_ref, excl)
        excl = frozenset()
        if isinstance(avoid, PointAddr) and self._in_reservoir(p.block, avoid):
            excl = frozenset((avoid,))
        return FinPt1(p.block, p.elem, excl)

    def _sample_reservoir_excl(self, j, rng, block_bound, avoid=None):
        res = self.block_residues[j]
        out = set()
        for _ in range(rng.randrange(3)):
            idx = res + self.modulus * rng.randint(0, max(1, block_bound))
            cand = PointAddr(_S, idx, 0)
            if cand != avoid:
                out.add(cand)
        return frozenset(out)

    def _sample_open(self, p, rng, bounds):
        if p.cls is _I:
            return CofInBlock(p.block_ref, _sample_block_excl(p, rng, bounds[1]))
        if p.cls is _F:
            return FinPt1(p.block, p.elem, self._sample_reservoir_excl(p.block, rng, bounds[0]))
        owners = [j for j in range(self.modulus) if self._in_reservoir(j, p)]
        if owners and rng.random() < 0.5:
            j = owners[rng.randrange(len(owners))]
            k = rng.randrange(self.spec.fin.size_of(j))
            return FinPt1(j, k, self._sample_reservoir_excl(j, rng, bounds[0], avoid=p))
        return SingletonPt(p)

    def _refine(self, o1, o2, p):
        if isinstance(o1, SingletonPt) or isinstance(o2, SingletonPt):
            return SingletonPt(p)
        if isinstance(o1, CofInBlock) and isinstance(o2, CofInBlock):
            return CofInBlock(o1.block, o1.excluded | o2.excluded)
        if isinstance(o1, FinPt1) and isinstance(o2, FinPt1):
            if (o1.block, o1.elem) == (o2.block, o2.elem):
                return FinPt1(o1.block, o1.elem, o1.excluded | o2.excluded)
            return SingletonPt(p)  # the overlap lies in the shared reservoir
        raise ValueError("opens of these variants never meet")

    def _contains(self, outer, inner):
        if isinstance(inner, SingletonPt):
            return self._member(outer, inner.point)
        if isinstance(outer, SingletonPt):
            return False
        ci, co = isinstance(inner, CofInBlock), isinstance(outer, CofInBlock)
        if ci or co:
            return ci and co and inner.block == outer.block and outer.excluded <= inner.excluded
        return (inner.block, inner.elem) == (outer.block, outer.elem) and outer.excluded <= inner.excluded


# --------------------------------------------------------------------------
# finitely many finite blocks, infinitely many infinite blocks

class FinTwoCase2(Construction):
    """Finite blocks draw opens from disjoint pools of whole infinite blocks.

    Finite block j owns the pool of infinite blocks with index congruent to
    ``block_residues[j]`` modulo the number of finite blocks; a basic open
    around a finite-block point is that point together with the union of
    all but finitely many pool blocks.  Only whole blocks can be excluded
    there - element-level exclusions happen inside CofInBlock opens.
    """

    kind = "FinTwoCase2"
    _variants = (SingletonPt, CofInBlock, FinPt2)

    def __init__(self, spec, block_residues: Optional[Sequence[int]] = None):
        super().__init__(spec)
        if spec.fin.is_empty or spec.fin.cyclic:
            raise ValueError("FinTwoCase2 needs an explicit nonempty finite-block list")
        if not spec.inf.is_omega:
            raise ValueError("FinTwoCase2 needs infinitely many infinite blocks")
        if spec.singletons.is_omega:
            raise ValueError("FinTwoCase2 applies when singletons are finitely many")
        m = len(spec.fin.sizes)
        if block_residues is None:
            block_residues = tuple(range(m))
        block_residues = tuple(block_residues)
        if len(block_residues) != m or any(not 0 <= r < m for r in block_residues):
            raise ValueError("block_residues must assign each finite block a residue mod m")
        self.modulus = m
        self.block_residues = block_residues

    def _in_pool(self, j: int, inf_block: int) -> bool:
        return inf_block % self.modulus == self.block_residues[j]

    def _separable(self, p, q):
        if p.cls is _F and q.cls is _F:
            if p.block == q.block:
                return False
            return self.block_residues[p.block] != self.block_residues[q.block]
        if p.cls is _I and q.cls is _I:
            return p.block != q.block
        return True

    def _witness_opens(self, p, q):
        return self._sep_nbhd(p, q), self._sep_nbhd(q, p)

    def _sep_nbhd(self, p, other):
        if p.cls is _S:
            return SingletonPt(p)
        if p.cls is _I:
            return CofInBlock(p.block_ref)
        excl = frozenset((other.block,)) if other.cls is _I and self._in_pool(p.block, other.block) else frozenset()
        return FinPt2(p.block, p.elem, excl)

    def _member(self, o, p):
        if isinstance(o, SingletonPt):
            return o.point == p
        if isinstance(o, CofInBlock):
            return p.block_ref == o.block and p not in o.excluded
        if p.cls is _F:
            return p.block == o.block and p.elem == o.elem
        if p.cls is _I:
            return self._in_pool(o.block, p.block) and p.block not in o.excluded_blocks
        return False

    def _disjoint(self, o1, o2):
        if isinstance(o1, SingletonPt):
            return o1 != o2 if isinstance(o2, SingletonPt) else not self._member(o2, o1.point)
        if isinstance(o2, SingletonPt):
            return not self._member(o1, o2.point)
        c1, c2 = isinstance(o1, CofInBlock), isinstance(o2, CofInBlock)
        if c1 and c2:
            return o1.block != o2.block
        if c1 or c2:
            cof, fin = (o1, o2) if c1 else (o2, o1)
            b = cof.block.index
            return not (self._in_pool(fin.block, b) and b not in fin.excluded_blocks)
        if o1.block == o2.block:
            return False
        return self.block_residues[o1.block] != self.block_residues[o2.block]

    def _basic_nbhd(self, p, avoid=None):
        if p.cls is _S:
            return SingletonPt(p)
        if p.cls is _I:
            excl = frozenset()
            if isinstance(avoid, PointAddr) and avoid != p and avoid.block_ref == p.block_ref:
                excl = frozenset((avoid,))
            return CofInBlock(p.block_ref, excl)
        excl = frozenset()
        if isinstance(avoid, PointAddr) and avoid.cls is _I and self._in_pool(p.block, avoid.block):
            excl = frozenset((avoid.block,))
        return FinPt2(p.block, p.elem, excl)

    def _sample_pool_excl(self, j, rng, block_bound, avoid_block=None):
        res = self.block_residues[j]
        out = set()
        for _ in range(rng.randrange(3)):
            b = res + self.modulus * rng.randint(0, max(1, block_bound))
            if b != avoid_block:
                out.add(b)
        return frozenset(out)

    def _sample_open(self, p, rng, bounds):
        if p.cls is _S:
            return SingletonPt(p)
        if p.cls is _F:
            return FinPt2(p.block, p.elem, self._sample_pool_excl(p.block, rng, bounds[0]))
        owners = [j for j in range(self.modulus) if self._in_pool(j, p.block)]
        if owners and rng.random() < 0.5:
            j = owners[rng.randrange(len(owners))]
            k = rng.randrange(self.spec.fin.size_of(j))
            return FinPt2(j, k, self._sample_pool_excl(j, rng, bounds[0], avoid_block=p.block))
        return CofInBlock(p.block_ref, _sample_block_excl(p, rng, bounds[1]))

    def _refine(self, o1, o2, p):
        if isinstance(o1, SingletonPt) or isinstance(o2, SingletonPt):
            return SingletonPt(p)
        c1, c2 = isinstance(o1, CofInBlock), isinstance(o2, CofInBlock)
        if c1 and c2:
            return CofInBlock(o1.block, o1.excluded | o2.excluded)
        if c1 or c2:
            return o1 if c1 else o2  # the whole block sits inside the FinPt2 open
        if (o1.block, o1.elem) == (o2.block, o2.elem):
            return FinPt2(o1.block, o1.elem, o1.excluded_blocks | o2.excluded_blocks)
        return CofInBlock(p.block_ref)  # the overlap is a union of whole pool blocks

    def _contains(self, outer, inner):
        if isinstance(inner, SingletonPt):
            return self._member(outer, inner.point)
        if isinstance(outer, SingletonPt):
            return False
        if isinstance(inner, CofInBlock):
            if isinstance(outer, CofInBlock):
                return inner.block == outer.block and outer.excluded <= inner.excluded
            b = inner.block.index
            return inner.block.cls is _I and self._in_pool(outer.block, b) and b not in outer.excluded_blocks
        if isinstance(outer, CofInBlock):
            return False
        return (inner.block, inner.elem) == (outer.block, outer.elem) and outer.excluded_blocks <= inner.excluded_blocks


# --------------------------------------------------------------------------
# rational-ball helpers for the pair system

def _sample_ball(z, rng) -> RationalBall:
    x, qc, level = z
    offsets = (Fraction(0), Fraction(1, 4), Fraction(-1, 4), Fraction(1, 2), Fraction(-1, 2))
    off = offsets[rng.randrange(len(offsets))]
    radii = (Fraction(1, 2), Fraction(1), Fraction(3, 2))
    rad = radii[rng.randrange(len(radii))]
    while rad <= abs(off):
        rad += Fraction(1, 2)
    center = qc + off
    excl = set()
    for _ in range(rng.randrange(3)):
        cand = center + Fraction(rng.randrange(-3, 4), 4) * rad
        lev = rng.randrange(2)
        if abs(cand - center) < rad and (cand, lev) != (qc, level):
            excl.add((cand, lev))
    return RationalBall(x, center, rad, excl)


def _refine_balls(b1: RationalBall, b2: RationalBall, z, extra_excluded=()) -> RationalBall:
    """A ball around z inside both arguments, inheriting relevant exclusions."""
    x, q, level = z
    rad = min(b1.radius - abs(q - b1.center), b2.radius - abs(q - b2.center))
    excl = set()
    for e in set(b1.excluded) | set(b2.excluded):
        if abs(e[0] - q) < rad:
            excl.add(e)
    for e in extra_excluded:
        if e == (q, level):
            raise ValueError("refine point is excluded by the outer set")
        if abs(e[0] - q) < rad:
            excl.add(e)
    return RationalBall(x, q, rad, excl)


def _ball_contains(outer: RationalBall, inner: RationalBall) -> bool:
    if outer.x_index != inner.x_index:
        return False
    if abs(inner.center - outer.center) + inner.radius > outer.radius:
        return False
    return all(e in inner.excluded for e in outer.excluded if abs(e[0] - inner.center) < inner.radius)


class _PairMapped(Construction):
    """Shared plumbing: finite blocks mapped onto the natural/rational pairing."""

    _domain = frozenset((_F,))

    def __init__(self, spec):
        super().__init__(spec)
        self._xq_cache: dict[int, tuple[int, Fraction]] = {}

    def _xq(self, j: int) -> tuple[int, Fraction]:
        got = self._xq_cache.get(j)
        if got is None:
            got = pair_encode(j)
            self._xq_cache[j] = got
        return got

    def _z(self, p: PointAddr):
        x, q = self._xq(p.block)
        return (x, q, p.elem)

    def _witness_balls(self, p, q):
        (x1, q1), (x2, q2) = self._xq(p.block), self._xq(q.block)
        if x1 != x2:
            return RationalBall(x1, q1, Fraction(1)), RationalBall(x2, q2, Fraction(1))
        d = abs(q1 - q2) / 2
        return RationalBall(x1, q1, d), RationalBall(x2, q2, d)


class PairBlocks(_PairMapped):
    """Infinitely many two-element blocks, realised as paired rational levels.

    Block j sits at the (natural, rational) pair number j; its two elements
    are the levels 0 and 1 over that pair.  Basic opens are cofinite
    subsets of rational balls, so two opens are disjoint exactly when their
    naturals differ or their intervals are separated - which happens iff
    the underlying blocks differ.
    """

    kind = "PairBlocks"
    _variants = (Ball,)

    def __init__(self, spec, _as_child=False):
        _PairMapped.__init__(self, spec)
        if spec.fin.is_empty or not spec.fin.cyclic or any(s != 2 for s in spec.fin.sizes):
            raise ValueError("PairBlocks needs cyclically repeating blocks of size 2")
        if not _as_child and (spec.singletons >= 1 or spec.inf >= 1):
            raise ValueError("PairBlocks covers only the finite-block part of a spec")

    def _separable(self, p, q):
        return p.block != q.block

    def _witness_opens(self, p, q):
        ba, bb = self._witness_balls(p, q)
        return Ball(ba), Ball(bb)

    def _member(self, o, p):
        if p.cls is not _F or p.elem > 1:
            return False
        return ball_member(o.ball, self._z(p))

    def _disjoint(self, o1, o2):
        return ball_disjoint(o1.ball, o2.ball)

    def _basic_nbhd(self, p, avoid=None):
        x, qc = self._xq(p.block)
        excl = set()
        if isinstance(avoid, PointAddr) and avoid != p and avoid.cls is _F and avoid.elem <= 1:
            za = self._z(avoid)
            if za[0] == x and abs(za[1] - qc) < 1:
                excl.add((za[1], za[2]))
        return Ball(RationalBall(x, qc, Fraction(1), excl))

    def _sample_open(self, p, rng, bounds):
        return Ball(_sample_ball(self._z(p), rng))

    def _refine(self, o1, o2, p):
        return Ball(_refine_balls(o1.ball, o2.ball, self._z(p)))

    def _contains(self, outer, inner):
        return _ball_contains(outer.ball, inner.ball)


class ExtendPairs(_PairMapped):
    """Infinitely many finite blocks of any sizes >= 2.

    Elements 0 and 1 of each block form a pair system exactly as in
    PairBlocks.  Every further element x of block j gets the opens
    {x} plus (N minus the level-0 representative image), where N is a
    basic ball containing that image; such opens keep the basis property
    and pin x to its block.
    """

    kind = "ExtendPairs"
    _variants = (Ball, ExtPt)

    def __init__(self, spec, _as_child=False):
        _PairMapped.__init__(self, spec)
        if spec.fin.is_empty or not spec.fin.cyclic:
            raise ValueError("ExtendPairs needs a cyclically repeating finite-block family")
        if not _as_child and (spec.singletons >= 1 or spec.inf >= 1):
            raise ValueError("ExtendPairs covers only the finite-block part of a spec")

    def _r1_image(self, j: int):
        x, q = self._xq(j)
        return (x, q, 0)

    def _separable(self, p, q):
        return p.block != q.block

    def _wrap(self, p, ball):
        if p.elem <= 1:
            return Ball(ball)
        return ExtPt(p.block, p.elem, ball)

    def _witness_opens(self, p, q):
        ba, bb = self._witness_balls(p, q)
        return self._wrap(p, ba), self._wrap(q, bb)

    def _member(self, o, p):
        if p.cls is not _F:
            return False
        if isinstance(o, Ball):
            return p.elem <= 1 and ball_member(o.ball, self._z(p))
        if p.elem >= 2:
            return p.block == o.block and p.elem == o.elem
        z = self._z(p)
        return z != self._r1_image(o.block) and ball_member(o.ball, z)

    def _disjoint(self, o1, o2):
        if isinstance(o1, ExtPt) and isinstance(o2, ExtPt) and (o1.block, o1.elem) == (o2.block, o2.elem):
            return False  # both contain their anchor point
        return ball_disjoint(o1.ball, o2.ball)

    def _basic_nbhd(self, p, avoid=None):
        x, qc = self._xq(p.block)
        excl = set()
        if isinstance(avoid, PointAddr) and avoid != p and avoid.cls is _F and avoid.elem <= 1:
            za = self._z(avoid)
            if za[0] == x and abs(za[1] - qc) < 1:
                excl.add((za[1], za[2]))
        if p.elem <= 1:
            return Ball(RationalBall(x, qc, Fraction(1), excl))
        excl.discard((qc, 0))  # the extension open subtracts the level-0 image itself
        return ExtPt(p.block, p.elem, RationalBall(x, qc, Fraction(1), excl))

    def _sample_open(self, p, rng, bounds):
        size = self.spec.fin.size_of(p.block)
        if p.elem >= 2:
            ball = _sample_ball(self._r1_image(p.block), rng)
            return ExtPt(p.block, p.elem, ball)
        if p.elem == 1 and size >= 3 and rng.random() < 0.3:
            # an extension open of the same block also contains this point
            x, qc = self._xq(p.block)
            k = rng.randrange(2, size)
            rad = (Fraction(1, 2), Fraction(1))[rng.randrange(2)]
            return ExtPt(p.block, k, RationalBall(x, qc, rad))
        return Ball(_sample_ball(self._z(p), rng))

    def _refine(self, o1, o2, p):
        e1, e2 = isinstance(o1, ExtPt), isinstance(o2, ExtPt)
        if e1 and e2 and (o1.block, o1.elem) == (o2.block, o2.elem) and p.elem >= 2:
            nb = _refine_balls(o1.ball, o2.ball, self._r1_image(o1.block))
            return ExtPt(o1.block, o1.elem, nb)
        extra = set()
        if e1:
            x, q = self._xq(o1.block)
            extra.add((q, 0))
        if e2:
            x, q = self._xq(o2.block)
            extra.add((q, 0))
        nb = _refine_balls(o1.ball, o2.ball, self._z(p), extra_excluded=extra)
        return Ball(nb)

    def _contains(self, outer, inner):
        if isinstance(inner, ExtPt):
            if not isinstance(outer, ExtPt):
                return False  # the anchor point never lies in a plain ball open
            return (inner.block, inner.elem) == (outer.block, outer.elem) and _ball_contains(outer.ball, inner.ball)
        if isinstance(outer, ExtPt):
            r1 = self._r1_image(outer.block)
            return _ball_contains(outer.ball, inner.ball) and not ball_member(inner.ball, r1)
        return _ball_contains(outer.ball, inner.ball)


# --------------------------------------------------------------------------
# disjoint union of a finite-blocks part and a singleton/infinite part

class SplitUnion(Construction):
    """Disjoint union: a pair/extension system on the finite blocks next to
    an isolated-or-cofinite system on the singleton and infinite blocks.

    Opens from different parts are always disjoint, so separability across
    parts is automatic and everything else routes to the owning child.
    """

    kind = "SplitUnion"

    def __init__(self, spec):
        super().__init__(spec)
        if spec.fin.is_empty or not spec.fin.cyclic:
            raise ValueError("SplitUnion needs a cyclically repeating finite-block family")
        if not (spec.singletons >= 1 or spec.inf >= 1):
            raise ValueError("SplitUnion needs a nonempty singleton/infinite part")
        if all(s == 2 for s in spec.fin.sizes):
            self.fin_child: Construction = PairBlocks(spec, _as_child=True)
        else:
            self.fin_child = ExtendPairs(spec, _as_child=True)
        self.rest_child = InfOrSingleton(spec, _as_child=True)
        self.children = (self.fin_child, self.rest_child)
        self._variants = self.fin_child._variants + self.rest_child._variants

    def _child_for(self, p: PointAddr) -> Construction:
        return self.fin_child if p.cls is _F else self.rest_child

    def _child_for_open(self, o) -> Construction:
        return self.fin_child if type(o) in self.fin_child._variants else self.rest_child

    def _separable(self, p, q):
        cp, cq = self._child_for(p), self._child_for(q)
        if cp is cq:
            return cp._separable(p, q)
        return True

    def _witness_opens(self, p, q):
        cp, cq = self._child_for(p), self._child_for(q)
        if cp is cq:
            return cp._witness_opens(p, q)
        return cp._basic_nbhd(p), cq._basic_nbhd(q)

    def _t1_witness(self, p, q):
        cp, cq = self._child_for(p), self._child_for(q)
        if cp is cq:
            return cp._t1_witness(p, q)
        return cp._basic_nbhd(p)

    def _member(self, o, p):
        return self._child_for_open(o)._member(o, p)

    def _disjoint(self, o1, o2):
        c1, c2 = self._child_for_open(o1), self._child_for_open(o2)
        if c1 is c2:
            return c1._disjoint(o1, o2)
        return True

    def _basic_nbhd(self, p, avoid=None):
        cp = self._child_for(p)
        if isinstance(avoid, PointAddr) and self._child_for(avoid) is not cp:
            avoid = None
        return cp._basic_nbhd(p, avoid)

    def _sample_open(self, p, rng, bounds):
        return self._child_for(p)._sample_open(p, rng, bounds)

    def _refine(self, o1, o2, p):
        c1, c2 = self._child_for_open(o1), self._child_for_open(o2)
        if c1 is not c2:
            raise ValueError("opens from different parts never meet")
        return c1._refine(o1, o2, p)

    def _contains(self, outer, inner):
        c1, c2 = self._child_for_open(outer), self._child_for_open(inner)
        if c1 is not c2:
            return False
        return c1._contains(outer, inner)


# --------------------------------------------------------------------------
# representative-saturated construction (T0 for every spec)

class T0Sat(Construction):
    """Opens {x, rep(block(x))} with rep = element 0 of each block.

    Realises any spec's relation, is T0 (the representative's own open is
    just itself), but never T1 on blocks with more than one element: every
    open around a non-representative also contains the representative.
    """

    kind = "T0Sat"
    is_t1 = False
    _variants = (SatPair,)

    def _rep(self, ref: BlockRef) -> PointAddr:
        return PointAddr(ref.cls, ref.index, 0)

    def _separable(self, p, q):
        return not _same_block_addr(p, q)

    def _witness_opens(self, p, q):
        return SatPair(p), SatPair(q)

    def _member(self, o, p):
        return p == o.point or p == self._rep(o.point.block_ref)

    def _disjoint(self, o1, o2):
        return o1.point.block_ref != o2.point.block_ref

    def _basic_nbhd(self, p, avoid=None):
        return SatPair(p)

    def _sample_open(self, p, rng, bounds):
        size = self.spec.block_size(p.block_ref)
        if p.elem == 0 and size >= 2 and rng.random() < 0.5:
            hi = bounds[1] if size.is_omega else size.finite() - 1
            e = rng.randint(1, max(1, hi))
            return SatPair(PointAddr(p.cls, p.block, e))
        return SatPair(p)

    def _refine(self, o1, o2, p):
        if o1.point == o2.point:
            return o1
        return SatPair(p)  # the overlap is exactly the representative

    def _contains(self, outer, inner):
        return self._member(outer, inner.point) and self._member(outer, self._rep(inner.point.block_ref))


# --------------------------------------------------------------------------
# block-saturated construction (not even T0 on non-trivial blocks)

class TauR(Construction):
    """Whole blocks as basic opens: the coarsest realisation of the relation."""

    kind = "TauR"
    is_t1 = False
    _variants = (BlockOpen,)

    def _separable(self, p, q):
        return not _same_block_addr(p, q)

    def _witness_opens(self, p, q):
        return BlockOpen(p.block_ref), BlockOpen(q.block_ref)

    def _member(self, o, p):
        return p.block_ref == o.block

    def _disjoint(self, o1, o2):
        return o1.block != o2.block

    def _basic_nbhd(self, p, avoid=None):
        return BlockOpen(p.block_ref)

    def _refine(self, o1, o2, p):
        return BlockOpen(o1.block)

    def _contains(self, outer, inner):
        return inner.block == outer.block


# --------------------------------------------------------------------------
# the subbasis example on the naturals

class SubbasisExample(Construction):
    """The naturals under the cofinite sets plus designated residue classes.

    Points are plain naturals here.  The generated basis consists of the
    cofinite subsets of the whole ground set and the cofinite subsets of
    each designated set; two points are separable iff they lie in two
    distinct designated sets, which makes the diagonal closure
    non-transitive as soon as two designated sets and an undesignated
    point exist.
    """

    kind = "SubbasisExample"
    _variants = (CofOmega, CofInD)

    def __init__(self, designated: Sequence[ResidueClassSet]):
        super().__init__(None)
        designated = tuple(designated)
        for d in designated:
            if d.modulus < 2:
                raise ValueError(f"designated set {d.render()} does not have an infinite complement")
        for i in range(len(designated)):
            for j in range(i + 1, len(designated)):
                if not residues_disjoint(designated[i], designated[j]):
                    raise NotDisjointError(
                        f"designated sets overlap: {designated[i].render()} and {designated[j].render()}"
                    )
        self.designated = designated

    def _check_point(self, p):
        if not isinstance(p, int) or isinstance(p, bool) or p < 0:
            raise InvalidAddressError(f"points of this construction are naturals: {p!r}")
        return p

    def _designated_index(self, x: int) -> Optional[int]:
        for i, d in enumerate(self.designated, start=1):
            if d.contains(x):
                return i
        return None

    def _separable(self, p, q):
        ip, iq = self._designated_index(p), self._designated_index(q)
        return ip is not None and iq is not None and ip != iq

    def _witness_opens(self, p, q):
        return CofInD(self._designated_index(p)), CofInD(self._designated_index(q))

    def _t1_witness(self, p, q):
        self._check_pair(p, q)
        return CofOmega(frozenset((q,)))

    def _member(self, o, p):
        if isinstance(o, CofOmega):
            return p not in o.excluded
        return self.designated[o.index - 1].contains(p) and p not in o.excluded

    def _disjoint(self, o1, o2):
        if isinstance(o1, CofInD) and isinstance(o2, CofInD):
            return o1.index != o2.index
        return False  # a cofinite set meets every infinite set

    def _basic_nbhd(self, p, avoid=None):
        excl = frozenset((avoid,)) if isinstance(avoid, int) and avoid != p else frozenset()
        return CofOmega(excl)

    def _sample_open(self, p, rng, bounds):
        excl = set()
        for _ in range(rng.randrange(3)):
            x = rng.randint(0, 3 * (bounds[0] + 1))
            if x != p:
                excl.add(x)
        i = self._designated_index(p)
        if i is not None and rng.random() < 0.5:
            return CofInD(i, frozenset(excl))
        return CofOmega(frozenset(excl))

    def _refine(self, o1, o2, p):
        d1, d2 = isinstance(o1, CofInD), isinstance(o2, CofInD)
        if d1 and d2:
            return CofInD(o1.index, o1.excluded | o2.excluded)
        if d1 or d2:
            d, other = (o1, o2) if d1 else (o2, o1)
            return CofInD(d.index, d.excluded | other.excluded)
        return CofOmega(o1.excluded | o2.excluded)

    def _contains(self, outer, inner):
        if isinstance(inner, CofOmega):
            return isinstance(outer, CofOmega) and outer.excluded <= inner.excluded
        dset = self.designated[inner.index - 1]
        if isinstance(outer, CofInD):
            if outer.index != inner.index:
                return False
            extra = outer.excluded
        else:
            extra = outer.excluded
        return all(e in inner.excluded or not dset.contains(e) for e in extra)


# --------------------------------------------------------------------------
# dispatch

def realise_t1(spec: PartitionSpec) -> Construction:
    """Build the T1 realisation of a spec, or refuse when none exists."""
    if not is_t1_realisable(spec):
        raise NotRealisableError(
            "not T1-realisable: Part(R) finite with a finite block of size ≥ 2"
        )
    fin = spec.fin
    if fin.is_empty:
        if spec.singletons == 0:
            return InfBlocks(spec)
        return InfOrSingleton(spec)
    if not fin.cyclic:
        if spec.singletons.is_omega:
            return FinTwoCase1(spec)
        return FinTwoCase2(spec)
    if spec.singletons == 0 and spec.inf == 0:
        if all(s == 2 for s in fin.sizes):
            return PairBlocks(spec)
        return ExtendPairs(spec)
    return SplitUnion(spec)


def realise_t0(spec: PartitionSpec) -> Construction:
    """Build the T0 realisation; works for every spec."""
    return T0Sat(spec)


def realise_tau_r(spec: PartitionSpec) -> Construction:
    """Build the block-saturated realisation; works for every spec."""
    return TauR(spec)


# --------------------------------------------------------------------------
# the non-transitive closure demonstration

DEFAULT_DESIGNATED = (ResidueClassSet(1, 3), ResidueClassSet(2, 3))


@dataclass
class NonTransitiveReport:
    """Outcome of the non-transitivity demonstration."""

    designated: tuple
    construction: Optional[SubbasisExample]
    triple: Optional[tuple[int, int, int]]
    certificate: Optional[Certificate]
    message: str

    @property
    def ok(self) -> bool:
        return self.triple is not None

    def render(self) -> str:
        shown = ", ".join(d.render() for d in self.designated) if self.designated else "(none)"
        lines = [f"designated: {shown}"]
        if self.triple is None:
            lines.append(self.message)
        else:
            a, b, c = self.triple
            lines.append(f"inseparable: ({a},{b})")
            lines.append(f"inseparable: ({b},{c})")
            lines.append(f"separable: ({a},{c})")
            lines.append("certificate:")
            lines.append(self.certificate.render())
            lines.append(f"triple: ({a},{b},{c})")
        return "\n".join(lines)


def nontransitive_demo(designated=None, search_bound: int = 400) -> NonTransitiveReport:
    """Exhibit a non-transitive triple of the subbasis-example closure.

    Looks for the smallest consecutive triple (a, a+1, a+2) with the ends
    separable but both adjacent pairs inseparable, then falls back to a
    bounded general search.  The found certificate is re-checked before it
    is reported; failure there would be a library defect.
    """
    if designated is None:
        designated = DEFAULT_DESIGNATED
    designated = tuple(designated)
    c = SubbasisExample(designated)
    if not designated:
        return NonTransitiveReport(designated, c, None, None, "closure is total, no triple exists")

    def pattern(a, b, cc):
        return (not c.separable(a, b)) and (not c.separable(b, cc)) and c.separable(a, cc)

    triple = None
    for a in range(search_bound):
        if pattern(a, a + 1, a + 2):
            triple = (a, a + 1, a + 2)
            break
    if triple is None:
        small = min(search_bound, 60)
        for a in range(small):
            for b in range(a + 1, small):
                if c.separable(a, b):
                    continue
                for cc in range(b + 1, small):
                    if not c.separable(b, cc) and c.separable(a, cc):
                        triple = (a, b, cc)
                        break
                if triple:
                    break
            if triple:
                break
    if triple is None:
        return NonTransitiveReport(
            designated, c, None, None, "no non-transitivity witness found (closure may be transitive)"
        )
    a, b, cc = triple
    cert = c.witness(a, cc)
    if cert is None or not check_certificate(c, a, cc, cert):
        raise AssertionError("separation certificate failed re-checking")
    return NonTransitiveReport(designated, c, triple, cert, "")
