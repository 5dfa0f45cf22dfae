"""Realisation constructions: dispatch, oracles, witnesses, certificates."""

import random
from fractions import Fraction

import pytest

from diagclosure.constructions import (
    Ball,
    BlockOpen,
    Certificate,
    CofInBlock,
    CofInD,
    CofOmega,
    ExtendPairs,
    ExtPt,
    FinPt1,
    FinPt2,
    FinTwoCase1,
    FinTwoCase2,
    InfBlocks,
    InfOrSingleton,
    PairBlocks,
    SatPair,
    SingletonPt,
    SplitUnion,
    SubbasisExample,
    T0Sat,
    TauR,
    check_certificate,
    nontransitive_demo,
    realise_t0,
    realise_t1,
    realise_tau_r,
)
from diagclosure.errors import (
    ForeignVariantError,
    InvalidAddressError,
    NotDisjointError,
    NotRealisableError,
    NotT1ConstructionError,
)
from diagclosure.relations import BlockClass, BlockRef, PointAddr, parse_point, parse_spec, same_block
from diagclosure.symbolic_sets import RationalBall, ResidueClassSet, pair_encode

S, F, I = BlockClass.SINGLETON, BlockClass.FINITE, BlockClass.INFINITE

pt = parse_point


# --- dispatch ---

@pytest.mark.parametrize(
    "text, kind",
    [
        ("singletons=0;fin=[];inf=3", "InfBlocks"),
        ("singletons=omega;fin=[3,2];inf=1", "FinTwoCase1"),
        ("singletons=2;fin=[2];inf=omega", "FinTwoCase2"),
        ("singletons=0;fin=cycle[2];inf=0", "PairBlocks"),
        ("singletons=1;fin=cycle[2,3];inf=2", "SplitUnion"),
        ("singletons=5;fin=[];inf=2", "InfOrSingleton"),
        ("singletons=omega;fin=[];inf=0", "InfOrSingleton"),
        ("singletons=0;fin=cycle[3];inf=0", "ExtendPairs"),
    ],
)
def test_realise_t1_dispatch(text, kind):
    spec = parse_spec(text)
    c = realise_t1(spec)
    assert c.kind == kind
    assert c.spec == spec


def test_realise_t1_refuses_unrealisable():
    spec = parse_spec("singletons=1;fin=[2];inf=1")
    with pytest.raises(NotRealisableError) as err:
        realise_t1(spec)
    assert "not T1-realisable" in str(err.value)


def test_split_union_children():
    c = realise_t1(parse_spec("singletons=1;fin=cycle[2,3];inf=2"))
    assert isinstance(c, SplitUnion)
    assert isinstance(c.fin_child, ExtendPairs)
    assert isinstance(c.rest_child, InfOrSingleton)

    c = realise_t1(parse_spec("singletons=omega;fin=cycle[2];inf=0"))
    assert isinstance(c.fin_child, PairBlocks)


def test_realise_t0_examples():
    spec = parse_spec("singletons=1;fin=[2];inf=1")  # not T1-realisable
    c = realise_t0(spec)
    assert c.kind == "T0Sat"
    assert c.separable(pt("s:0"), pt("f:0:0"))
    assert not c.separable(pt("f:0:0"), pt("f:0:1"))

    all_single = realise_t0(parse_spec("singletons=omega;fin=[];inf=0"))
    o = all_single.basic_nbhd(pt("s:4"))
    assert o == SatPair(pt("s:4"))
    assert all_single.member(o, pt("s:4")) and not all_single.member(o, pt("s:5"))

    pairs = realise_t0(parse_spec("singletons=0;fin=cycle[2];inf=0"))
    # the representative of each block is element 0
    assert pairs.member(SatPair(pt("f:3:1")), pt("f:3:0"))
    assert not pairs.member(SatPair(pt("f:3:0")), pt("f:3:1"))


# --- separability ---

def test_infblocks_separable_examples():
    c = realise_t1(parse_spec("singletons=0;fin=[];inf=3"))
    assert not c.separable(pt("i:0:0"), pt("i:0:9"))
    assert c.separable(pt("i:0:0"), pt("i:1:0"))
    cert = c.witness(pt("i:0:0"), pt("i:1:0"))
    assert cert == Certificate(CofInBlock(BlockRef(I, 0)), CofInBlock(BlockRef(I, 1)))
    assert c.witness(pt("i:0:0"), pt("i:0:9")) is None


def test_subbasis_example_paper_triple():
    c = SubbasisExample([ResidueClassSet(1, 3), ResidueClassSet(2, 3)])
    assert not c.separable(2, 3)
    assert not c.separable(3, 4)
    assert c.separable(2, 4)
    cert = c.witness(2, 4)
    assert cert == Certificate(CofInD(2), CofInD(1))
    assert check_certificate(c, 2, 4, cert)


def test_subbasis_example_no_designated_sets():
    c = SubbasisExample([])
    for a in range(5):
        for b in range(a + 1, 5):
            assert not c.separable(a, b)


def test_subbasis_example_validation():
    with pytest.raises(NotDisjointError):
        SubbasisExample([ResidueClassSet(0, 2), ResidueClassSet(2, 4)])
    with pytest.raises(ValueError):
        SubbasisExample([ResidueClassSet(5, 1)])  # finite complement
    with pytest.raises(InvalidAddressError):
        SubbasisExample([]).separable(-1, 2)


def test_separable_matches_theorem_on_samples():
    rng = random.Random(41)
    specs = [
        "singletons=0;fin=[];inf=3",
        "singletons=omega;fin=[];inf=2",
        "singletons=omega;fin=[3,2];inf=1",
        "singletons=2;fin=[2,3];inf=omega",
        "singletons=0;fin=cycle[2];inf=0",
        "singletons=1;fin=cycle[2,3];inf=2",
    ]
    for text in specs:
        spec = parse_spec(text)
        c = realise_t1(spec)
        pts = []
        while len(pts) < 30:
            cls = (S, F, I)[rng.randrange(3)]
            if cls is S and spec.singletons >= 1:
                hi = 10 if spec.singletons.is_omega else spec.singletons.finite() - 1
                pts.append(PointAddr(S, rng.randint(0, hi), 0))
            elif cls is F and spec.fin.count >= 1:
                hi = 10 if spec.fin.cyclic else len(spec.fin.sizes) - 1
                b = rng.randint(0, hi)
                pts.append(PointAddr(F, b, rng.randrange(spec.fin.size_of(b))))
            elif cls is I and spec.inf >= 1:
                hi = 10 if spec.inf.is_omega else spec.inf.finite() - 1
                pts.append(PointAddr(I, rng.randint(0, hi), rng.randrange(10)))
        for p in pts:
            for q in pts:
                if p == q:
                    continue
                sep = c.separable(p, q)
                assert sep == (not same_block(spec, p, q))
                cert = c.witness(p, q)
                assert (cert is not None) == sep
                if cert is not None:
                    assert check_certificate(c, p, q, cert)


# --- witnesses ---

def test_fintwocase1_witness_example():
    c = realise_t1(parse_spec("singletons=omega;fin=[3,2];inf=1"))
    # s:0 lies in the reservoir of finite block 0 (index 0 mod 2)
    cert = c.witness(pt("f:0:0"), pt("s:0"))
    assert cert == Certificate(FinPt1(0, 0, frozenset({pt("s:0")})), SingletonPt(pt("s:0")))
    assert check_certificate(c, pt("f:0:0"), pt("s:0"), cert)
    # a singleton outside the reservoir needs no exclusion
    cert = c.witness(pt("f:0:0"), pt("s:1"))
    assert cert == Certificate(FinPt1(0, 0), SingletonPt(pt("s:1")))


def test_pairblocks_witness_radius():
    spec = parse_spec("singletons=0;fin=cycle[2];inf=0")
    c = realise_t1(spec)
    # find two blocks that share the same natural coordinate
    by_x = {}
    j_pair = None
    for j in range(100):
        x, q = pair_encode(j)
        if x in by_x:
            j_pair = (by_x[x], j)
            break
        by_x[x] = j
    j1, j2 = j_pair
    p, q = PointAddr(F, j1, 0), PointAddr(F, j2, 1)
    cert = c.witness(p, q)
    (x1, q1), (x2, q2) = pair_encode(j1), pair_encode(j2)
    delta = abs(q1 - q2) / 2
    assert cert.open_a == Ball(RationalBall(x1, q1, delta))
    assert cert.open_b == Ball(RationalBall(x2, q2, delta))
    assert check_certificate(c, p, q, cert)
    assert c.witness(PointAddr(F, 5, 0), PointAddr(F, 5, 1)) is None


def test_check_certificate_rejects_tampering():
    spec = parse_spec("singletons=0;fin=cycle[2];inf=0")
    c = realise_t1(spec)
    p, q = PointAddr(F, 0, 0), PointAddr(F, 1, 0)
    cert = c.witness(p, q)
    # swapped sides no longer contain the right points
    assert not check_certificate(c, p, q, Certificate(cert.open_b, cert.open_a))
    # overlapping balls on the same natural coordinate are not disjoint
    x, qc = pair_encode(0)
    fat = Certificate(
        Ball(RationalBall(x, qc, Fraction(10))), Ball(RationalBall(x, qc + 1, Fraction(10)))
    )
    assert not check_certificate(c, p, q, fat)


def test_check_certificate_foreign_variant():
    c = realise_t1(parse_spec("singletons=0;fin=[];inf=3"))
    alien = Certificate(SatPair(pt("i:0:0")), CofInBlock(BlockRef(I, 1)))
    with pytest.raises(ForeignVariantError):
        check_certificate(c, pt("i:0:0"), pt("i:1:0"), alien)


# --- T1 witnesses ---

def test_t1_witness_examples():
    c = realise_t1(parse_spec("singletons=0;fin=[];inf=3"))
    o = c.t1_witness(pt("i:0:0"), pt("i:0:1"))
    assert o == CofInBlock(BlockRef(I, 0), frozenset({pt("i:0:1")}))
    assert c.member(o, pt("i:0:0")) and not c.member(o, pt("i:0:1"))

    c1 = realise_t1(parse_spec("singletons=omega;fin=[3,2];inf=1"))
    o = c1.t1_witness(pt("f:0:0"), pt("f:0:1"))
    assert o == FinPt1(0, 0)
    assert c1.member(o, pt("f:0:0")) and not c1.member(o, pt("f:0:1"))

    t0 = realise_t0(parse_spec("singletons=1;fin=[2];inf=1"))
    with pytest.raises(NotT1ConstructionError):
        t0.t1_witness(pt("f:0:0"), pt("f:0:1"))
    with pytest.raises(NotT1ConstructionError):
        realise_tau_r(parse_spec("singletons=1;fin=[2];inf=1")).t1_witness(pt("s:0"), pt("i:0:0"))


def test_t1_witness_both_ways_samples():
    spec = parse_spec("singletons=omega;fin=[2,3];inf=omega")
    c = realise_t1(spec)
    pts = [PointAddr(S, 3, 0), PointAddr(S, 4, 0), PointAddr(F, 0, 0), PointAddr(F, 0, 1),
           PointAddr(F, 1, 2), PointAddr(I, 0, 0), PointAddr(I, 0, 5), PointAddr(I, 7, 1)]
    for p in pts:
        for q in pts:
            if p == q:
                continue
            o = c.t1_witness(p, q)
            assert c.member(o, p) and not c.member(o, q)


# --- membership / disjointness rule spot checks ---

def test_member_disjoint_examples():
    c = realise_t1(parse_spec("singletons=0;fin=[];inf=3"))
    x = pt("i:1:4")
    assert not c.member(CofInBlock(BlockRef(I, 1), frozenset({x})), x)

    c1 = realise_t1(parse_spec("singletons=omega;fin=[2];inf=2"))
    assert c1.disjoint(FinPt1(0, 1, frozenset()), CofInBlock(BlockRef(I, 0)))
    assert c1.disjoint(FinPt1(0, 1, frozenset()), CofInBlock(BlockRef(I, 1), frozenset({pt("i:1:0")})))

    c2 = realise_t1(parse_spec("singletons=2;fin=[2,3];inf=omega"))
    # pool of finite block 0: infinite blocks with even index
    assert not c2.disjoint(FinPt2(0, 0), CofInBlock(BlockRef(I, 2)))
    assert c2.disjoint(FinPt2(0, 0), CofInBlock(BlockRef(I, 3)))  # wrong residue
    assert c2.disjoint(FinPt2(0, 0, frozenset({2})), CofInBlock(BlockRef(I, 2)))  # excluded block
    assert not c2.disjoint(FinPt2(0, 0), FinPt2(0, 1))
    # block 1's pool is the odd indices, block 0's the even: always disjoint
    assert c2.disjoint(FinPt2(0, 0), FinPt2(1, 0))


def test_extendpairs_membership_rules():
    spec = parse_spec("singletons=0;fin=cycle[3];inf=0")
    c = realise_t1(spec)
    x, qc = pair_encode(0)
    ball = RationalBall(x, qc, Fraction(1))
    ext = ExtPt(0, 2, ball)
    assert c.member(ext, PointAddr(F, 0, 2))  # the anchor
    assert not c.member(ext, PointAddr(F, 0, 0))  # the level-0 image is subtracted
    assert c.member(ext, PointAddr(F, 0, 1))  # the level-1 representative lies in the ball
    assert not c.member(Ball(ball), PointAddr(F, 0, 2))  # plain balls never hold anchors
    assert c.member(Ball(ball), PointAddr(F, 0, 0))


def test_foreign_variant_and_bad_addresses():
    c = realise_t1(parse_spec("singletons=0;fin=[];inf=3"))
    with pytest.raises(ForeignVariantError):
        c.member(SingletonPt(pt("s:0")), pt("i:0:0"))
    with pytest.raises(ForeignVariantError):
        c.disjoint(CofInBlock(BlockRef(I, 0)), BlockOpen(BlockRef(I, 0)))
    with pytest.raises(InvalidAddressError):
        c.separable(pt("i:5:0"), pt("i:0:0"))
    with pytest.raises(InvalidAddressError):
        c.separable(pt("i:0:0"), pt("i:0:0"))
    with pytest.raises(InvalidAddressError):
        c.separable(pt("s:0"), pt("i:0:0"))  # no singletons in this spec


# --- split union ---

def test_split_union_cross_part():
    spec = parse_spec("singletons=1;fin=cycle[2,3];inf=2")
    c = realise_t1(spec)
    p, q = pt("f:0:1"), pt("i:1:3")
    assert c.separable(p, q)
    cert = c.witness(p, q)
    assert check_certificate(c, p, q, cert)
    assert isinstance(cert.open_a, (Ball, ExtPt)) and isinstance(cert.open_b, CofInBlock)
    # opens from different parts are always disjoint
    assert c.disjoint(cert.open_a, CofInBlock(BlockRef(I, 0)))
    assert c.disjoint(cert.open_a, SingletonPt(pt("s:0")))
    o = c.t1_witness(p, q)
    assert c.member(o, p) and not c.member(o, q)
    # within one part the child rules apply
    assert not c.separable(pt("f:1:0"), pt("f:1:2"))
    assert not c.separable(pt("i:0:0"), pt("i:0:1"))


# --- T0Sat / TauR structure ---

def test_t0sat_every_open_around_nonrep_contains_rep():
    spec = parse_spec("singletons=1;fin=[2];inf=1")
    c = realise_t0(spec)
    rng = random.Random(5)
    for _ in range(200):
        x = (pt("f:0:1"), pt("i:0:7"), pt("i:0:3"))[rng.randrange(3)]
        o = c.sample_open(x, rng)
        if c.member(o, x) and x.elem != 0:
            assert c.member(o, PointAddr(x.cls, x.block, 0))


def test_taur_admits_no_open_splitting_a_block():
    spec = parse_spec("singletons=1;fin=[2];inf=1")
    c = realise_tau_r(spec)
    assert not c.separable(pt("f:0:0"), pt("f:0:1"))
    assert c.separable(pt("f:0:0"), pt("i:0:0"))
    cert = c.witness(pt("f:0:0"), pt("i:0:0"))
    assert cert == Certificate(BlockOpen(BlockRef(F, 0)), BlockOpen(BlockRef(I, 0)))
    o = BlockOpen(BlockRef(F, 0))
    assert c.member(o, pt("f:0:0")) and c.member(o, pt("f:0:1"))


# --- serialization ---

def test_certificate_serialization_stable():
    c = realise_t1(parse_spec("singletons=omega;fin=[2];inf=1"))
    p, q = pt("f:0:0"), pt("s:0")
    cert = c.witness(p, q)
    assert cert.render() == c.witness(p, q).render()
    assert cert.render() == "FinPt1(block=0, elem=0, excl=[s:0])\nSingletonPt(s:0)"

    ball = Ball(RationalBall(1, Fraction(1, 2), Fraction(1, 4), excluded={(Fraction(3, 8), 1), (Fraction(2, 5), 0)}))
    assert ball.render() == "Ball(x=1,q=1/2,d=1/4,excl=[(3/8,1),(2/5,0)])"


def test_open_render_sorted_exclusions():
    o = CofInBlock(BlockRef(I, 0), frozenset({pt("i:0:5"), pt("i:0:2")}))
    assert o.render() == "CofInBlock(block=i:0, excl=[i:0:2,i:0:5])"


# --- the demo ---

def test_nontransitive_demo_default():
    rep = nontransitive_demo()
    assert rep.triple == (2, 3, 4)
    assert rep.certificate == Certificate(CofInD(2), CofInD(1))
    assert rep.ok
    lines = rep.render().splitlines()
    assert lines[0] == "designated: {3n+1}, {3n+2}"
    assert "triple: (2,3,4)" in lines


def test_nontransitive_demo_empty_and_invalid():
    rep = nontransitive_demo([])
    assert not rep.ok
    assert rep.message == "closure is total, no triple exists"

    with pytest.raises(NotDisjointError):
        nontransitive_demo([ResidueClassSet(0, 2), ResidueClassSet(2, 4)])


def test_nontransitive_demo_transitive_closure_case():
    # evens and odds cover everything: the closure is an equivalence, no triple
    rep = nontransitive_demo([ResidueClassSet(0, 2), ResidueClassSet(1, 2)])
    assert not rep.ok
    assert "no non-transitivity witness" in rep.message
