"""Preorder enumeration, relation codes, and catalogs."""

import random

import pytest

from diagclosure.enumeration import (
    Catalog,
    brute_force_topology_count,
    build_catalog,
    canonical_code,
    closure_of_preorder,
    count_preorders_by_extension,
    decode_preorder,
    decode_relation,
    enumerate_preorders,
    preorder_code,
    read_catalog,
    relation_code,
    render_catalog,
)
from diagclosure.errors import BoundExceededError
from diagclosure.finite_topology import Preorder, cl_delta, topology_of_preorder
from diagclosure.relations import FiniteRelation, all_partitions, eq_of_partition

KNOWN_COUNTS = {0: 1, 1: 1, 2: 4, 3: 29, 4: 355, 5: 6942, 6: 209527}


def test_counts_up_to_5():
    for n in range(6):
        assert enumerate_preorders(n) == KNOWN_COUNTS[n]


def test_counts_confirmed_by_brute_force_scan():
    for n in range(4):
        assert brute_force_topology_count(n) == KNOWN_COUNTS[n]
    with pytest.raises(BoundExceededError):
        brute_force_topology_count(4)


def test_counts_confirmed_by_extension_strategy():
    for n in range(7):
        assert count_preorders_by_extension(n) == KNOWN_COUNTS[n]


def test_delivery_is_each_exactly_once_and_ordered():
    seen = []
    count = enumerate_preorders(2, seen.append)
    assert count == 4 == len(seen) == len(set(seen))
    for p in seen:
        assert isinstance(p, Preorder)
    # ascending lexicographic on row-major bits, pinned via the hex codes
    assert [preorder_code(p) for p in seen] == ["0", "2", "1", "3"]

    seen3 = []
    enumerate_preorders(3, seen3.append)
    strings = [
        "".join(str(p.rows[i] >> j & 1) for i in range(3) for j in range(3)) for p in seen3
    ]
    assert strings == sorted(strings)
    assert len(set(seen3)) == 29


def test_soft_limit_warns():
    class _Stop(Exception):
        pass

    def boom(_):
        raise _Stop

    with pytest.warns(UserWarning):
        with pytest.raises(_Stop):
            enumerate_preorders(8, boom)


def test_closure_of_preorder_examples():
    assert closure_of_preorder(Preorder(3, (1, 2, 4))) == FiniteRelation.diagonal(3)

    witness = Preorder(3, (0b001, 0b111, 0b100))  # up-sets {0}, {0,1,2}, {2}
    rel = closure_of_preorder(witness)
    assert rel == FiniteRelation.from_pairs(3, [(0, 1), (1, 0), (1, 2), (2, 1)])
    assert not rel.is_transitive()

    chain = Preorder(3, (0b111, 0b110, 0b100))
    assert closure_of_preorder(chain) == FiniteRelation.full(3)


def test_closure_agrees_with_topology_route_n4():
    def check(p):
        assert closure_of_preorder(p) == cl_delta(topology_of_preorder(p))

    for n in range(5):
        enumerate_preorders(n, check)


# --- codes ---

def test_code_examples():
    for n in (1, 2, 3, 5):
        assert relation_code(FiniteRelation.diagonal(n)) == "0"
        assert canonical_code(FiniteRelation.diagonal(n)) == "0"
    assert relation_code(FiniteRelation.full(3)) == "7"

    r02 = FiniteRelation.from_pairs(3, [(0, 2), (2, 0)])
    r01 = FiniteRelation.from_pairs(3, [(0, 1), (1, 0)])
    assert relation_code(r02) != relation_code(r01)
    assert canonical_code(r02) == canonical_code(r01)


def test_relation_code_round_trip():
    rng = random.Random(19)
    for _ in range(100):
        n = rng.randrange(1, 6)
        pairs = []
        for i in range(n):
            for j in range(i + 1, n):
                if rng.random() < 0.5:
                    pairs.extend([(i, j), (j, i)])
        r = FiniteRelation.from_pairs(n, pairs)
        assert decode_relation(relation_code(r), n) == r


def test_preorder_code_round_trip_n3():
    def check(p):
        assert decode_preorder(preorder_code(p), 3) == p

    enumerate_preorders(3, check)


# --- catalogs ---

def test_catalog_n1():
    cat = build_catalog(1)
    assert cat.total_topologies == 1 and cat.total_t0 == 1
    assert len(cat.records) == 1
    rec = cat.records[0]
    assert rec.relation_code == "0" and rec.labeled_topology_count == 1
    assert rec.equivalence and rec.transitive


def test_catalog_n3_contains_nontransitive_with_witness():
    cat = build_catalog(3)
    assert cat.total_topologies == 29
    target = relation_code(FiniteRelation.from_pairs(3, [(0, 1), (1, 0), (1, 2), (2, 1)]))
    rec = next(r for r in cat.records if r.relation_code == target)
    assert rec.transitive is False and rec.equivalence is False
    witness = decode_preorder(rec.example_preorder_code, 3)
    assert closure_of_preorder(witness) == decode_relation(target, 3)


def test_catalog_records_are_sound():
    for n in range(5):
        cat = build_catalog(n)
        codes = [int(r.relation_code, 16) for r in cat.records]
        assert codes == sorted(codes) and len(set(codes)) == len(codes)
        assert sum(r.labeled_topology_count for r in cat.records) == cat.total_topologies
        assert sum(r.t0_topology_count for r in cat.records) == cat.total_t0
        for rec in cat.records:
            rel = decode_relation(rec.relation_code, n)
            assert rel.is_reflexive() and rel.is_symmetric()
            assert rec.labeled_topology_count >= 1
            assert rec.transitive == rel.is_transitive()
            assert rec.equivalence == rel.is_equivalence()
            witness = decode_preorder(rec.example_preorder_code, n)
            assert relation_code(closure_of_preorder(witness)) == rec.relation_code


def test_t0_catalogs_cover_all_equivalences_up_to_n4():
    # n=5 runs in the acceptance suite
    for n in range(1, 5):
        cat = build_catalog(n, t0_only=True)
        codes = {r.relation_code for r in cat.records}
        for part in all_partitions(n):
            assert relation_code(eq_of_partition(part)) in codes


def test_full_catalog_has_nontransitive_for_n3_and_n4():
    for n in (3, 4):
        cat = build_catalog(n)
        assert any(not r.transitive for r in cat.records)


def test_t0_only_counts_are_consistent():
    full = build_catalog(3)
    t0 = build_catalog(3, t0_only=True)
    assert t0.total_topologies == t0.total_t0 == full.total_t0
    by_code = {r.relation_code: r for r in full.records}
    for rec in t0.records:
        assert by_code[rec.relation_code].t0_topology_count == rec.labeled_topology_count


def test_iso_catalog_merges_orbits():
    plain = build_catalog(3)
    iso = build_catalog(3, up_to_iso=True)
    assert len(iso.records) < len(plain.records)
    assert sum(r.labeled_topology_count for r in iso.records) == plain.total_topologies
    # one-pair relations form a single orbit of size three
    one_pair = canonical_code(FiniteRelation.from_pairs(3, [(0, 2), (2, 0)]))
    rec = next(r for r in iso.records if r.relation_code == one_pair)
    expected = sum(
        r.labeled_topology_count
        for r in plain.records
        if canonical_code(decode_relation(r.relation_code, 3)) == one_pair
    )
    assert rec.labeled_topology_count == expected


def test_parallel_workers_deterministic():
    for kwargs in ({}, {"t0_only": True}, {"up_to_iso": True}):
        seq = build_catalog(4, **kwargs)
        par = build_catalog(4, workers=3, **kwargs)
        assert render_catalog(seq) == render_catalog(par)


def test_catalog_tsv_round_trip(tmp_path):
    cat = build_catalog(3)
    text = render_catalog(cat)
    lines = text.splitlines()
    assert lines[0] == "n\trelation\tlabeled\tt0\ttransitive\tequivalence\texample"
    assert lines[-1].startswith("# total_topologies=29 total_t0=")
    assert read_catalog(text) == cat
