"""Command-line interface: exit codes and golden outputs."""

import json

import pytest

from diagclosure.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# --- realise ---

def test_realise_pass(capsys):
    code, out, err = run(
        capsys, "realise", "--spec", "singletons=omega;fin=[3];inf=0",
        "--axiom", "t1", "--pairs", "500", "--seed", "7",
    )
    assert code == 0
    assert out.startswith("construction: FinTwoCase1\n")
    assert "mismatches            0" in out
    assert out.rstrip().endswith("result: PASS")


def test_realise_not_realisable(capsys):
    code, out, err = run(capsys, "realise", "--spec", "singletons=0;fin=[2];inf=1", "--axiom", "t1")
    assert code == 1
    assert out.strip() == "not T1-realisable: Part(R) finite with a finite block of size ≥ 2"


def test_realise_t0_succeeds_where_t1_fails(capsys):
    code, out, _ = run(
        capsys, "realise", "--spec", "singletons=0;fin=[2];inf=1",
        "--axiom", "t0", "--pairs", "500",
    )
    assert code == 0
    assert "construction: T0Sat" in out


def test_realise_bad_spec(capsys):
    code, _, err = run(capsys, "realise", "--spec", "singletons=3;fin=[2,3];inf=0")
    assert code == 2
    assert "finite ground set" in err
    code, _, err = run(capsys, "realise", "--spec", "nonsense")
    assert code == 2


def test_realise_json_lines(capsys):
    code, out, _ = run(
        capsys, "realise", "--spec", "singletons=0;fin=[];inf=3",
        "--pairs", "300", "--json-lines",
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["construction"] == "InfBlocks"
    assert payload["mismatches"] == 0


def test_realise_golden_byte_equality(capsys):
    args = ("realise", "--spec", "singletons=omega;fin=[3,2];inf=1", "--pairs", "400", "--seed", "3")
    code1, out1, _ = run(capsys, *args)
    code2, out2, _ = run(capsys, *args)
    assert code1 == code2 == 0
    assert out1 == out2


# --- separable ---

def test_separable_certificate(capsys):
    code, out, _ = run(
        capsys, "separable", "--spec", "singletons=0;fin=[];inf=3",
        "-p", "i:0:0", "-q", "i:1:0",
    )
    assert code == 0
    assert out == "separable\nCofInBlock(block=i:0, excl=[])\nCofInBlock(block=i:1, excl=[])\n"


def test_separable_inseparable(capsys):
    code, out, _ = run(
        capsys, "separable", "--spec", "singletons=0;fin=[];inf=3",
        "-p", "i:0:0", "-q", "i:0:5",
    )
    assert code == 0
    assert out == "inseparable\n"


def test_separable_bad_address(capsys):
    code, _, err = run(
        capsys, "separable", "--spec", "singletons=0;fin=[];inf=3", "-p", "x:bad", "-q", "i:0:0"
    )
    assert code == 2
    code, _, err = run(
        capsys, "separable", "--spec", "singletons=0;fin=[];inf=3", "-p", "i:9:0", "-q", "i:0:0"
    )
    assert code == 2


# --- enumerate ---

def test_enumerate_summary(capsys):
    code, out, _ = run(capsys, "enumerate", "--n", "3")
    assert code == 0
    assert "topologies: 29" in out

    code, out, _ = run(capsys, "enumerate", "--n", "2")
    assert out.splitlines() == ["topologies: 4", "distinct closures: 2", "non-transitive closures: 0"]


def test_enumerate_n5_count(capsys):
    code, out, _ = run(capsys, "enumerate", "--n", "5")
    assert code == 0
    assert "topologies: 6942" in out


def test_enumerate_writes_catalog(tmp_path, capsys):
    target = tmp_path / "cat.tsv"
    code, out, _ = run(capsys, "enumerate", "--n", "3", "--t0", "--out", str(target))
    assert code == 0
    text = target.read_text()
    assert text.startswith("n\trelation\tlabeled\tt0\ttransitive\tequivalence\texample\n")
    assert text.rstrip().splitlines()[-1].startswith("# total_topologies=")


def test_enumerate_guard(capsys):
    code, _, err = run(capsys, "enumerate", "--n", "8")
    assert code == 2
    assert "--force" in err


def test_enumerate_workers_match_single(tmp_path, capsys):
    a, b = tmp_path / "a.tsv", tmp_path / "b.tsv"
    run(capsys, "enumerate", "--n", "3", "--out", str(a))
    run(capsys, "enumerate", "--n", "3", "--workers", "2", "--out", str(b))
    assert a.read_text() == b.read_text()


# --- example ---

def test_example_default(capsys):
    code, out, _ = run(capsys, "example", "nontransitive")
    assert code == 0
    assert out == (
        "designated: {3n+1}, {3n+2}\n"
        "inseparable: (2,3)\n"
        "inseparable: (3,4)\n"
        "separable: (2,4)\n"
        "certificate:\n"
        "CofInD(d=2, excl=[])\n"
        "CofInD(d=1, excl=[])\n"
        "triple: (2,3,4)\n"
    )


def test_example_explicit_designated_matches_default(capsys):
    code, out1, _ = run(capsys, "example", "nontransitive", "--d", "1,3", "--d", "2,3")
    assert code == 0
    _, out2, _ = run(capsys, "example", "nontransitive")
    assert out1 == out2


def test_example_no_designated(capsys):
    code, out, _ = run(capsys, "example", "nontransitive", "--d", "")
    assert code == 1
    assert "closure is total" in out


def test_example_rejects_overlapping(capsys):
    code, _, err = run(capsys, "example", "nontransitive", "--d", "0,2", "--d", "2,4")
    assert code == 2
    assert "overlap" in err


# --- finite ---

def test_finite_opens_file(tmp_path, capsys):
    f = tmp_path / "sier.txt"
    f.write_text("-\n0\n0,1\n")
    code, out, _ = run(capsys, "finite", "--opens", str(f))
    assert code == 0
    assert out == "closure:\n11\n11\naxioms: T0=true T1=false T2=false\n"


def test_finite_partition_literal(capsys):
    code, out, _ = run(capsys, "finite", "--partition", "0,1;2", "--show", "closure")
    assert code == 0
    assert out == "closure:\n110\n110\n001\n"

    code, out, _ = run(capsys, "finite", "--partition", "0;1;2", "--show", "axioms")
    assert out == "axioms: T0=true T1=true T2=true\n"


def test_finite_rejects_non_topology(capsys):
    import pathlib
    import tempfile

    with tempfile.TemporaryDirectory() as d:
        f = pathlib.Path(d) / "bad.txt"
        f.write_text("-\n0\n1\n0,1,2\n")
        code, _, err = run(capsys, "finite", "--opens", str(f))
    assert code == 2
    assert "{0}" in err and "{1}" in err  # the offending pair is named


def test_finite_missing_file(capsys):
    code, _, err = run(capsys, "finite", "--opens", "/no/such/file")
    assert code == 2


def test_usage_error_exit_2():
    with pytest.raises(SystemExit) as exc:
        main(["realise"])  # missing required --spec
    assert exc.value.code == 2
