"""CLI surface: flags, file formats, exit codes, CSV determinism."""

import subprocess
import sys
from fractions import Fraction

import pytest

from starprod.cli import main, parse_genmatrix, write_genmatrix
from starprod.codes import LinearCode, rs_code
from starprod.gf import field_new
from starprod.linalg import MatrixGF, row_space_equal


def run_cli(args):
    """Invoke main() in-process, capturing nothing (stdout goes to pytest)."""
    return main(args)


def write_rs_file(path):
    code = rs_code(4, 11, field_new(11), list(range(11)))
    write_genmatrix(path, code)
    return code


# -- genmatrix files -----------------------------------------------------

def test_genmatrix_roundtrip(tmp_path):
    path = tmp_path / "rs.gm"
    code = write_rs_file(path)
    back = parse_genmatrix(path)
    assert back.field.q == 11
    assert row_space_equal(back.gen, code.gen)


def test_genmatrix_roundtrip_extension_field(tmp_path):
    f = field_new(2, 2)
    code = LinearCode(f, MatrixGF(f, [[1, 2, 3], [0, 1, 2]]))
    path = tmp_path / "gf4.gm"
    write_genmatrix(path, code)
    back = parse_genmatrix(path)
    assert back.field is f
    assert back.gen.rows == code.gen.rows


def test_genmatrix_comments_and_errors(tmp_path):
    good = tmp_path / "ok.gm"
    good.write_text("# comment\nq 2\n# another\nrows 1 cols 3\n1 0 1\n")
    code = parse_genmatrix(good)
    assert code.n == 3 and code.dim == 1

    bad_entry = tmp_path / "bad.gm"
    bad_entry.write_text("q 2\nrows 1 cols 3\n1 0 2\n")
    with pytest.raises(Exception) as err:
        parse_genmatrix(bad_entry)
    assert "line 3" in str(err.value)
    assert run_cli(["distinguish", "--gen", str(bad_entry)]) == 2

    short = tmp_path / "short.gm"
    short.write_text("q 2\nrows 2 cols 3\n1 0 1\n")
    with pytest.raises(Exception):
        parse_genmatrix(short)


# -- bounds subcommand -----------------------------------------------------

def test_bounds_psw(capsys):
    assert run_cli(["bounds", "--which", "psw", "--q", "2", "--k", "2",
                    "--l", "2", "--w", "4"]) == 0
    out = capsys.readouterr().out
    assert "thm_psw_ii" in out


def test_bounds_span_at_kl(capsys):
    assert run_cli(["bounds", "--which", "span", "--q", "2", "--k", "2",
                    "--l", "3", "--n", "6"]) == 0
    out = capsys.readouterr().out
    # c'' with eps = 1/2 is about 20.78; at q = 2 the admissible space
    # contains no desk-scale (k, l), so the flag must say so
    assert "20.77" in out
    assert "in_param_space no" in out
    # a pair that IS admissible: q = 16, kappa = 1/2, k = 8, l = 100
    assert run_cli(["bounds", "--which", "span", "--q", "16", "--k", "8",
                    "--l", "100", "--n", "800", "--kappa", "1/2"]) == 0
    out = capsys.readouterr().out
    assert "in_param_space yes" in out


def test_bounds_missing_flag_exits_2():
    assert run_cli(["bounds", "--which", "span", "--q", "2", "--k", "2",
                    "--l", "3"]) == 2


def test_bounds_domain_violation_exits_2():
    assert run_cli(["bounds", "--which", "span", "--q", "2", "--k", "2",
                    "--l", "3", "--n", "5"]) == 2


# -- exact subcommand --------------------------------------------------------

def test_exact_ps0_table(capsys):
    assert run_cli(["exact", "--q", "2", "--k", "2", "--l", "2",
                    "--model", "L", "--ps0-upto", "5"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 7  # header + w = 0..5
    assert lines[1].startswith("0,1,1,")


def test_exact_ndecomp(capsys):
    assert run_cli(["exact", "--q", "2", "--k", "2", "--l", "2",
                    "--ndecomp", "0", "2"]) == 0
    assert "0,2,9" in capsys.readouterr().out


def test_exact_pn(capsys):
    assert run_cli(["exact", "--q", "2", "--k", "2", "--l", "2",
                    "--pn", "3"]) == 0
    out = capsys.readouterr().out
    assert "3,L," in out


def test_exact_guard_exits_2(capsys):
    assert run_cli(["exact", "--q", "2", "--k", "13", "--l", "14",
                    "--ps0-upto", "3"]) == 2
    err = capsys.readouterr().err
    assert "guard" in err


def test_exact_requires_a_mode():
    assert run_cli(["exact", "--q", "2", "--k", "2", "--l", "2"]) == 2


# -- mc subcommand --------------------------------------------------------

def test_mc_csv_deterministic(tmp_path, capsys):
    args = ["mc", "--q", "2", "--k", "2", "--l", "3", "--n", "8",
            "--model", "L", "--trials", "param", "--seed", "42",
            "--target", "span-failure"]

    def run(path, threads):
        argv = list(args)
        argv[argv.index("param")] = "5000"
        argv += ["--threads", str(threads), "--out", str(path)]
        assert run_cli(argv) == 0

    p1 = tmp_path / "a.csv"
    p2 = tmp_path / "b.csv"
    p8 = tmp_path / "c.csv"
    run(p1, 1)
    run(p2, 1)
    run(p8, 8)
    capsys.readouterr()
    assert p1.read_bytes() == p2.read_bytes() == p8.read_bytes()
    header = p1.read_text().splitlines()[0]
    assert header == ("q,k,l,n,model,target,trials,seed,successes,estimate,"
                      "ci_low,ci_high,bound_low,bound_high,in_param_space,"
                      "vacuous,verdict")


def test_mc_dmax_precondition_exit_2(tmp_path):
    assert run_cli(["mc", "--q", "2", "--k", "2", "--l", "3", "--n", "4",
                    "--trials", "10", "--seed", "1", "--target", "dmax",
                    "--out", str(tmp_path / "x.csv")]) == 2


def test_mc_rejection_cap_exit_4(tmp_path):
    assert run_cli(["mc", "--q", "2", "--k", "1", "--l", "1", "--n", "40",
                    "--model", "FS", "--trials", "10", "--seed", "1",
                    "--target", "dim-histogram",
                    "--out", str(tmp_path / "x.csv")]) == 4


def test_mc_violated_bound_exit_3(tmp_path, monkeypatch, capsys):
    # force a tiny bound so the verdict machinery takes the exit-3 path
    from starprod import experiments
    from starprod.bounds import BoundValue

    def fake_bound(cfg):
        return BoundValue(lo=Fraction(1, 10 ** 9), hi=Fraction(1, 10 ** 9),
                          formula="forced", vacuous=False)

    monkeypatch.setattr(experiments, "_matched_bound", fake_bound)
    rc = run_cli(["mc", "--q", "2", "--k", "2", "--l", "2", "--n", "4",
                  "--trials", "2000", "--seed", "7",
                  "--target", "span-failure",
                  "--out", str(tmp_path / "v.csv")])
    assert rc == 3
    assert "violated" in capsys.readouterr().out


def test_mc_histogram_rows(tmp_path, capsys):
    out = tmp_path / "h.csv"
    assert run_cli(["mc", "--q", "2", "--k", "2", "--l", "2", "--n", "5",
                    "--trials", "2000", "--seed", "3", "--target", "hist",
                    "--out", str(out)]) == 0
    capsys.readouterr()
    lines = out.read_text().splitlines()
    assert len(lines) > 2
    total = sum(int(line.split(",")[8]) for line in lines[1:])
    assert total == 2000


# -- distinguish subcommand ---------------------------------------------------

def test_distinguish_rs(tmp_path, capsys):
    path = tmp_path / "rs.gm"
    write_rs_file(path)
    assert run_cli(["distinguish", "--gen", str(path), "--dual-dmax"]) == 0
    out = capsys.readouterr().out
    assert "dim square     7" in out
    assert "deficit        3" in out
    assert "structured" in out


def test_distinguish_random(tmp_path, capsys):
    from starprod.rng import SplitMix64
    f = field_new(2)
    rng = SplitMix64(1)
    rows = [[rng.below(2) for _ in range(20)] for _ in range(5)]
    path = tmp_path / "rand.gm"
    write_genmatrix(path, LinearCode(f, MatrixGF(f, rows, ncols=20)))
    assert run_cli(["distinguish", "--gen", str(path)]) == 0
    out = capsys.readouterr().out
    assert "random-like" in out
    assert "probabilistic" in out


# -- tables subcommand ---------------------------------------------------------

def test_tables_custom_campaign(tmp_path, capsys):
    campaign = tmp_path / "campaign.csv"
    campaign.write_text(
        "q,k,l,n,model,target,trials,seed\n"
        "2,2,2,5,L,span-failure,2000,9\n")
    out_dir = tmp_path / "out"
    assert run_cli(["tables", "--campaign", str(campaign),
                    "--out", str(out_dir)]) == 0
    capsys.readouterr()
    span = (out_dir / "mc_span.csv").read_text().splitlines()
    assert len(span) == 2  # header + one row
    assert span[1].startswith("2,2,2,5,L,span-failure,2000,9,")


def test_tables_rerun_identical(tmp_path, capsys):
    campaign = tmp_path / "c.csv"
    campaign.write_text(
        "q,k,l,n,model,target,trials,seed\n"
        "2,2,2,4,L,span-failure,1000,5\n"
        "2,2,2,3,L,dependence,1000,5\n")
    d1, d2 = tmp_path / "o1", tmp_path / "o2"
    assert run_cli(["tables", "--campaign", str(campaign), "--out", str(d1)]) == 0
    assert run_cli(["tables", "--campaign", str(campaign), "--out", str(d2)]) == 0
    capsys.readouterr()
    for name in ("mc_span.csv", "mc_dependent.csv"):
        assert (d1 / name).read_bytes() == (d2 / name).read_bytes()


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "starprod.cli", "bounds", "--which", "dmax",
         "--q", "2", "--k", "3", "--l", "4", "--n", "10"],
        capture_output=True, text=True)
    assert proc.returncode == 0
    assert "thm_dmax" in proc.stdout
