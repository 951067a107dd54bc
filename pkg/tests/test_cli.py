"""Tests for the command-line front end."""

import mpmath
import pytest
from mpmath import mpf

import src.cli.main as cli_main
from src.arith import dk_value
from src.cli import SuiteResult, run
from src.cli import suites
from src.convolution import MomentReport
from src.singular import series
from src.validation import Subcommand, VerifySuite

MOMENT_HEADER = "N,H,q_max,sum_delta,sum_delta_sq,ratio1,ratio2,wall_ms"


def invoke(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def lines(text):
    return text.rstrip("\n").split("\n")


# ============================================
# Computing subcommands
# ============================================

def test_dsum_example(capsys):
    code, out, _ = invoke(capsys, "dsum", "--k", "3", "--n", "1000", "--h", "1")
    expected = sum(dk_value(3, n) * dk_value(3, n + 1) for n in range(1001, 2001))
    assert code == 0
    assert out == f"k,N,h,D\n3,1000,1,{expected}\n"


def test_sieve_rows(capsys):
    code, out, _ = invoke(capsys, "sieve", "--k", "2", "--lo", "0", "--hi", "12")
    assert code == 0
    rows = lines(out)
    assert rows[0] == "n,d_k"
    assert rows[1:] == [f"{n},{dk_value(2, n)}" for n in range(1, 13)]


def test_pseries_and_dual_agree(capsys):
    _, direct, _ = invoke(capsys, "pseries", "--q", "6")
    code, dual, _ = invoke(capsys, "pseries", "--q", "6", "--dual")
    assert code == 0
    assert lines(direct)[0] == "q,j,b_j"
    a = [mpf(row.split(",")[2]) for row in lines(direct)[1:]]
    b = [mpf(row.split(",")[2]) for row in lines(dual)[1:]]
    assert len(a) == len(b) == 3
    for x, y in zip(a, b):
        assert abs(x - y) <= mpf("1e-15") * max(abs(x), 1)


def test_singular_fixed_truncation(capsys):
    code, out, _ = invoke(capsys, "singular", "--x", "100000", "--h", "2", "--qmax", "40")
    assert code == 0
    header, row = lines(out)
    assert header == "x,h,q_max,value,tail_estimate"
    assert row.split(",")[2] == "40"


def test_delta_row(capsys):
    code, out, _ = invoke(capsys, "delta", "--n", "2000", "--h", "3", "--qmax", "60")
    assert code == 0
    header, row = lines(out)
    assert header == "N,h,q_max,D,main_term,delta"
    N, h, q_max, D, main, delta = row.split(",")
    assert (N, h, q_max) == ("2000", "3", "60")
    with mpmath.workdps(30):
        assert abs(mpf(D) - mpf(main) - mpf(delta)) < mpf("1e-10") * abs(mpf(main))


def test_moment_outputs_are_byte_identical(capsys, tmp_path):
    argv = ["moment1", "--n", "2000", "--H", "20", "--qmax", "60", "--no-timing"]
    code, first, _ = invoke(capsys, *argv)
    assert code == 0
    _, second, _ = invoke(capsys, *argv)
    assert first == second
    header, row = lines(first)
    assert header == MOMENT_HEADER
    assert row.split(",")[:3] == ["2000", "20", "60"]
    assert row.endswith(",0")

    path = tmp_path / "moment.csv"
    assert run(argv + ["--output", str(path)]) == 0
    assert path.read_text() == first


def test_moment2_theta(capsys):
    code, out, _ = invoke(capsys, "moment2", "--n", "3000", "--theta", "0.4", "--qmax", "60")
    assert code == 0
    header, row = lines(out)
    assert header == MOMENT_HEADER
    assert row.split(",")[1] == "24"


def test_ingham_row(capsys):
    code, out, _ = invoke(capsys, "ingham", "--n", "10000", "--h", "1")
    assert code == 0
    header, row = lines(out)
    assert header == "N,h,ratio"
    assert 0.5 < float(row.split(",")[2]) < 2


# ============================================
# Verify suites
# ============================================

def test_verify_carmichael(capsys):
    code, out, _ = invoke(capsys, "verify", "--suite", "carmichael", "--qmax", "500")
    assert code == 0
    assert out == "q_from,q_to,failures\n2,500,0\n"


def test_verify_dual_identity(capsys):
    code, out, _ = invoke(capsys, "verify", "--suite", "dual-identity", "--qmax", "30")
    assert code == 0
    rows = lines(out)
    assert rows[0] == "q,max_rel_deviation"
    assert len(rows) == 31


def test_verify_prime_powers(capsys):
    code, out, _ = invoke(capsys, "verify", "--suite", "prime-powers")
    assert code == 0
    assert len(lines(out)) == 1 + 15 * 20


def test_verify_correlation(capsys):
    code, out, _ = invoke(capsys, "verify", "--suite", "correlation", "--n", "500", "--H", "30")
    assert code == 0
    rows = lines(out)
    assert len(rows) == 31
    assert all(r.split(",")[2] == r.split(",")[3] for r in rows[1:])


def test_verify_h_multiplicativity_records_data(capsys):
    code, out, _ = invoke(capsys, "verify", "--suite", "h-multiplicativity")
    assert code == 0
    assert lines(out)[0] == "q1,q2,max_deviation,holds"


def test_partial_sums_at_single_sweep(tmp_path):
    from src.validation import RunConfig

    cfg = RunConfig(subcommand="verify", suite="voronoi", cache_dir=str(tmp_path))
    sums = suites.partial_sums_at([10, 1, 5000, 4096], cfg)
    assert sums[1] == 1
    assert sums[10] == sum(dk_value(3, n) for n in range(1, 11))
    assert sums[4096] == sum(dk_value(3, n) for n in range(1, 4097))
    assert sums[5000] == sum(dk_value(3, n) for n in range(1, 5001))


@pytest.mark.slow
@pytest.mark.parametrize("suite", ["dual-identity", "contour", "voronoi", "ingham", "determinism"])
def test_verify_acceptance_suites(capsys, suite):
    code, _, _ = invoke(capsys, "verify", "--suite", suite)
    assert code == 0


# ============================================
# Exit codes
# ============================================

def test_unknown_flag_exits_with_usage(capsys):
    code, out, err = invoke(capsys, "dsum", "--k", "3", "--n", "1000", "--h", "1", "--bogus")
    assert code == 1
    assert out == ""
    assert "usage" in err


def test_missing_subcommand_and_help(capsys):
    assert invoke(capsys)[0] == 1
    code, out, _ = invoke(capsys, "moment2", "--help")
    assert code == 0
    assert "wall_ms" in out


def test_validation_error_exits_one(capsys):
    code, out, err = invoke(capsys, "ingham", "--n", "500", "--h", "1")
    assert code == 1
    assert out == ""
    assert "invalid arguments" in err


def test_computation_failure_exits_two(capsys, monkeypatch):
    def broken(cfg):
        raise RuntimeError("sieve exploded")

    monkeypatch.setitem(cli_main.COMMANDS, Subcommand.DSUM, broken)
    code, out, _ = invoke(capsys, "dsum", "--n", "1000", "--h", "1")
    assert code == 2
    assert out == ""


def test_failed_suite_exits_two_but_writes_csv(capsys, monkeypatch):
    def failing(cfg):
        return SuiteResult("carmichael", ["q_from", "q_to", "failures"], [[2, 10, 1]], passed=False)

    monkeypatch.setitem(suites.SUITES, VerifySuite.CARMICHAEL, failing)
    code, out, _ = invoke(capsys, "verify", "--suite", "carmichael")
    assert code == 2
    assert out == "q_from,q_to,failures\n2,10,1\n"


def test_saturated_moment_exits_two(capsys, monkeypatch):
    def saturated(N, H, order, opts, cfg):
        return MomentReport(N=N, H=H, order=order, q_max=2**20, sum_delta=mpf(1),
                            sum_delta_sq=mpf(1), ratio1=mpf(1), ratio2=mpf(1), sum_D=0,
                            sum_main=mpf(1), first_moment=mpf(1), exceptional_fraction=0.0,
                            saturated=True, precision_digits=30, wall_ms=5)

    monkeypatch.setattr(cli_main, "moment_report", saturated)
    code, out, _ = invoke(capsys, "moment1", "--n", "2000", "--no-timing")
    assert code == 2
    header, row = lines(out)
    assert header == MOMENT_HEADER
    assert row == "2000,44,1048576,1.0,1.0,1.0,1.0,0"


@pytest.fixture
def tiny_auto_limit(monkeypatch):
    monkeypatch.setattr(series, "AUTO_Q_START", 50)
    monkeypatch.setattr(series, "AUTO_Q_LIMIT", 100)


def test_saturated_singular_writes_partial_row(capsys, tiny_auto_limit):
    code, out, _ = invoke(capsys, "singular", "--x", "100000", "--h", "1", "--rel-tol", "1e-12")
    assert code == 2
    header, row = lines(out)
    assert header == "x,h,q_max,value,tail_estimate"
    assert row.split(",")[2] == "100"


def test_saturated_delta_writes_partial_row(capsys, tiny_auto_limit):
    code, out, _ = invoke(capsys, "delta", "--n", "2000", "--h", "1", "--rel-tol", "1e-12")
    assert code == 2
    header, row = lines(out)
    assert header == "N,h,q_max,D,main_term,delta"
    N, h, q_max, D, main, delta = row.split(",")
    assert (N, h, q_max) == ("2000", "1", "100")
    assert int(D) == sum(dk_value(3, n) * dk_value(3, n + 1) for n in range(2001, 4001))
    with mpmath.workdps(30):
        assert abs(mpf(D) - mpf(main) - mpf(delta)) < mpf("1e-10") * abs(mpf(main))
