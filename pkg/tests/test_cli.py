import json
import subprocess
import sys

import pytest

from primedigits.cli import EXIT_DOMAIN, EXIT_OK, EXIT_RESOURCE, EXIT_USAGE, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def envelope(out):
    env = json.loads(out)
    assert set(env) == {"command", "parameters", "results", "runtime_ms"}
    return env


def test_digit_sum_command(capsys):
    code, out, _ = run(capsys, "digits", "sum", "--n", "127", "--base", "2")
    assert code == EXIT_OK
    env = envelope(out)
    assert env["results"] == {"digit_sum": 7}
    assert env["command"] == "digits sum"


def test_theorem_domain_error(capsys):
    code, out, err = run(capsys, "theorem", "upper", "--base", "2", "--x", "1073741824", "--alpha", "0.8")
    assert code == EXIT_DOMAIN
    assert out == ""
    assert "0.7375" in err


def test_sieve_count(capsys):
    code, out, _ = run(capsys, "sieve", "range", "--lo", "2", "--hi", "30", "--emit", "count")
    assert code == EXIT_OK
    assert envelope(out)["results"] == {"count": 10}


def test_sieve_hist_and_primes_csv(capsys):
    code, out, _ = run(capsys, "--format", "csv", "sieve", "range", "--lo", "2", "--hi", "30", "--emit", "hist")
    assert out.splitlines() == ["digit_sum,count", "1,1", "2,3", "3,4", "4,2"]
    code, out, _ = run(capsys, "sieve", "range", "--lo", "2", "--hi", "30", "--emit", "primes", "--format", "csv")
    assert out == "2\n3\n5\n7\n11\n13\n17\n19\n23\n29\n"


def test_sieve_cap(capsys):
    code, _, err = run(capsys, "sieve", "range", "--lo", "0", "--hi", "2**60")
    assert code == EXIT_RESOURCE
    assert "cap" in err


def test_usage_errors(capsys):
    assert run(capsys, "bogus")[0] == EXIT_USAGE
    assert run(capsys, "digits", "sum", "--n", "3", "--bogus", "1")[0] == EXIT_USAGE
    assert run(capsys, "theorem", "upper", "--x", "100")[0] == EXIT_USAGE


def test_chernoff_commands(capsys):
    _, out, _ = run(capsys, "chernoff", "rate", "--base", "2", "--gamma", "0.5")
    res = envelope(out)["results"]
    assert res["t_star"] == pytest.approx(0.5493, abs=1e-4)
    assert res["rate_star"] == pytest.approx(0.1308, abs=1e-4)
    _, out, _ = run(capsys, "chernoff", "bounds", "--base", "2", "--digits", "20", "--alpha", "0.75")
    res = envelope(out)["results"]
    assert res["exact_proportion"] <= res["refined_bound"] <= res["lemma_bound"]
    assert run(capsys, "chernoff", "rate", "--gamma", "1.5")[0] == EXIT_DOMAIN


def test_chernoff_bounds_omit_exact_above_cap(capsys, monkeypatch):
    monkeypatch.setenv("PRIMEDIGITS_MAX_DIGITS", "10")
    _, out, _ = run(capsys, "chernoff", "bounds", "--digits", "20", "--alpha", "0.75")
    res = envelope(out)["results"]
    assert "exact_proportion" not in res and "refined_bound" in res


def test_theorem_outputs(capsys):
    _, out, _ = run(capsys, "theorem", "upper", "--x", "2**30", "--alpha", "0.7")
    res = envelope(out)["results"]
    assert isinstance(res["qualifying_primes"], str)
    assert int(res["qualifying_primes"]) <= int(res["primes_in_interval"])
    assert res["instance"]["l"] == 18
    _, out, _ = run(capsys, "--format", "csv", "theorem", "lower", "--x", "1e6", "--base", "10", "--beta", "0.4")
    header, row = out.splitlines()
    rec = dict(zip(header.split(","), row.split(",")))
    assert rec["instance.lo"] == "100000" and rec["instance.hi"] == "200000"


def test_survey_problem_one_avg(capsys):
    _, out, _ = run(capsys, "survey", "--limit", "100", "--alpha", "0.5")
    assert envelope(out)["results"]["count"] == "12"
    _, out, _ = run(capsys, "problem-one", "--limit", "10")
    assert envelope(out)["results"]["count"] == "3"
    _, out, _ = run(capsys, "avg", "--limit", "10")
    assert envelope(out)["results"]["mean"] == 2.0


def test_digits_dist_and_tail(capsys):
    _, out, _ = run(capsys, "digits", "dist", "--base", "10", "--digits", "2", "--format", "csv")
    lines = out.splitlines()
    assert lines[0] == "m,count" and lines[10] == "9,10"
    _, out, _ = run(capsys, "digits", "tail", "--digits", "20", "--threshold", "15")
    assert envelope(out)["results"]["tail_count"] == "21700"
    _, out, _ = run(capsys, "digits", "dist", "--digits", "80")
    counts = envelope(out)["results"]["counts"]
    assert all(isinstance(c, str) for c in counts) and int(counts[40]) > 2**64


@pytest.mark.parametrize("argv", [
    ["digits", "sum", "--n", "99", "--base", "10"],
    ["sieve", "range", "--lo", "100", "--hi", "200", "--emit", "hist", "--base", "3"],
    ["theorem", "upper", "--x", "2**26", "--alpha", "0.65", "--margin", "0.01"],
])
def test_round_trip_and_canonical(capsys, argv):
    _, a, _ = run(capsys, "--no-timing", *argv)
    _, b, _ = run(capsys, *argv, "--no-timing")
    assert a == b
    env = envelope(a)
    assert env["runtime_ms"] == 0
    assert json.loads(json.dumps(env["parameters"], sort_keys=True)) == env["parameters"]
    assert list(env["parameters"]) == sorted(env["parameters"])
    assert a == json.dumps(env, sort_keys=True) + "\n"


def test_verify_quick_subprocess():
    proc = subprocess.run(
        [sys.executable, "-m", "primedigits", "--no-timing", "verify", "--level", "quick"],
        capture_output=True, text=True, timeout=300,
    )
    env = json.loads(proc.stdout)
    crit = env["results"]["criteria"]
    assert [c["number"] for c in crit] == list(range(1, 11))
    assert proc.returncode == (0 if env["results"]["all_passed"] else EXIT_DOMAIN)
    assert proc.stderr.count("PASS") + proc.stderr.count("FAIL") == 10
