import argparse
import csv
import math

import numpy as np
import pytest

import oracles
from overlap_forge import (InnerProduct, OrthoPrepProblem, PriorPair,
                           beta_lower_bound, p_at_beta_min, solve_general)
from overlap_forge.cli import detect_regime, fmt, main, parse_phase
from overlap_forge.orthogonal import optimal

WORKED = ["--alpha-mod", "0.3", "--beta-mod", "0.5", "--beta-phase", "0.6pi",
          "--gamma-mod", "1", "--gamma-phase", "1.1pi", "--eta1", "0.65"]


def run_cli(argv, capsys):
    rc = main(argv)
    captured = capsys.readouterr()
    return rc, captured.out, captured.err


def kv(stdout):
    return dict(line.split(" = ", 1)
                for line in stdout.strip().splitlines() if " = " in line)


class TestParsePhase:
    def test_pi_multiples(self):
        assert parse_phase("0.6pi") == pytest.approx(0.6 * math.pi)
        assert parse_phase("-0.75pi") == pytest.approx(-0.75 * math.pi)

    def test_bare_pi_forms(self):
        assert parse_phase("pi") == math.pi
        assert parse_phase("+pi") == math.pi
        assert parse_phase("-pi") == -math.pi
        assert parse_phase("PI") == math.pi

    def test_plain_radians(self):
        assert parse_phase("1.45") == 1.45
        assert parse_phase("0") == 0.0
        assert parse_phase("-2e-3") == -2e-3

    def test_garbage_rejected(self):
        with pytest.raises(argparse.ArgumentTypeError):
            parse_phase("abc")
        with pytest.raises(argparse.ArgumentTypeError):
            parse_phase("1.2.3pi")


class TestDetectRegime:
    def test_zero_modulus_routes_orthogonal(self):
        assert detect_regime(0.0, (0.0, 0.0, 0.0)) == "orthogonal"

    def test_half_turn_phases_route_real(self):
        assert detect_regime(0.5, (0.0, math.pi, -math.pi)) == "real"
        assert detect_regime(0.5, (2 * math.pi, 0.0, math.pi)) == "real"

    def test_generic_phases_route_general(self):
        assert detect_regime(0.5, (0.0, 0.6 * math.pi, 1.1 * math.pi)) == "general"


class TestSolveCommand:
    def test_worked_example(self, capsys):
        rc, out, _ = run_cli(["solve"] + WORKED, capsys)
        d = kv(out)
        assert rc == 0
        assert d["regime"] == "general"
        assert d["feasible"] == "yes"
        assert d["ordering"] == "alpha-smallest"
        assert d["assignment"] == "plus-minus"
        assert float(d["p_beta"]) == pytest.approx(0.6081652817902656, abs=1e-9)
        assert d["posterior_eta1"] == "0.978388035337"
        assert d["sign_flip_beta"] == "yes"
        assert d["sign_flip_gamma"] == "yes"

    def test_negative_phase_equals_form(self, capsys):
        rc, out, _ = run_cli(
            ["solve", "--alpha-mod", "0.3", "--beta-mod", "0.5",
             "--beta-phase=-0.6pi", "--gamma-mod", "1",
             "--gamma-phase=-1.1pi", "--eta1", "0.65"], capsys)
        d = kv(out)
        assert rc == 0
        # mirrored phases give the mirrored solution with the same weights
        assert float(d["p_beta"]) == pytest.approx(0.6081652817902656, abs=1e-9)

    def test_infeasible_exit_code(self, capsys):
        rc, out, _ = run_cli(
            ["solve", "--alpha-mod", "0.9", "--beta-mod", "0.3",
             "--beta-phase", "0.6pi", "--gamma-mod", "0.5",
             "--gamma-phase", "1.1pi"], capsys)
        d = kv(out)
        assert rc == 2
        assert d["feasible"] == "no"
        assert "diagnostic" in d

    def test_orthogonal_regime(self, capsys):
        rc, out, _ = run_cli(
            ["solve", "--alpha-mod", "0", "--beta-mod", "0.2",
             "--gamma-mod", "1", "--eta1", "0.25"], capsys)
        d = kv(out)
        assert rc == 0
        assert d["regime"] == "orthogonal"
        assert d["regime_tag"] == "interior-max"
        assert float(d["p1"]) == pytest.approx(0.6808227484231506, abs=1e-9)
        assert float(d["p_beta"]) == pytest.approx(0.8612447075449087, abs=1e-9)

    def test_orthogonal_fixed_p1(self, capsys):
        rc, out, _ = run_cli(
            ["solve", "--alpha-mod", "0", "--beta-mod", "0.2",
             "--gamma-mod", "1", "--eta1", "0.25", "--p1", "0.5"], capsys)
        d = kv(out)
        assert rc == 0
        assert float(d["p1"]) == 0.5
        assert "regime_tag" not in d

    def test_real_regime(self, capsys):
        rc, out, _ = run_cli(
            ["solve", "--alpha-mod", repr(1.0 / 3.0), "--beta-mod",
             repr(1.0 / 6.0), "--gamma-mod", repr(2.0 / 3.0)], capsys)
        d = kv(out)
        assert rc == 0
        assert d["regime"] == "real"
        assert d["swapped"] == "no"
        assert float(d["interval_hi"]) == pytest.approx(0.8, abs=1e-9)
        assert float(d["p_beta"]) == pytest.approx(2.0 / 3.0, abs=1e-6)

    def test_general_rejects_fixed_p1(self, capsys):
        rc, out, _ = run_cli(["solve"] + WORKED + ["--p1", "0.5"], capsys)
        assert rc == 2
        assert "feasible = no" in out

    def test_forced_regime_mismatch(self, capsys):
        rc, out, _ = run_cli(
            ["solve"] + WORKED + ["--regime", "orthogonal"], capsys)
        assert rc == 2
        rc, out, _ = run_cli(["solve"] + WORKED + ["--regime", "real"], capsys)
        assert rc == 2

    def test_forced_matches_auto(self, capsys):
        rng = np.random.default_rng(601)
        for _ in range(3):
            p = oracles.random_feasible_general(rng)
            argv = ["solve", "--alpha-mod", repr(p.alpha.modulus),
                    "--alpha-phase", repr(p.alpha.phase),
                    "--beta-mod", repr(p.beta.modulus),
                    "--beta-phase", repr(p.beta.phase),
                    "--gamma-mod", repr(p.gamma.modulus),
                    "--gamma-phase", repr(p.gamma.phase),
                    "--eta1", repr(p.priors.eta1)]
            rc_a, out_a, _ = run_cli(argv, capsys)
            rc_f, out_f, _ = run_cli(argv + ["--regime", "general"], capsys)
            assert rc_a == rc_f == 0
            assert out_a == out_f

    def test_missing_argument_exits_one(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["solve", "--alpha-mod", "0.3"])
        assert exc.value.code == 1

    def test_unknown_command_exits_one(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["frobnicate"])
        assert exc.value.code == 1


class TestSweepCommand:
    def test_fig2_schema_and_values(self, capsys, tmp_path):
        out_csv = tmp_path / "fig2.csv"
        rc, out, _ = run_cli(["sweep", "--figure", "fig2", "--resolution",
                              "50", "--out", str(out_csv)], capsys)
        assert rc == 0
        assert "wrote 200 rows" in out
        with open(out_csv, newline="") as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == ["ratio", "eta1", "p_max"]
        assert len(rows) == 201
        first = rows[1]
        assert first[0] == "0.02"
        want = optimal(OrthoPrepProblem(0.02, 1.0, PriorPair(0.125, 0.875)))
        assert first[2] == fmt(want.p_beta)

    def test_fig1a_skips_forbidden_phase(self, capsys, tmp_path):
        out_csv = tmp_path / "fig1a.csv"
        rc, out, _ = run_cli(["sweep", "--figure", "fig1a", "--resolution",
                              "9", "--out", str(out_csv)], capsys)
        assert rc == 0
        assert "wrote 32 rows" in out
        with open(out_csv, newline="") as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == ["theta_over_pi", "alpha", "beta_min"]
        assert all(row[0] != "0.5" for row in rows[1:])

    def test_fig4_bound_endpoint_matches_closed_form(self, capsys, tmp_path):
        out_csv = tmp_path / "fig4.csv"
        rc, out, _ = run_cli(["sweep", "--figure", "fig4", "--resolution",
                              "5", "--out", str(out_csv)], capsys)
        assert rc == 0
        assert "wrote 30 rows" in out
        with open(out_csv, newline="") as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == ["beta_mod", "f", "p_beta_plus", "p_usd",
                           "p_at_beta_min"]
        usd_cell = fmt(1.0 - 1.0 / math.sqrt(3.0))
        assert all(row[3] == usd_cell for row in rows[1:])
        # at the left endpoint of each factor block the swept probability
        # sits exactly on the closed-form value
        for i in range(6):
            first = rows[1 + 5 * i]
            assert float(first[2]) == pytest.approx(float(first[4]), abs=1e-9)

    def test_fig3_schema(self, capsys, tmp_path):
        out_csv = tmp_path / "fig3a.csv"
        rc, out, _ = run_cli(["sweep", "--figure", "fig3a", "--resolution",
                              "4", "--out", str(out_csv)], capsys)
        assert rc == 0
        assert "wrote 12 rows" in out
        with open(out_csv, newline="") as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == ["p1", "eta1", "p_beta_plus"]

    def test_fig1b_schema(self, capsys, tmp_path):
        out_csv = tmp_path / "fig1b.csv"
        rc, out, _ = run_cli(["sweep", "--figure", "fig1b", "--resolution",
                              "3", "--out", str(out_csv)], capsys)
        assert rc == 0
        assert "wrote 18 rows" in out
        with open(out_csv, newline="") as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == ["beta_mod", "alpha", "eta_gap", "p_beta_plus"]

    def test_byte_stable(self, capsys, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        run_cli(["sweep", "--figure", "fig2", "--resolution", "25",
                 "--out", str(a)], capsys)
        run_cli(["sweep", "--figure", "fig2", "--resolution", "25",
                 "--out", str(b)], capsys)
        assert a.read_bytes() == b.read_bytes()

    def test_unwritable_path_exits_three(self, capsys, tmp_path):
        rc, _, err = run_cli(["sweep", "--figure", "fig2", "--resolution",
                              "5", "--out",
                              str(tmp_path / "no-such-dir" / "x.csv")], capsys)
        assert rc == 3
        assert "cannot write" in err

    def test_bad_resolution_exits_one(self, capsys):
        rc, _, err = run_cli(["sweep", "--figure", "fig2", "--resolution",
                              "1", "--out", "x.csv"], capsys)
        assert rc == 1
        assert "resolution" in err


class TestSimulateCommand:
    def test_worked_example_deterministic(self, capsys):
        argv = ["simulate"] + WORKED + ["--shots", "20000", "--seed", "7"]
        rc1, out1, _ = run_cli(argv, capsys)
        rc2, out2, _ = run_cli(argv, capsys)
        assert rc1 == rc2 == 0
        assert out1 == out2
        d = kv(out1)
        assert d["regime"] == "general"
        assert d["verified"] == "yes"
        assert d["within_envelope"] == "yes"
        assert d["seed"] == "7"

    def test_counts_csv(self, capsys, tmp_path):
        out_csv = tmp_path / "counts.csv"
        rc, out, _ = run_cli(["simulate"] + WORKED +
                             ["--shots", "5000", "--seed", "3",
                              "--out", str(out_csv)], capsys)
        assert rc == 0
        with open(out_csv, newline="") as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == ["input", "outcome", "count"]
        assert len(rows) == 5
        assert sum(int(r[2]) for r in rows[1:]) == 5000

    def test_seed_from_environment(self, capsys, monkeypatch):
        monkeypatch.setenv("OVERLAP_FORGE_SEED", "123")
        rc, out, _ = run_cli(["simulate"] + WORKED + ["--shots", "1000"],
                             capsys)
        assert rc == 0
        assert kv(out)["seed"] == "123"

    def test_explicit_seed_wins_over_env(self, capsys, monkeypatch):
        monkeypatch.setenv("OVERLAP_FORGE_SEED", "123")
        rc, out, _ = run_cli(["simulate"] + WORKED +
                             ["--shots", "1000", "--seed", "0x10"], capsys)
        assert rc == 0
        assert kv(out)["seed"] == "16"

    def test_missing_seed_exits_one(self, capsys, monkeypatch):
        monkeypatch.delenv("OVERLAP_FORGE_SEED", raising=False)
        rc, _, err = run_cli(["simulate"] + WORKED + ["--shots", "1000"],
                             capsys)
        assert rc == 1
        assert "OVERLAP_FORGE_SEED" in err

    def test_bad_env_seed_exits_one(self, capsys, monkeypatch):
        monkeypatch.setenv("OVERLAP_FORGE_SEED", "not-a-number")
        rc, _, err = run_cli(["simulate"] + WORKED + ["--shots", "1000"],
                             capsys)
        assert rc == 1

    def test_nonpositive_shots_exits_one(self, capsys):
        rc, _, err = run_cli(["simulate"] + WORKED +
                             ["--shots", "0", "--seed", "1"], capsys)
        assert rc == 1

    def test_infeasible_exits_two(self, capsys):
        rc, out, _ = run_cli(
            ["simulate", "--alpha-mod", "0.9", "--beta-mod", "0.3",
             "--beta-phase", "0.6pi", "--gamma-mod", "0.5",
             "--gamma-phase", "1.1pi", "--shots", "100", "--seed", "1"],
            capsys)
        assert rc == 2
        assert "feasible = no" in out

    def test_boundary_posterior_zero(self, capsys):
        rc, out, _ = run_cli(
            ["simulate", "--alpha-mod", "0", "--beta-mod", "0.8",
             "--gamma-mod", "1", "--eta1", "0.25", "--shots", "5000",
             "--seed", "11"], capsys)
        d = kv(out)
        assert rc == 0
        assert d["count_input1_success"] == "0"
        assert float(d["posterior_eta1_exact"]) == 0.0
        assert float(d["empirical_posterior_eta1"]) == 0.0


class TestUsdCommand:
    def test_symmetric_value(self, capsys):
        rc, out, _ = run_cli(["usd", "--alpha-mod", "0.5"], capsys)
        d = kv(out)
        assert rc == 0
        assert d["p_usd"] == "0.5"
        assert d["valid"] == "yes"

    def test_skewed_priors(self, capsys):
        rc, out, _ = run_cli(["usd", "--alpha-mod", "0.5", "--eta1", "0.9"],
                             capsys)
        d = kv(out)
        assert rc == 0
        want = 1.0 - 2.0 * math.sqrt(0.9 * 0.1) * 0.5
        assert float(d["p_usd"]) == pytest.approx(want, abs=1e-12)


class TestBoundCommand:
    def test_reference_bound(self, capsys):
        rc, out, _ = run_cli(["bound", "--alpha-mod", "0.3", "--beta-phase",
                              "0.6pi"], capsys)
        d = kv(out)
        assert rc == 0
        assert float(d["beta_min"]) == pytest.approx(0.12971498197222095,
                                                     abs=1e-9)
        alpha = InnerProduct(0.3, 0.0)
        want = p_at_beta_min(alpha, -0.6 * math.pi)
        assert float(d["p_at_beta_min"]) == pytest.approx(want, abs=1e-9)

    def test_probability_line_only_for_equal_priors(self, capsys):
        rc, out, _ = run_cli(["bound", "--alpha-mod", "0.3", "--beta-phase",
                              "0.6pi", "--eta1", "0.3"], capsys)
        assert rc == 0
        assert "p_at_beta_min" not in out

    def test_forbidden_phase_exits_two(self, capsys):
        rc, _, err = run_cli(["bound", "--alpha-mod", "0.3", "--beta-phase",
                              "0.5pi"], capsys)
        assert rc == 2
        assert "error" in err


class TestCloneCommand:
    def test_reference_witness(self, capsys):
        rc, out, _ = run_cli(["clone", "--alpha-mod", "0.5", "--alpha-phase",
                              "1.45"], capsys)
        d = kv(out)
        assert rc == 0
        assert d["m"] == "1"
        assert d["ordering"] == "alpha-middle"
        assert d["independent"] == "yes"
        assert d["feasible"] == "yes"
        assert float(d["p_beta"]) == pytest.approx(0.405856949529, abs=1e-9)

    def test_phase_collision_reported(self, capsys):
        rc, out, _ = run_cli(["clone", "--alpha-mod", "0.5"], capsys)
        d = kv(out)
        assert rc == 2
        assert d["independent"] == "no"
        assert d["feasible"] == "no"

    def test_optimize_phases_line(self, capsys):
        rc, out, _ = run_cli(["clone", "--alpha-mod", "0.5", "--alpha-phase",
                              "1.45", "--optimize-phases"], capsys)
        d = kv(out)
        assert rc == 0
        assert float(d["optimal_phase_probability"]) == pytest.approx(
            0.6613057432336487, abs=1e-9)

    def test_identical_inputs_exit_two(self, capsys):
        rc, _, err = run_cli(["clone", "--alpha-mod", "1.0"], capsys)
        assert rc == 2
