"""
Command-line front end: flag parsing, table emission, exit codes, and the
stdout/stderr split.
"""

import csv
import io
import json
import math

import numpy as np
import pytest
from click.testing import CliRunner

from pauliwalk import cli, walks, zoo
from pauliwalk.channels import analyze, as_affine, parse_channel_spec

DEPOL = '{"type": "named", "name": "depolarizing", "params": {"p": 0.5}}'
MARKOV = '{"type": "named", "name": "markov", "params": {"p": 0.3, "q": 0.6}}'
AMP = '{"type": "named", "name": "amplitude_damping", "params": {"p": 0.5}}'
PHASE = '{"type": "named", "name": "phase_damping", "params": {"p": 0.4}}'
KRSW_NONCP = '{"type": "krsw", "lambda": [1.0, 1.0, -1.0], "t": [0.0, 0.0, 0.0]}'
AFF_IDENTITY = '{"type": "affine", "T": [[1,0,0],[0,1,0],[0,0,1]], "t": [0,0,0]}'
AFF_SHIFT = '{"type": "affine", "T": [[0.3,0,0],[0,0.3,0],[0,0,0.3]], "t": [0.2,0.3,0.1]}'


def run(*args):
    return CliRunner().invoke(cli.main, args, catch_exceptions=False)


def rows_of(result):
    table = list(csv.reader(io.StringIO(result.stdout)))
    return table[0], table[1:]


def keyed(result):
    header, rows = rows_of(result)
    assert header == ["key", "value"]
    return {key: value for key, value in rows}


class TestRunConfig:
    def test_rejects_nonpositive_n(self):
        with pytest.raises(ValueError):
            cli.RunConfig(command="dist", channel_spec={}, n=(0,))

    def test_rejects_bad_grids(self):
        with pytest.raises(ValueError):
            cli.RunConfig(command="ldp", channel_spec={}, x_grid=())
        with pytest.raises(ValueError):
            cli.RunConfig(command="ldp", channel_spec={}, x_grid=(0.2, 0.2))
        with pytest.raises(ValueError):
            cli.RunConfig(command="lambda", channel_spec={}, t_grid=(1.0, 0.5))
        with pytest.raises(ValueError):
            cli.RunConfig(command="lambda", channel_spec={}, t_grid=(0.0, math.inf))

    def test_rejects_unknown_format(self):
        with pytest.raises(ValueError):
            cli.RunConfig(command="dist", channel_spec={}, format="yaml")


class TestChannelCommands:
    def test_show_prints_affine_table(self):
        result = run("channel", "show", "--channel", DEPOL)
        assert result.exit_code == 0
        header, rows = rows_of(result)
        assert header == ["row", "T1", "T2", "T3", "t"]
        assert len(rows) == 3
        diag = [float(rows[i][1 + i]) for i in range(3)]
        assert diag == pytest.approx([1.0 / 3.0] * 3)
        assert all(float(r[4]) == 0.0 for r in rows)

    def test_show_json_round_trips(self):
        for spec in (DEPOL, MARKOV, AMP, PHASE, KRSW_NONCP, AFF_SHIFT):
            result = run("channel", "show", "--channel", spec, "--format", "json")
            assert result.exit_code == 0
            record = json.loads(result.stdout)
            original = as_affine(parse_channel_spec(json.loads(spec)))
            reparsed = as_affine(parse_channel_spec(record))
            assert np.allclose(reparsed.T_lin, original.T_lin, atol=1e-14)
            assert np.allclose(reparsed.t_vec, original.t_vec, atol=1e-14)

    def test_check_cp_verdicts(self):
        good = keyed(run("channel", "check-cp", "--channel", DEPOL))
        assert good["cp"] == "true"
        result = run("channel", "check-cp", "--channel", KRSW_NONCP)
        assert result.exit_code == 0
        bad = keyed(result)
        assert bad["cp"] == "false"
        assert bad["applicable"] == "true"
        assert (bad["cond1"], bad["cond2"], bad["cond3"]) == ("false", "true", "false")
        assert float(bad["choi_eig_4"]) == pytest.approx(-1.0)

    def test_check_cp_condition_rows_only_for_krsw(self):
        table = keyed(run("channel", "check-cp", "--channel", DEPOL))
        assert "applicable" not in table
        assert "cond1" not in table
        assert sorted(table) == [f"choi_eig_{i}" for i in range(1, 5)] + ["cp"]

    def test_fixpoint_unique(self):
        table = keyed(run("channel", "fixpoint", "--channel", DEPOL))
        assert float(table["v_1"]) == pytest.approx(0.0, abs=1e-12)
        assert float(table["v_3"]) == pytest.approx(0.0, abs=1e-12)
        assert float(table["rho_00_re"]) == pytest.approx(0.5, abs=1e-12)

    def test_fixpoint_non_unique_needs_initial_state(self):
        result = run("channel", "fixpoint", "--channel", PHASE)
        assert result.exit_code == 3
        assert result.stdout == ""
        assert result.stderr.startswith("error:")

    def test_fixpoint_non_unique_resolved_by_initial_state(self):
        result = run(
            "channel", "fixpoint", "--channel", PHASE, "--initial-state", "0.1,0,0.25"
        )
        assert result.exit_code == 0
        table = keyed(result)
        assert float(table["v_3"]) == pytest.approx(0.25, abs=1e-12)
        assert float(table["v_1"]) == pytest.approx(0.0, abs=1e-12)

    def test_analyze_fields(self):
        table = keyed(run("channel", "analyze", "--channel", AMP))
        assert float(table["v_3"]) == pytest.approx(1.0, abs=1e-10)
        assert float(table["C_33"]) == pytest.approx(0.0, abs=1e-10)
        assert float(table["C_11"]) == pytest.approx(1.0, abs=1e-10)
        assert float(table["spectral_radius"]) == pytest.approx(
            math.sqrt(0.5), abs=1e-7
        )
        assert table["assumption_a"] == "HoldsGeometric"

    def test_analyze_depolarizing_is_unital(self):
        table = keyed(run("channel", "analyze", "--channel", DEPOL))
        for a in range(1, 4):
            for b in range(1, 4):
                want = 1.0 if a == b else 0.0
                assert float(table[f"C_{a}{b}"]) == pytest.approx(want, abs=1e-12)

    def test_malformed_specs_exit_2(self):
        for bad in (
            '{"type": "named", "name": "nosuch", "params": {}}',
            '{"type": "affine", "T": [[1,0],[0,1]], "t": [0,0,0]}',
            '{"type": "wat"}',
            '{"no": "type"}',
            '{broken json',
            "no/such/file.json",
            "[1, 2, 3]",
        ):
            result = run("channel", "show", "--channel", bad)
            assert result.exit_code == 2, bad
            assert result.stdout == ""
            assert result.stderr.startswith("error:")

    def test_initial_state_outside_ball_exit_2(self):
        result = run(
            "channel", "fixpoint", "--channel", PHASE, "--initial-state", "0,0,1.5"
        )
        assert result.exit_code == 2
        assert result.stderr.startswith("error:")


class TestDist:
    def test_fair_coin_rows(self):
        result = run(
            "dist", "--channel", AFF_IDENTITY, "--initial-state", "0,0,0",
            "--nu", "0,0,1", "--n", "2",
        )
        assert result.exit_code == 0
        header, rows = rows_of(result)
        assert header == ["value", "probability"]
        assert [(float(v), float(p)) for v, p in rows] == [
            (-2.0, 0.25), (0.0, 0.5), (2.0, 0.25),
        ]

    def test_probabilities_round_trip_through_text(self):
        result = run("dist", "--channel", MARKOV, "--nu", "1,0,0", "--n", "12")
        header, rows = rows_of(result)
        entry = zoo.markov_chain(0.3, 0.6)
        ana = analyze(entry.channel)
        spec = walks.WalkSpec(entry.channel, ana.rho_inf, 12)
        law = walks.site_laws(
            spec, walks.Direction([1.0, 0.0, 0.0]), walks.Window(0.0, 1.0)
        )
        dist = walks.exact_distribution(law)
        assert [float(v) for v, _ in rows] == list(dist.values())
        assert [float(p) for _, p in rows] == list(dist.weights)

    def test_non_unique_fixed_point_exits_3(self):
        result = run("dist", "--channel", PHASE, "--nu", "0,0,1", "--n", "4")
        assert result.exit_code == 3


class TestClt:
    def test_ks_column_decreases(self):
        result = run("clt", "--channel", DEPOL, "--nu", "1,1,1", "--n", "256,1024")
        assert result.exit_code == 0
        header, rows = rows_of(result)
        assert header == ["n", "ks_distance", "target_variance"]
        assert [int(r[0]) for r in rows] == [256, 1024]
        ks = [float(r[1]) for r in rows]
        assert ks[1] < ks[0]
        assert all(float(r[2]) == pytest.approx(1.0, abs=1e-12) for r in rows)

    def test_degenerate_direction_warns_and_exits_0(self):
        result = run("clt", "--channel", AMP, "--nu", "0,0,1", "--n", "64")
        assert result.exit_code == 0
        _, rows = rows_of(result)
        assert math.isnan(float(rows[0][1]))
        assert "degenerate" in result.stderr


class TestLdp:
    def test_rows_follow_grid_order(self):
        result = run(
            "ldp", "--channel", MARKOV, "--nu", "1,0,0", "--n", "400",
            "--x-grid", "0.96,0.97,0.98",
        )
        assert result.exit_code == 0
        header, rows = rows_of(result)
        assert header == ["x", "empirical_rate", "limit_rate"]
        assert [float(r[0]) for r in rows] == [0.96, 0.97, 0.98]
        limits = [float(r[2]) for r in rows]
        assert limits == sorted(limits)

    def test_degenerate_direction_exits_4(self):
        result = run(
            "ldp", "--channel", AMP, "--nu", "0,0,1", "--n", "100", "--x-grid", "0.5"
        )
        assert result.exit_code == 4
        assert result.stderr.startswith("error:")

    def test_saturated_threshold_exits_2(self):
        result = run(
            "ldp", "--channel", MARKOV, "--nu", "1,0,0", "--n", "100", "--x-grid", "1.2"
        )
        assert result.exit_code == 2


class TestLambda:
    def test_grid_syntax_inclusive(self):
        result = run(
            "lambda", "--channel", MARKOV, "--nu", "1,0,0", "--n", "64",
            "--t-grid", "-1:1:0.5",
        )
        assert result.exit_code == 0
        header, rows = rows_of(result)
        assert header == ["t", "lambda_n", "lambda_limit"]
        assert [float(r[0]) for r in rows] == [-1.0, -0.5, 0.0, 0.5, 1.0]
        gaps = [abs(float(r[1]) - float(r[2])) for r in rows]
        assert max(gaps) < 1e-12

    def test_single_t(self):
        result = run(
            "lambda", "--channel", MARKOV, "--nu", "1,0,0", "--n", "64", "--t", "0.5"
        )
        assert result.exit_code == 0
        _, rows = rows_of(result)
        assert len(rows) == 1
        assert float(rows[0][0]) == 0.5

    def test_exactly_one_of_t_and_t_grid(self):
        both = run(
            "lambda", "--channel", MARKOV, "--nu", "1,0,0", "--n", "64",
            "--t", "0.5", "--t-grid", "0:1:0.5",
        )
        assert both.exit_code == 2
        neither = run("lambda", "--channel", MARKOV, "--nu", "1,0,0", "--n", "64")
        assert neither.exit_code == 2


class TestMoments:
    def test_ordered_xy_matches_library(self):
        result = run("moments", "--channel", AFF_SHIFT, "--word", "XY", "--n", "20")
        assert result.exit_code == 0
        header, rows = rows_of(result)
        assert header == ["word", "n", "re", "im", "limit_re", "limit_im"]
        word, n, re, im, lre, lim = rows[0]
        assert (word, int(n)) == ("XY", 20)
        ana = analyze(parse_channel_spec(json.loads(AFF_SHIFT)))
        v = ana.v.as_array()
        assert float(lre) == pytest.approx(float(ana.covariance[0, 1]), rel=1e-12)
        assert float(lim) == pytest.approx(v[2], rel=1e-12)
        assert float(re) == pytest.approx(-v[0] * v[1], abs=1e-12)
        assert float(im) == pytest.approx(v[2], abs=1e-12)

    def test_windowed_word_cell_is_quoted(self):
        result = run(
            "moments", "--channel", MARKOV, "--word", "X@0:0.5,Y@0:0.5", "--n", "40"
        )
        assert result.exit_code == 0
        assert '"X@0:0.5,Y@0:0.5"' in result.stdout

    def test_multiple_words_keep_input_order(self):
        result = run(
            "moments", "--channel", MARKOV, "--word", "ZZ", "--word", "XX", "--n", "8"
        )
        _, rows = rows_of(result)
        assert [r[0] for r in rows] == ["ZZ", "XX"]

    def test_symmetrized_drops_imaginary_part(self):
        result = run(
            "moments", "--channel", AFF_SHIFT, "--word", "XY", "--n", "20",
            "--symmetrized",
        )
        _, rows = rows_of(result)
        assert float(rows[0][3]) == 0.0
        assert float(rows[0][5]) == 0.0

    def test_ordered_degree_three_limit_is_nan(self):
        result = run("moments", "--channel", MARKOV, "--word", "XYZ", "--n", "8")
        assert result.exit_code == 0
        _, rows = rows_of(result)
        assert math.isnan(float(rows[0][4]))
        assert math.isnan(float(rows[0][5]))

    def test_ordered_off_grid_window_exits_2(self):
        result = run("moments", "--channel", MARKOV, "--word", "X@0:0.3", "--n", "8")
        assert result.exit_code == 2

    def test_symmetrized_off_grid_window_is_fine(self):
        result = run(
            "moments", "--channel", MARKOV, "--word", "X@0:0.3,X@0:0.3", "--n", "8",
            "--symmetrized",
        )
        assert result.exit_code == 0

    def test_degree_overflow_exits_5(self):
        ordered = run("moments", "--channel", MARKOV, "--word", "X" * 9, "--n", "8")
        assert ordered.exit_code == 5
        sym = run(
            "moments", "--channel", MARKOV, "--word", "X" * 7, "--n", "8",
            "--symmetrized",
        )
        assert sym.exit_code == 5

    def test_bad_word_letter_exits_2(self):
        result = run("moments", "--channel", MARKOV, "--word", "XQ", "--n", "8")
        assert result.exit_code == 2


class TestOutputPlumbing:
    def test_out_file_gets_crlf_and_stdout_stays_empty(self, tmp_path):
        path = tmp_path / "table.csv"
        result = run(
            "dist", "--channel", AFF_IDENTITY, "--initial-state", "0,0,0",
            "--nu", "0,0,1", "--n", "2", "--out", str(path),
        )
        assert result.exit_code == 0
        assert result.stdout == ""
        raw = path.read_bytes()
        assert raw.count(b"\r\n") == 4
        assert b"value,probability\r\n" in raw

    def test_json_format_is_row_objects(self):
        result = run(
            "dist", "--channel", AFF_IDENTITY, "--initial-state", "0,0,0",
            "--nu", "0,0,1", "--n", "2", "--format", "json",
        )
        assert result.exit_code == 0
        rows = json.loads(result.stdout)
        assert rows == [
            {"value": -2.0, "probability": 0.25},
            {"value": 0.0, "probability": 0.5},
            {"value": 2.0, "probability": 0.25},
        ]

    def test_unknown_format_exits_2(self):
        result = run(
            "dist", "--channel", AFF_IDENTITY, "--initial-state", "0,0,0",
            "--nu", "0,0,1", "--n", "2", "--format", "yaml",
        )
        assert result.exit_code == 2

    def test_direct_command_functions_return_tables(self):
        config = cli.RunConfig(
            command="clt",
            channel_spec=json.loads(DEPOL),
            nu=(1.0, 1.0, 1.0),
            n=(64,),
            t_grid=(1.0,),
        )
        columns, rows, payload = cli.cmd_clt(config)
        assert columns == ("n", "ks_distance", "target_variance")
        assert payload is None
        assert rows[0][0] == 64
