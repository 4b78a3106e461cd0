import math

import numpy as np
import pytest

from fracriccati import cli


def run(capsys, argv):
    rc = cli.main(argv)
    out = capsys.readouterr()
    return rc, out.out, out.err


def parse_table(text):
    lines = [ln for ln in text.strip().split("\n")]
    assert lines[0].startswith("# ")
    header = lines[0][2:].split(",")
    rows = [ln.split(",") for ln in lines[1:]]
    return header, rows


class TestGridParsing:
    def test_bad_grid_exits_2(self, capsys):
        rc, _, _ = run(capsys, ["fracderiv", "--beta", "0.5", "--power", "1",
                                "--grid", "nope"])
        assert rc == 2

    def test_missing_function_exits_2(self, capsys):
        rc, _, _ = run(capsys, ["fracderiv", "--beta", "0.5", "--grid", "1:2:4"])
        assert rc == 2

    def test_bad_beta_exits_2(self, capsys):
        rc, _, err = run(capsys, ["fracderiv", "--beta", "2.5", "--power", "1",
                                  "--grid", "1:2:4"])
        assert rc == 2 and "beta" in err


class TestFracderiv:
    def test_lacroix_oracle_column(self, capsys):
        rc, out, _ = run(capsys, ["fracderiv", "--beta", "0.5", "--power", "1",
                                  "--grid", "0.25:4:4"])
        assert rc == 0
        header, rows = parse_table(out)
        assert header == ["x", "numeric", "oracle", "abs_err"]
        assert len(rows) == 4
        for row in rows:
            x = float(row[0])
            assert float(row[2]) == pytest.approx(2.0 * math.sqrt(x) / math.sqrt(math.pi), rel=1e-12)
            assert float(row[3]) < 1e-6

    def test_identity_operator(self, capsys):
        rc, out, _ = run(capsys, ["fracderiv", "--beta", "0", "--builtin", "sin",
                                  "--grid", "1:2:2"])
        assert rc == 0
        header, rows = parse_table(out)
        assert header == ["x", "numeric"]
        for row in rows:
            assert float(row[1]) == pytest.approx(math.sin(float(row[0])), rel=1e-12)

    def test_error_column_small(self, capsys):
        rc, out, _ = run(capsys, ["fracderiv", "--beta", "0.3", "--power", "2.5",
                                  "--grid", "1:2:8"])
        assert rc == 0
        _, rows = parse_table(out)
        assert all(float(row[3]) < 1e-6 for row in rows)

    def test_poly_oracle(self, capsys):
        rc, out, _ = run(capsys, ["fracderiv", "--beta", "0.5",
                                  "--builtin", "poly:0,1", "--grid", "1:1.5:3"])
        assert rc == 0
        _, rows = parse_table(out)
        for row in rows:
            x = float(row[0])
            assert float(row[2]) == pytest.approx(2.0 * math.sqrt(x / math.pi), rel=1e-12)


class TestRiccatiCommand:
    def test_eval_cot(self, capsys):
        rc, out, _ = run(capsys, ["riccati", "eval", "--a", "1", "--b", "-1",
                                  "--delta", "1", "--branch", "1", "--grid", "0.2:3:20"])
        assert rc == 0
        header, rows = parse_table(out)
        assert header == ["x", "u", "pole"]
        assert len(rows) == 20
        for row in rows:
            x = float(row[0])
            assert row[2] == "0"
            assert float(row[1]) == pytest.approx(math.cos(x) / math.sin(x), rel=1e-8)

    def test_eval_marks_pole_rows(self, capsys):
        # branch 2 is -tan: pole at pi/2 inside the grid
        rc, out, _ = run(capsys, ["riccati", "eval", "--a", "1", "--b", "-1",
                                  "--delta", "1", "--branch", "2", "--grid", "0.2:3:20"])
        assert rc == 0
        _, rows = parse_table(out)
        flagged = [row for row in rows if row[2] == "1"]
        assert len(flagged) == 1
        assert flagged[0][1] == "nan"
        assert abs(float(flagged[0][0]) - math.pi / 2.0) <= 0.5 * (2.8 / 19) * 1.001

    def test_poles_output(self, capsys):
        rc, out, _ = run(capsys, ["riccati", "poles", "--a", "1", "--b", "-1",
                                  "--delta", "1", "--branch", "1", "--grid", "0.5:7:2"])
        assert rc == 0
        header, rows = parse_table(out)
        assert header == ["x_pole"]
        got = [float(r[0]) for r in rows]
        assert got == [pytest.approx(math.pi, rel=1e-10),
                       pytest.approx(2.0 * math.pi, rel=1e-10)]

    def test_verify_reports_small_deviation(self, capsys):
        rc, out, _ = run(capsys, ["riccati", "verify", "--a", "1", "--b", "1",
                                  "--delta", "0.5", "--x0", "0.5", "--x1", "1.5",
                                  "--branch", "1"])
        assert rc == 0
        header, rows = parse_table(out)
        vals = dict(zip(header, rows[0]))
        assert float(vals["max_deviation"]) < 1e-6
        assert float(vals["max_residual"]) < 1e-6

    def test_verify_pole_interval_exits_4(self, capsys):
        rc, _, err = run(capsys, ["riccati", "verify", "--a", "1", "--b", "-1",
                                  "--delta", "1", "--x0", "2.5", "--x1", "4.0"])
        assert rc == 4 and "pole" in err

    def test_degenerate_b_exits_2(self, capsys):
        rc, _, err = run(capsys, ["riccati", "eval", "--a", "1", "--b", "0",
                                  "--delta", "1", "--grid", "1:2:4"])
        assert rc == 2 and "degenerate" in err


class TestCosmoCommand:
    def test_hubble_closed(self, capsys):
        rc, out, _ = run(capsys, ["cosmo", "hubble", "--k", "1", "--c", "1",
                                  "--delta", "1", "--grid", "0.1:1.5:15"])
        assert rc == 0
        _, rows = parse_table(out)
        for row in rows:
            eta = float(row[0])
            assert float(row[1]) == pytest.approx(math.cos(eta) / math.sin(eta), rel=1e-8)

    def test_hubble_flat(self, capsys):
        rc, out, _ = run(capsys, ["cosmo", "hubble", "--k", "0", "--c", "1",
                                  "--grid", "1:4:4"])
        assert rc == 0
        _, rows = parse_table(out)
        for row in rows:
            assert float(row[1]) == pytest.approx(1.0 / float(row[0]), rel=1e-12)

    def test_scale_rows(self, capsys):
        rc, out, _ = run(capsys, ["cosmo", "scale", "--k", "1", "--c", "1",
                                  "--delta", "1", "--grid", "0.5:1.5:5",
                                  "--eta-ref", "0.5"])
        assert rc == 0
        header, rows = parse_table(out)
        assert header == ["eta", "R_ratio"]
        for row in rows:
            eta = float(row[0])
            assert float(row[1]) == pytest.approx(math.sin(eta) / math.sin(0.5), rel=1e-9)

    def test_scale_pole_exits_4(self, capsys):
        rc, _, _ = run(capsys, ["cosmo", "scale", "--k", "1", "--c", "1",
                                "--delta", "1", "--grid", "0.5:3.5:5"])
        assert rc == 4

    def test_figure_open_surface(self, capsys):
        rc, out, _ = run(capsys, ["cosmo", "figure", "--k", "-1", "--c", "1",
                                  "--grid", "0.1:3:30", "--delta-grid", "0.2:1:5"])
        assert rc == 0
        header, rows = parse_table(out)
        assert header == ["eta", "delta", "H", "pole"]
        assert len(rows) == 150
        assert all(row[3] == "0" for row in rows)
        assert all(float(row[2]) > 0.0 for row in rows)

    def test_figure_accepts_second_axis_grid(self):
        from fracriccati.grids import GridSpec

        surface = GridSpec(0.1, 2.0, 8, second=GridSpec(0.3, 1.0, 4))
        rows = cli.figure_rows(-1, 1.0, surface)
        assert len(rows) == 32
        with pytest.raises(ValueError):
            cli.figure_rows(-1, 1.0, GridSpec(0.1, 2.0, 8))

    def test_c_zero_exits_5(self, capsys):
        rc, _, _ = run(capsys, ["cosmo", "hubble", "--k", "1", "--gamma",
                                str(2.0 / 3.0), "--grid", "1:2:3"])
        assert rc == 5

    def test_needs_c_or_gamma(self, capsys):
        rc, _, _ = run(capsys, ["cosmo", "hubble", "--k", "1", "--grid", "1:2:3"])
        assert rc == 2


class TestOutputContract:
    def test_determinism_byte_identical(self, tmp_path):
        a = tmp_path / "a.csv"
        b = tmp_path / "b.csv"
        argv = ["cosmo", "figure", "--k", "1", "--c", "1", "--grid", "0.1:3:40",
                "--delta-grid", "0.1:1:6"]
        assert cli.main(argv + ["--out", str(a)]) == 0
        assert cli.main(argv + ["--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_17_digit_round_trip(self, capsys):
        rc, out, _ = run(capsys, ["riccati", "eval", "--a", "1", "--b", "-1",
                                  "--delta", "0.7", "--grid", "0.3:2.7:9"])
        assert rc == 0
        _, rows = parse_table(out)
        for row in rows:
            for tok in row[:2]:
                if tok == "nan":
                    continue
                v = float(tok)
                assert f"{v:.17g}" == tok  # serialization is bit-faithful

    def test_out_file_newlines(self, tmp_path):
        path = tmp_path / "t.csv"
        assert cli.main(["cosmo", "hubble", "--k", "0", "--c", "2",
                         "--grid", "1:2:3", "--out", str(path)]) == 0
        text = path.read_text()
        assert text.endswith("\n") and "\r" not in text
        assert text.splitlines()[0] == "# eta,H,pole"
