import csv
import io
import subprocess
import sys

import pytest

from oracles import h2
from wrl import __version__
from wrl.cli import SIMULATE_COLUMNS, main


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def table(text):
    return list(csv.DictReader(io.StringIO(text)))


@pytest.fixture
def fair_file(tmp_path):
    p = tmp_path / "fair.toml"
    p.write_text("alphabet = 2\nprobs = [0.5, 0.5]\n")
    return p


@pytest.fixture
def skewed_file(tmp_path):
    p = tmp_path / "skewed.toml"
    p.write_text("probs = [0.11, 0.89]\n")
    return p


@pytest.fixture
def biased_file(tmp_path):
    p = tmp_path / "biased.toml"
    p.write_text("[biased_example]\nalpha = 0.3\n")
    return p


@pytest.fixture
def independent_file(tmp_path):
    p = tmp_path / "indep.toml"
    p.write_text("nx = 2\nny = 2\nnz = 2\nkernel = [[0.45, 0.45, 0.05, 0.05], [0.05, 0.05, 0.45, 0.45]]\n")
    return p


class TestCapacity:
    def test_unconstrained(self, capsys, bsc_pair_file):
        code, out, err = run(capsys, "capacity", "--channel", bsc_pair_file, "--budget", "inf", "--grid", 200)
        assert code == 0
        row = table(out)[0]
        assert float(row["rate"]) == pytest.approx(0.41229, abs=2e-3)
        assert float(row["rate"]) == pytest.approx(h2(0.3) - h2(0.1), abs=2e-3)
        assert row["constraint_active"] == "0" and row["budget"] == "inf"
        assert "secrecy rate" in err

    def test_zero_budget(self, capsys, bsc_pair_file):
        code, out, _ = run(capsys, "capacity", "--channel", bsc_pair_file, "--budget", 0)
        assert code == 0
        assert float(table(out)[0]["rate"]) == 0.0

    def test_columns(self, capsys, bsc_pair_file):
        _, out, _ = run(capsys, "capacity", "--channel", bsc_pair_file, "--budget", 0.05)
        assert out.splitlines()[0] == (
            "rate,lambda,p_x_given_u0,p_x_given_u1,randomness_used,constraint_active,budget,grid"
        )

    def test_malformed_row_named(self, capsys, tmp_path):
        p = tmp_path / "bad.toml"
        p.write_text("nx = 2\nny = 2\nnz = 2\nkernel = [[0.25, 0.25, 0.25, 0.25], [0.5, 0.5, 0.5, 0.5]]\n")
        code, out, err = run(capsys, "capacity", "--channel", p)
        assert code == 2 and out == ""
        assert "row 2" in err

    def test_syntax_error_has_position(self, capsys, tmp_path):
        p = tmp_path / "bad.toml"
        p.write_text("nx = 2\nny = = 2\n")
        code, _, err = run(capsys, "capacity", "--channel", p)
        assert code == 2
        assert "line 2" in err and "column" in err

    def test_missing_file(self, capsys, tmp_path):
        code, _, err = run(capsys, "capacity", "--channel", tmp_path / "nope.toml")
        assert code == 2 and "nope.toml" in err

    @pytest.mark.parametrize("budget", ["-1", "abc", "nan"])
    def test_bad_budget(self, capsys, bsc_pair_file, budget):
        with pytest.raises(SystemExit) as exc:
            main(["capacity", "--channel", str(bsc_pair_file), "--budget", budget])
        assert exc.value.code == 2


class TestCurve:
    def test_independent_eavesdropper(self, capsys, independent_file):
        code, out, _ = run(capsys, "curve", "--channel", independent_file, "--grid", 20)
        assert code == 0
        rows = table(out)
        assert len(rows) == 21
        assert all(float(r["cost_bits"]) == 0.0 for r in rows)

    def test_envelope_subset(self, capsys, bsc_pair_file, tmp_path):
        out_file = tmp_path / "curve.csv"
        code, out, _ = run(capsys, "curve", "--channel", bsc_pair_file, "--grid", 50, "--out", out_file)
        assert code == 0 and out == ""
        rows = table(out_file.read_text())
        flags = [r["on_envelope"] for r in rows]
        assert set(flags) == {"0", "1"}
        assert flags[0] == "1"

    def test_grid_one_rejected(self, capsys, bsc_pair_file):
        with pytest.raises(SystemExit) as exc:
            main(["curve", "--channel", str(bsc_pair_file), "--grid", "1"])
        assert exc.value.code == 2


class TestSimulate:
    def test_columns_and_rows(self, capsys, bsc_pair_file):
        code, out, _ = run(capsys, "simulate", "--channel", bsc_pair_file, "--n", 4, "--rates", "0,0.25,0.5",
                           "--codebooks", 3, "--seed", 7)
        assert code == 0
        assert out.splitlines()[0] == ",".join(SIMULATE_COLUMNS)
        rows = table(out)
        assert len(rows) == 4
        assert [r["codebooks"] for r in rows] == ["1", "1", "1", "3"]
        assert rows[-1]["seed"] == "7"
        mean = sum(float(r["mean_vd"]) for r in rows[:3]) / 3
        assert float(rows[-1]["mean_vd"]) == pytest.approx(mean, abs=1e-12)

    def test_uniform_high_rate_leakage_falls(self, capsys, bsc_pair_file):
        leak = []
        for n in (4, 6, 8, 10):
            _, out, _ = run(capsys, "simulate", "--channel", bsc_pair_file, "--n", n, "--rates", "0,0.1,0.6",
                            "--codebooks", 30, "--seed", 7)
            leak.append(float(table(out)[-1]["mean_leakage_bits"]))
        assert all(a > b for a, b in zip(leak, leak[1:]))

    def test_biased_source(self, capsys, bsc_pair_file, biased_file):
        code, out, _ = run(capsys, "simulate", "--channel", bsc_pair_file, "--source", biased_file,
                           "--n", 8, "--rates", "0,0.1,0.19", "--codebooks", 20, "--seed", 7)
        assert code == 0
        row = table(out)[-1]
        assert float(row["renyi2_rate"]) < float(row["entropy_rate"])
        assert float(row["mean_vd"]) > 0.1

    def test_source_size_mismatch(self, capsys, bsc_pair_file, fair_file):
        code, _, err = run(capsys, "simulate", "--channel", bsc_pair_file, "--source", fair_file,
                           "--n", 4, "--rates", "0,0.25,0.5")
        assert code == 2 and "K_r" in err

    def test_typicality_decoder(self, capsys, bsc_pair_file):
        code, out, _ = run(capsys, "simulate", "--channel", bsc_pair_file, "--n", 6, "--rates", "0,0.2,0.2",
                           "--codebooks", 2, "--decoder", "typ:0.2")
        assert code == 0
        assert 0 <= float(table(out)[-1]["pe"]) <= 1

    @pytest.mark.parametrize("flag, value", [("--decoder", "map"), ("--rates", "0,1"), ("--n", "0"),
                                             ("--seed", "-3"), ("--decoder", "typ:0")])
    def test_bad_arguments(self, bsc_pair_file, flag, value):
        argv = ["simulate", "--channel", str(bsc_pair_file), "--n", "4", "--rates", "0,0.25,0.5"]
        argv += [flag, value]
        with pytest.raises(SystemExit) as exc:
            main(argv)
        assert exc.value.code == 2

    def test_guard_exit_3(self, capsys, bsc_pair_file, monkeypatch):
        monkeypatch.setenv("WRL_MAX_ENUM", "64")
        code, out, err = run(capsys, "simulate", "--channel", bsc_pair_file, "--n", 8, "--rates", "0,0.25,0.5",
                             "--codebooks", 1)
        assert code == 3 and out == ""
        assert "|Z|^n" in err

    def test_monte_carlo_fallback_when_y_too_large(self, capsys, tmp_path, monkeypatch):
        # ternary main output, binary eavesdropper: |Y|^n trips the guard before |Z|^n does
        p = tmp_path / "ch.toml"
        p.write_text("nx = 2\nny = 3\nnz = 2\nkernel = [[0.56, 0.24, 0.07, 0.03, 0.07, 0.03],"
                     " [0.03, 0.07, 0.03, 0.07, 0.27, 0.53]]\n")
        monkeypatch.setenv("WRL_MAX_ENUM", "512")
        code, out, _ = run(capsys, "simulate", "--channel", p, "--n", 7, "--rates", "0,0.2,0.3",
                           "--codebooks", 1, "--trials", 500)
        assert code == 0
        assert float(table(out)[0]["pe_ci"]) > 0


class TestUniformize:
    def test_fair_coin(self, capsys, fair_file, tmp_path):
        export = tmp_path / "phi.txt"
        code, out, _ = run(capsys, "uniformize", "--source", fair_file, "--n", 4, "--rr", 0.5, "--export", export)
        assert code == 0
        row = table(out)[0]
        assert (row["K"], row["distance"]) == ("4", "0.0")
        assert export.read_text().startswith("n=4 K=4 distance=0.0\n")

    def test_skewed(self, capsys, skewed_file):
        _, out, err = run(capsys, "uniformize", "--source", skewed_file, "--n", 8, "--rr", 0.25)
        assert float(table(out)[0]["distance"]) == pytest.approx(0.2873177611404161, abs=1e-12)
        assert "warning" not in err

    def test_rate_above_entropy_warns(self, capsys, skewed_file):
        code, out, err = run(capsys, "uniformize", "--source", skewed_file, "--n", 8, "--rr", 0.75)
        assert code == 0 and "warning" in err
        assert float(table(out)[0]["distance"]) > 1.0

    def test_bad_source(self, capsys, tmp_path):
        p = tmp_path / "s.toml"
        p.write_text("probs = [0.5, 0.6]\n")
        code, _, err = run(capsys, "uniformize", "--source", p, "--n", 4, "--rr", 0.5)
        assert code == 2 and "probs" in err


class TestJamming:
    def test_bound(self, capsys):
        code, out, err = run(capsys, "jamming", "--sigma2", 1, "--hr", 1)
        assert code == 0
        assert out == "sigma2,H_R,rho_max\n1.0,1.0,3.0\n"
        assert "note" in err and "2^(2 H_R - 1)" in err

    def test_zero_entropy(self, capsys):
        _, out, _ = run(capsys, "jamming", "--sigma2", 1, "--hr", 0)
        assert table(out)[0]["rho_max"] == "0.0"

    def test_no_note_when_forms_agree(self, capsys):
        _, _, err = run(capsys, "jamming", "--sigma2", 2, "--hr", 0.5)
        assert "note" not in err

    def test_simulation_table(self, capsys):
        code, out, _ = run(capsys, "jamming", "--sigma2", 1, "--hr", 1, "--simulate", "8,1.25,20000,1")
        assert code == 0
        first, second = out.split("\n\n")
        assert second.splitlines()[0] == "sigma2,rho,n,code_rate,samples,seed,ks_stat"

    def test_bad_sigma(self, capsys):
        code, _, _ = run(capsys, "jamming", "--sigma2", 0, "--hr", 1)
        assert code == 2


DETERMINISM_CASES = [
    ["capacity", "--channel", "{ch}", "--budget", "0.05", "--grid", "100"],
    ["curve", "--channel", "{ch}", "--grid", "30"],
    ["simulate", "--channel", "{ch}", "--n", "6", "--rates", "0,0.2,0.5", "--codebooks", "8", "--seed", "3"],
    ["simulate", "--channel", "{ch}", "--n", "6", "--rates", "0,0.2,0.5", "--codebooks", "4", "--seed", "3",
     "--decoder", "typ:0.2"],
    ["uniformize", "--source", "{src}", "--n", "8", "--rr", "0.25"],
    ["jamming", "--sigma2", "1", "--hr", "1", "--simulate", "6,1.0,5000,2"],
]


@pytest.mark.parametrize("case", DETERMINISM_CASES, ids=lambda c: c[0])
def test_byte_identical_across_runs_and_threads(capsys, bsc_pair_file, skewed_file, case):
    argv = [a.format(ch=bsc_pair_file, src=skewed_file) for a in case]
    outputs = []
    for threads in ("1", "1", "8"):
        code, out, err = run(capsys, *argv, "--threads", threads)
        assert code == 0
        outputs.append((out, err))
    assert outputs[0] == outputs[1] == outputs[2]


def test_version(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0
    assert capsys.readouterr().out.strip() == f"wrl {__version__}"


def test_console_entry_point(bsc_pair_file):
    res = subprocess.run(
        [sys.executable, "-m", "wrl.cli", "capacity", "--channel", str(bsc_pair_file), "--budget", "0"],
        capture_output=True, text=True, check=False,
    )
    assert res.returncode == 0
    assert table(res.stdout)[0]["rate"] == "0.0"


def test_no_command_is_usage_error():
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 2
