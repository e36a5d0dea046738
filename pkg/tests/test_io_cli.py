import json

import jsonschema
import numpy as np
import pytest

from ola_windows import InvalidArgumentError, Window, design_ola_dpss, half_sine, kbd
from ola_windows.cli import compare_windows, main
from ola_windows.io import COMPARE_SCHEMA, dumps_json, format_float, read_window, render, write_report
from ola_windows.spectrum import magnitude_response


@pytest.mark.parametrize("fmt", ["csv", "json"])
def test_window_round_trip_exact(tmp_path, fmt):
    w = design_ola_dpss(64, 2.75)[0]
    path = tmp_path / f"w.{fmt}"
    write_report(w, path, fmt)
    back = read_window(path)
    assert np.array_equal(back.samples, w.samples)


def test_random_values_round_trip(tmp_path):
    s = np.random.default_rng(7).uniform(1e-300, 1.0, 32)
    write_report(Window(s), tmp_path / "r.csv", "csv")
    assert np.array_equal(read_window(tmp_path / "r.csv").samples, s)


def test_csv_headers():
    assert render(half_sine(8), "csv").splitlines()[0] == "index,value"
    assert render(half_sine(8), "csv").splitlines()[1].startswith("1,")
    assert render(magnitude_response(half_sine(8)), "csv").splitlines()[0] == "frequency,magnitude_db"


def test_json_sorted_keys_and_digits():
    text = dumps_json({"b": 0.1, "a": [1, 2.5]})
    assert text.index('"a"') < text.index('"b"')
    assert "0.10000000000000001" in text
    with pytest.raises(InvalidArgumentError):
        format_float(float("nan"))


def test_read_window_rejects_bad_header(tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text("i,v\n1,0.5\n")
    with pytest.raises(InvalidArgumentError):
        read_window(p)


def test_compare_table_values_and_schema():
    table, _, _ = compare_windows(["half-sine", "kbd:4.25", "ola-dpss:2.75"], 128, 2.75)
    jsonschema.validate(json.loads(dumps_json(table)), COMPARE_SCHEMA)
    got = [r["tau_db_normalized"] for r in table["windows"]]
    np.testing.assert_allclose(got, [16.6559, 16.6582, 16.6624], atol=0.01)
    assert got[2] > got[1] > got[0]


def test_cli_compare_json_validates(tmp_path, capsys):
    out = tmp_path / "cmp.json"
    rc = main(["compare", "half-sine", "kbd:4.25", "ola-dpss", "-L", "64", "--kernel-alpha", "2.75",
               "--out", str(out), "--data-dir", str(tmp_path / "fig")])
    assert rc == 0
    jsonschema.validate(json.loads(out.read_text()), COMPARE_SCHEMA)
    figs = sorted(p.name for p in (tmp_path / "fig").iterdir())
    assert "00_half-sine_window.csv" in figs and "02_ola-dpss_spectrum.csv" in figs


def test_cli_compare_csv(tmp_path):
    out = tmp_path / "cmp.csv"
    assert main(["compare", "half-sine", "kbd", "-L", "32", "--kernel-alpha", "2", "--format", "csv",
                 "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0].startswith("label,family,tau_linear") and len(lines) == 3


def test_generate_rejects_large_overlap(tmp_path, capsys):
    out = tmp_path / "w.csv"
    rc = main(["generate", "--family", "ola-dpss", "-L", "8", "-T", "5", "--out", str(out)])
    assert rc == 2
    assert not out.exists() and not list(tmp_path.iterdir())
    assert "invalid" in capsys.readouterr().err


def test_bad_flags_exit_2(capsys):
    assert main(["generate", "--family", "nope"]) == 2
    assert main(["generate", "-L", "7"]) == 2
    assert main(["analyze", "--kernel-alpha", "-1"]) == 2


def test_solver_failure_exit_3_writes_trace(tmp_path):
    trace = tmp_path / "trace.json"
    rc = main(["generate", "--family", "ola-dpss", "-L", "64", "--alpha", "2.75", "--max-iters", "1",
               "--out", str(tmp_path / "w.csv"), "--format", "csv", "--trace", str(trace)])
    assert rc == 3
    assert json.loads(trace.read_text())["converged"] is False


def test_calibration_failure_exit_3(capsys):
    # a main lobe wider than KBD reaches on the bracket cannot be matched
    rc = main(["calibrate", "--family", "kbd", "--reference", "ola-dpss:15", "-L", "64"])
    assert rc == 3


def test_io_failure_exit_4(tmp_path):
    rc = main(["generate", "-L", "8", "--out", str(tmp_path / "missing" / "w.csv")])
    assert rc == 4


def test_generate_deterministic(tmp_path):
    for name in ("a", "b"):
        assert main(["generate", "--family", "ola-dpss", "-L", "64", "--format", "json",
                     "--out", str(tmp_path / f"{name}.json")]) == 0
    assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()


def test_ola_verify_deterministic(tmp_path):
    for name in ("a", "b"):
        assert main(["ola-verify", "--family", "kbd", "-L", "64", "--seed", "3",
                     "--out", str(tmp_path / f"{name}.json")]) == 0
    a = (tmp_path / "a.json").read_bytes()
    assert a == (tmp_path / "b.json").read_bytes()
    assert json.loads(a)["max_abs_error"] <= 1e-12


def test_ola_verify_supplied_signal(tmp_path):
    sig = tmp_path / "x.txt"
    np.savetxt(sig, np.random.default_rng(1).standard_normal(200))
    out = tmp_path / "r.json"
    assert main(["ola-verify", "-L", "16", "--signal", str(sig), "--out", str(out)]) == 0
    assert json.loads(out.read_text())["square_sum_deviation"] <= 1e-12


def test_analyze_writes_both_reports(tmp_path):
    w = tmp_path / "w.csv"
    write_report(kbd(64, 4.0), w, "csv")
    d = tmp_path / "an"
    assert main(["analyze", "--input", str(w), "--kernel-alpha", "2.75", "--out", str(d), "--format", "csv"]) == 0
    assert (d / "spectrum.csv").read_text().startswith("frequency,magnitude_db\n")
    conc = (d / "concentration.csv").read_text()
    assert "tau_db," in conc


def test_calibrate_recovers_own_alpha(tmp_path):
    out = tmp_path / "c.json"
    assert main(["calibrate", "--family", "kbd", "--reference", "kbd:3", "-L", "64", "--out", str(out)]) == 0
    assert json.loads(out.read_text())["alpha"] == pytest.approx(3.0, abs=1e-3)


def test_sweep_writes_one_report_per_point(tmp_path):
    d = tmp_path / "sw"
    assert main(["sweep", "--family", "ola-dpss", "-L", "32", "--alpha-start", "1", "--alpha-stop", "2",
                 "--alpha-step", "0.5", "--out", str(d), "--jobs", "2"]) == 0
    files = sorted(p.name for p in d.iterdir())
    assert files == ["point_000.json", "point_001.json", "point_002.json"]
    recs = [json.loads((d / f).read_text()) for f in files]
    assert [r["alpha"] for r in recs] == [1.0, 1.5, 2.0]
    assert all(r["trace"]["converged"] for r in recs)
