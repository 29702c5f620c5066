import subprocess
import sys

import pytest

from primewalk.cli import main, parse_int


def run(tmp_path, *args):
    out = tmp_path / "out.csv"
    code = main([*args, "--out", str(out)])
    return code, out.read_text() if out.exists() else ""


def body(text):
    return [l for l in text.splitlines() if not l.startswith("# timestamp")]


def test_parse_int():
    assert parse_int("5^8") == 390625
    assert parse_int("1e5") == 100000
    assert parse_int("17") == 17


def test_primes_csv(tmp_path):
    code, text = run(tmp_path, "primes", "--limit", "30")
    lines = [l for l in text.splitlines() if not l.startswith("#")]
    assert code == 0
    assert lines[0] == "n,p_n" and lines[-1] == "10,29"
    assert "# subcommand: primes" in text


def test_manifest_and_threads_do_not_change_output(tmp_path):
    _, a = run(tmp_path, "series", "--q", "7", "--chi", "3", "--t", "15", "--n", "2000")
    _, b = run(tmp_path, "series", "--q", "7", "--chi", "3", "--t", "15", "--n", "2000", "--threads", "4")
    strip = lambda t: [l for l in body(t) if not l.startswith("# params")]
    assert strip(a) == strip(b)
    assert any(l.startswith("# primewalk ") for l in a.splitlines())


def test_value_row_selection(tmp_path):
    row = "1,-0.5+0.866i,0.5+0.866i,-0.5-0.866i,0.5-0.866i,-1,0"
    code, text = run(tmp_path, "stats", "freq", "--q", "7", "--chi", row, "--n", "125")
    assert code == 0
    assert "4,23,0.184" in text


def test_floats_round_trip(tmp_path):
    _, text = run(tmp_path, "ensemble", "clt", "--q", "3", "--chi", "2", "--n", "500", "--states", "5")
    value = text.splitlines()[-2].split(",")[1]
    assert len(value.replace("-", "").replace(".", "").split("e")[0]) >= 15


def test_blocks_writes_summary_and_per_block(tmp_path):
    code, text = run(tmp_path, "blocks", "--q", "5", "--chi", "2", "--n1", "1e4", "--n2", "5e5",
                     "--n-list", "500:2500:500", "--per-block")
    assert code == 0 and "slope-fit" in text
    assert (tmp_path / "out_N500.csv").exists()


def test_exit_codes(tmp_path, capsys):
    assert main(["chars"]) == 1
    assert main(["nonsense"]) == 1
    assert main(["chars", "--q", "0"]) == 2
    assert main(["primes", "--limit", "1"]) == 2
    assert main(["chars", "--q", "1000000"]) == 3
    assert main(["stats", "freq", "--q", "7", "--chi", "9", "--n", "10"]) == 2


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "primewalk", "chars", "--q", "3"], capture_output=True, text=True)
    assert r.returncode == 0 and "2,2,1,1" in r.stdout


def test_repro_table1(tmp_path):
    code, text = run(tmp_path, "repro", "table1")
    assert code == 0
    assert "7,2,3,-;1/3;1/6;-1/3;-1/6;1/2;0" not in text
    assert "7,2,3,0;1/3;1/6;-1/3;-1/6;1/2;-" in text


def test_repro_table_column(tmp_path):
    code, text = run(tmp_path, "repro", "table2", "--col", "5^8")
    rows = [l.split(",") for l in text.splitlines() if l.startswith("390625,")]
    assert code == 0 and len(rows) == 6
    assert float(rows[0][2]) == pytest.approx(0.16656, abs=5e-6)


def test_repro_fig_lpdir(tmp_path):
    code, text = run(tmp_path, "repro", "fig-lpdir", "--seed", "7")
    assert code == 0
    assert text.splitlines()[6] == "t,absL,absL_random_product"
    assert "# pairs 8.03" in text


def test_missing_q_is_usage_error(capsys):
    assert main(["stats", "freq", "--chi", "2"]) == 1
    assert "--q" in capsys.readouterr().err
