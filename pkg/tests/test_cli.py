import numpy as np
import pytest

from timebell import EventSeries, parse_event_file, read_event_file, serialize, series_stats
from timebell.cli import main
from timebell.report import COLUMNS, HEADER, parse_rows, read_sections


@pytest.fixture
def ecg_file(tmp_path):
    path = tmp_path / "ecg.txt"
    assert main(["synth", "--preset", "ecg", "--synth-seed", "3", "--output", str(path)]) == 0
    return path


def run(tmp_path, *args):
    return main(list(args) + ["--out", str(tmp_path)])


def test_analyze_writes_216_rows(ecg_file, tmp_path, capsys):
    out = tmp_path / "run"
    assert run(out, "analyze", "--input", str(ecg_file)) == 0
    text = (out / "output1.txt").read_text()
    assert text.startswith(HEADER)
    rows = parse_rows(text)
    assert len(rows) == 216
    assert HEADER.lstrip("#").strip().split("\t") == list(COLUMNS)
    assert [r[:3] for r in rows[:2]] == [(300, 300, 300), (300, 300, 400)]
    n = int(read_sections((out / "summary.txt").read_text())["input"][5].split(": ")[1])
    assert all(r[4] + r[5] + r[6] == n for r in rows)
    console = capsys.readouterr().out
    assert "of 216 combinations have D > 1" in console and "argmax:" in console


def test_dense_series_all_d_one(tmp_path):
    path = tmp_path / "dense.txt"
    path.write_text(serialize(EventSeries(np.arange(0, 400_000, 100))))
    assert run(tmp_path, "analyze", "--input", str(path), "--tm", "800") == 0
    rows = parse_rows((tmp_path / "output1.txt").read_text())
    assert len(rows) == 216 and {r[3] for r in rows} == {1.0}


def test_montecarlo_files_consistent(ecg_file, tmp_path):
    assert run(tmp_path, "montecarlo", "--input", str(ecg_file), "--reps", "2000") == 0
    rows = parse_rows((tmp_path / "output2.txt").read_text())
    assert len(rows) == 2000
    assert len({r[:3] for r in rows}) == 1
    sections = read_sections((tmp_path / "summary.txt").read_text())
    line = next(l for l in sections["montecarlo"] if l.startswith("montecarlo violations"))
    assert int(line.split(": ")[1]) == sum(r[3] > 1 for r in rows)
    hist = (tmp_path / "histogram.csv").read_text().splitlines()
    assert hist[0] == "bin_left,bin_right,count,normal_density"
    assert sum(int(l.split(",")[2]) for l in hist[1:]) == 2000


def test_montecarlo_single_rep_matches_library(ecg_file, tmp_path):
    from timebell import TauTriple, base_times, correlate_pairs, random_assignment, u_matrix
    assert run(tmp_path, "montecarlo", "--input", str(ecg_file), "--reps", "1",
               "--taus", "800,600,300", "--seed", "77") == 0
    row = parse_rows((tmp_path / "output2.txt").read_text())
    assert len(row) == 1
    s = read_event_file(ecg_file)
    t_M = series_stats(s).t_M
    base = base_times(s, t_M)
    u = u_matrix(s, base, TauTriple.from_offsets(800, 600, 300, t_M), t_M)
    res = correlate_pairs(u, random_assignment(len(u), 77, 0))
    assert row[0] == (800, 600, 300, round(res.d, 6), res.n12, res.n13, res.n23)


def test_summary_contents_and_rerun(ecg_file, tmp_path):
    args = ["summary", "--input", str(ecg_file), "--reps", "500"]
    assert run(tmp_path, *args) == 0
    first = (tmp_path / "summary.txt").read_bytes()
    assert run(tmp_path, *args) == 0
    assert (tmp_path / "summary.txt").read_bytes() == first
    text = first.decode()
    assert sum(l.startswith("KS normality:") for l in text.splitlines()) == 1
    assert "statistic=" in text and "p_value=" in text
    for key in ("events:", "t_M_ms:", "grid_tau1:", "sweep violations", "argmax:",
                "montecarlo violations", "seed: 12345", "caveat:"):
        assert key in text


def test_neighborhood(ecg_file, tmp_path):
    assert run(tmp_path, "neighborhood", "--input", str(ecg_file), "--reps", "50",
               "--taus", "800,600,300") == 0
    sec = read_sections((tmp_path / "summary.txt").read_text())["neighborhood"]
    assert "neighbors: 26 (dropped 0)" in sec
    assert sum(l.startswith(("780,620,320", "820,580,280")) for l in sec) == 2
    assert len([l for l in sec if "max D" in l and l[0].isdigit()]) == 26


def test_neighborhood_delta_zero(ecg_file, tmp_path):
    assert run(tmp_path, "neighborhood", "--input", str(ecg_file), "--reps", "20",
               "--taus", "800,600,300", "--delta", "0") == 0
    sec = read_sections((tmp_path / "summary.txt").read_text())["neighborhood"]
    assert "neighbors: 0 (dropped 0)" in sec and "note: no neighbors to explore" in sec


def test_synth_periodic_round_trip(tmp_path, capsys):
    path = tmp_path / "p.txt"
    assert main(["synth", "--kind", "periodic", "--period", "829", "--duration", "8290",
                 "--output", str(path)]) == 0
    s = read_event_file(path)
    assert s.times.tolist() == list(range(0, 8291, 829))
    assert parse_event_file(serialize(s)) == s
    assert "t_M 829" in capsys.readouterr().out


def test_synth_poisson_reproducible(tmp_path):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    for p in (a, b):
        assert main(["synth", "--kind", "poisson", "--rate", "0.002", "--duration", "500000",
                     "--synth-seed", "9", "--output", str(p)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_synthetic_input_direct(tmp_path):
    assert run(tmp_path, "analyze", "--kind", "periodic", "--period", "100",
               "--duration", "100000", "--tm", "800") == 0
    assert len(parse_rows((tmp_path / "output1.txt").read_text())) == 216


def test_custom_grid(ecg_file, tmp_path):
    assert run(tmp_path, "analyze", "--input", str(ecg_file), "--grid", "300,500",
               "--grid3", "400") == 0
    rows = parse_rows((tmp_path / "output1.txt").read_text())
    assert [r[:3] for r in rows] == [(300, 300, 400), (300, 500, 400), (500, 300, 400), (500, 500, 400)]


@pytest.mark.parametrize("argv", [
    ["analyze"],
    ["analyze", "--input", "x", "--kind", "periodic", "--period", "3", "--duration", "9"],
    ["analyze", "--input", "x", "--grid", "a,b"],
    ["analyze", "--input", "x", "--reps", "0"],
    ["synth", "--output", "x"],
    ["frobnicate"],
])
def test_usage_errors(argv):
    with pytest.raises(SystemExit) as info:
        main(argv)
    assert info.value.code == 2


def test_data_errors(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("0\n10\n5\n")
    assert run(tmp_path, "analyze", "--input", str(bad)) == 3
    assert "line 3" in capsys.readouterr().err
    assert run(tmp_path, "analyze", "--input", str(tmp_path / "missing.txt")) == 3
    short = tmp_path / "short.txt"
    short.write_text("0\n100\n")
    assert run(tmp_path, "analyze", "--input", str(short)) == 3


def test_two_column_input(tmp_path):
    s = EventSeries(np.arange(0, 400_000, 829) + 13)
    prev = 0
    lines = []
    for t in s.times:
        lines.append(f"{t - prev} {t}")
        prev = t
    path = tmp_path / "two.txt"
    path.write_text("\n".join(lines) + "\n")
    assert run(tmp_path, "analyze", "--input", str(path), "--format", "two-column") == 0
