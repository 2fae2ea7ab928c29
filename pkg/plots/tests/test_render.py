import csv
from pathlib import Path

import pytest

from plots import FIGURES, PlotError, PlotSpec, render
from plots.cli import main

SAMPLES = Path(__file__).resolve().parent.parent / "samples"

SAMPLE_FOR = {
    "logical_error": "logical_error.csv",
    "detection": "detection.csv",
    "effective_distance": "effective_distance.csv",
    "scalability": "scalability.csv",
    "throughput": "throughput.csv",
}

PNG_MAGIC = b"\x89PNG\r\n\x1a\n"


@pytest.mark.parametrize("figure", sorted(FIGURES))
def test_every_figure_renders_from_samples(figure, tmp_path):
    out = tmp_path / f"{figure}.png"
    got = render(PlotSpec(csv_path=str(SAMPLES / SAMPLE_FOR[figure]),
                          figure=figure, out_path=str(out)))
    assert got == str(out)
    data = out.read_bytes()
    assert data[:8] == PNG_MAGIC and len(data) > 1000


def test_missing_column_fails_cleanly(tmp_path):
    bad = tmp_path / "bad.csv"
    with open(bad, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["d", "p", "mode"])        # no p_l / se columns
        writer.writerow([5, 1e-3, "uniform_greedy"])
    with pytest.raises(PlotError, match="p_l"):
        render(PlotSpec(csv_path=str(bad), figure="logical_error",
                        out_path=str(tmp_path / "x.png")))
    assert not (tmp_path / "x.png").exists()


def test_unknown_figure_id_is_usage_error(tmp_path):
    rc = main(["--figure", "nope",
               "--in", str(SAMPLES / "throughput.csv"),
               "--out", str(tmp_path / "x.png")])
    assert rc == 2
    assert not (tmp_path / "x.png").exists()


def test_empty_but_valid_csv_gives_empty_axes_success(tmp_path):
    empty = tmp_path / "empty.csv"
    empty.write_text("d,p,mode,p_l,se\n")
    out = tmp_path / "empty.png"
    rc = main(["--figure", "logical_error", "--in", str(empty),
               "--out", str(out)])
    assert rc == 0
    assert out.read_bytes()[:8] == PNG_MAGIC


def test_cli_renders_sample(tmp_path):
    out = tmp_path / "thr.svg"
    rc = main(["--figure", "throughput",
               "--in", str(SAMPLES / "throughput.csv"),
               "--out", str(out)])
    assert rc == 0
    assert b"<svg" in out.read_bytes()[:300]


def test_missing_input_file_fails_cleanly(tmp_path):
    rc = main(["--figure", "throughput", "--in", str(tmp_path / "no.csv"),
               "--out", str(tmp_path / "x.png")])
    assert rc == 2
