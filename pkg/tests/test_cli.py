import csv
import logging
import re

import numpy as np
import pytest

from approxdct.cli import RunConfig, fmt, main, parse_range
from approxdct.catalog import UnknownTransformError
from approxdct.pgm import read_pgm, write_pgm


def read_rows(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def test_tables(tmp_path):
    assert main(["tables", "--out", str(tmp_path)]) == 0
    t1 = {r["transform"]: r for r in read_rows(tmp_path / "table1.csv")}
    assert t1["dct"]["total_error_energy"] == "0.00"
    assert t1["chen-round"]["total_error_energy"] == "1.79"
    assert t1["chen-sign"]["total_error_energy"] == "3.64"
    t2 = {r["transform"]: r for r in read_rows(tmp_path / "table2.csv")}
    assert [t2["chen-round"][k] for k in ("mult", "add", "shift", "total")] == ["0", "22", "0", "22"]
    assert [t2["dct"][k] for k in ("mult", "add")] == ["16", "26"]
    assert list(t2) == ["dct", "chen-round", "chen-sign", "sdct", "bas", "wht", "ht"]
    t4 = {r["transform"]: r for r in read_rows(tmp_path / "table4.csv")}
    assert [t4["chen-round-32"][k] for k in ("mult", "add", "shift", "total")] == ["0", "152", "0", "152"]
    assert t4["chen-sign-16"]["add"] == "68"


def test_tables_are_byte_identical_across_runs(tmp_path):
    main(["tables", "--out", str(tmp_path / "a")])
    main(["tables", "--out", str(tmp_path / "b")])
    for name in ("table1.csv", "table2.csv", "table4.csv"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_coding_gain_single_rho(tmp_path):
    out = tmp_path / "cg.csv"
    assert main(["coding-gain", "--rho", "0.95", "--out", str(out)]) == 0
    rows = {r["transform"]: r for r in read_rows(out)}
    assert rows["klt"]["relative_to_klt"] == "0.0000"
    assert rows["dct"]["relative_to_klt"] == "-0.0203"
    assert rows["klt"]["coding_gain"] == "8.8462"
    assert all(float(r["relative_to_klt"]) <= 0 for r in rows.values())


def test_coding_gain_default_grid(capsys):
    assert main(["coding-gain"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "rho,transform,coding_gain,relative_to_klt"
    assert len(lines) == 1 + 99 * 8
    assert lines[1].startswith("0.0100,klt,")
    assert not any(re.search(r"\de[-+]\d", line) for line in lines)


def test_coding_gain_rejects_bad_grid(capsys):
    assert main(["coding-gain", "--rho-grid", "0.5:0.1:0.1"]) == 2
    assert main(["coding-gain", "--rho-grid", "abc"]) == 2
    assert main(["coding-gain", "--rho", "1.0"]) == 2
    assert "error" in capsys.readouterr().err


@pytest.fixture
def image_file(tmp_path):
    rng = np.random.default_rng(0)
    y, x = np.mgrid[0:64, 0:64]
    img = np.clip(128 + 50 * np.sin(x / 7) * np.cos(y / 9) + rng.normal(0, 5, (64, 64)), 0, 255).astype(np.uint8)
    path = tmp_path / "in.pgm"
    write_pgm(path, img)
    return path


def test_compress(tmp_path, image_file, capsys):
    out = tmp_path / "out.pgm"
    assert main(["compress", str(image_file), "--transform", "chen-round", "--r", "6", "--out", str(out)]) == 0
    name, r, p, s = capsys.readouterr().out.strip().split(",")
    assert (name, r) == ("chen-round", "6")
    assert re.fullmatch(r"\d+\.\d{4}", p) and re.fullmatch(r"\d\.\d{4}", s)
    assert read_pgm(out).shape == (64, 64)


def test_compress_full_retention_dct(image_file, capsys):
    assert main(["compress", str(image_file), "--transform", "dct", "--r", "64"]) == 0
    p = capsys.readouterr().out.strip().split(",")[2]
    assert p == "INF" or float(p) >= 50


def test_compress_errors(tmp_path, image_file, capsys):
    assert main(["compress", str(image_file), "--transform", "nope"]) == 2
    err = capsys.readouterr().err
    assert "valid names" in err and "chen-round-32" in err
    bad = tmp_path / "bad.pgm"
    bad.write_bytes(b"P2\n1 1\n255\n0")
    assert main(["compress", str(bad)]) == 2
    odd = tmp_path / "odd.pgm"
    write_pgm(odd, np.zeros((20, 20), dtype=np.uint8))
    assert main(["compress", str(odd)]) == 2
    assert main(["compress", str(image_file), "--r", "65"]) == 2


def test_sweep(tmp_path, image_file, caplog):
    corpus = tmp_path / "corpus"
    corpus.mkdir()
    img = read_pgm(image_file)
    for k in range(3):
        write_pgm(corpus / f"{k}.pgm", np.roll(img, 5 * k, axis=1))
    (corpus / "junk.pgm").write_bytes(b"garbage")
    out = tmp_path / "figs"
    argv = ["sweep", "--corpus", str(corpus), "--out", str(out), "--transform", "chen-round", "--transform", "sdct"]
    with caplog.at_level(logging.WARNING):
        assert main(argv) == 0
    assert "junk.pgm" in caplog.text
    fig3 = read_rows(out / "fig3.csv")
    fig4 = read_rows(out / "fig4.csv")
    assert len(fig3) == 45 and len(fig4) == 45
    assert list(fig3[0]) == ["r", "psnr_dct", "psnr_chen-round", "psnr_sdct", "ape_dct", "ape_chen-round", "ape_sdct"]
    assert all(row["ape_dct"] == "0.0000" for row in fig3 + fig4)
    first = (out / "fig3.csv").read_bytes()
    assert main(argv) == 0
    assert (out / "fig3.csv").read_bytes() == first


def test_sweep_empty_corpus(tmp_path):
    (tmp_path / "empty").mkdir()
    assert main(["sweep", "--corpus", str(tmp_path / "empty")]) != 0
    assert main(["sweep", "--corpus", str(tmp_path / "missing")]) != 0


def test_delimiter(tmp_path):
    assert main(["--delimiter", ";", "tables", "--out", str(tmp_path)]) == 0
    assert (tmp_path / "table2.csv").read_text().splitlines()[1] == "dct;16;26;0;42"


def test_helpers():
    assert parse_range("1:5", int) == [1, 2, 3, 4, 5]
    assert parse_range("0.1:0.3:0.1") == [0.1, 0.2, 0.3]
    assert len(parse_range("0.01:0.99:0.01")) == 99
    assert fmt(-0.00001) == "0.0000"
    assert fmt(float("inf")) == "INF"
    assert fmt(1e-7) == "0.0000"
    with pytest.raises(UnknownTransformError):
        RunConfig("compress", transforms=["xyz"])
