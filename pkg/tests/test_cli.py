"""CLI subcommands, exit codes, CSV determinism, and the sieve cache format."""

import io
import json
import math
import os
import subprocess
import sys

import numpy as np
import pytest

from siegelscan import build_sieve
from siegelscan.cli import (
    CACHE_MAGIC,
    cache_path,
    cached_sieve,
    load_sieve,
    main,
    save_sieve,
    write_scan_csv,
)
from siegelscan.errors import CacheFormatError, CapacityError
from siegelscan.verify import ScanRow, scan_discriminants


def run_main(*argv):
    """Call main() catching argparse's SystemExit; returns (code, stdout)."""
    import contextlib

    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        try:
            code = main(list(argv))
        except SystemExit as exc:  # argparse usage errors
            code = exc.code
    return code, buf.getvalue()


# ---------------------------------------------------------------- exit codes


def test_verify_scan_smoke_exits_zero(tmp_path):
    out = tmp_path / "reports.json"
    code, text = run_main("verify", "--suite", "scan-smoke", "--out", str(out))
    assert code == 0
    assert "[PASS]" in text and "[FAIL]" not in text
    reports = json.loads(out.read_text())
    assert isinstance(reports, list) and reports
    for rec in reports:
        assert set(rec) == {
            "name", "params", "lhs", "rhs", "residual",
            "envelope", "ratio", "pass", "kind",
        }
        assert rec["pass"] is True


def test_verify_bad_suite_exits_two():
    code, _ = run_main("verify", "--suite", "bogus")
    assert code == 2


def test_verify_tiny_envelope_exits_one():
    # shrinking the measured-check budget to nothing must surface as failure
    code, text = run_main(
        "verify", "--suite", "corollaries", "--c-max", "1e-12"
    )
    assert code == 1
    assert "[FAIL]" in text


def test_lvalues_direct_json():
    code, text = run_main("lvalues", "--d", "-4", "--x", "1e6")
    assert code == 0
    obj = json.loads(text)
    assert obj["d"] == -4 and obj["q"] == 4 and obj["method"] == "direct"
    assert abs(obj["value"] - math.pi / 4) <= obj["bound"]


def test_lvalues_class_number_json():
    code, text = run_main("lvalues", "--d", "-23", "--method", "class-number")
    assert code == 0
    obj = json.loads(text)
    # h(-23) = 3 with w = 2
    want = 2 * math.pi * 3 / (2 * math.sqrt(23))
    assert abs(obj["value"] - want) < 1e-12
    assert obj["truncation"] == math.inf or obj["truncation"] is None


def test_lvalues_tau_json():
    code, text = run_main("lvalues", "--d", "5", "--method", "tau", "--x", "1e5")
    assert code == 0
    obj = json.loads(text)
    assert obj["method"] == "tau-identity" or obj["method"] == "tau"
    assert obj["bound"] > 0


def test_lvalues_non_fundamental_exits_two():
    code, _ = run_main("lvalues", "--d", "9")
    assert code == 2


def test_lvalues_class_number_positive_d_exits_two():
    code, _ = run_main("lvalues", "--d", "5", "--method", "class-number")
    assert code == 2


def test_scan_x_too_small_exits_two(tmp_path):
    code, _ = run_main(
        "scan", "--dmin", "-50", "--dmax", "-1", "--x", "10",
        "--out", str(tmp_path / "scan.csv"),
    )
    assert code == 2


def test_console_script_runs():
    proc = subprocess.run(
        ["siegelscan", "lvalues", "--d", "-3", "--x", "1e4"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    obj = json.loads(proc.stdout)
    assert abs(obj["value"] - math.pi / (3 * math.sqrt(3))) <= obj["bound"]


# ----------------------------------------------------------------- scan CSV

SCAN_HEADER = "d,q,L1,L1_err,L1prime,Pq,rhs_main,ratio_main,score"


def test_scan_csv_header_and_determinism(tmp_path):
    out1 = tmp_path / "a.csv"
    out2 = tmp_path / "b.csv"
    code, _ = run_main(
        "scan", "--dmin", "-50", "--dmax", "-1", "--x", "1e3",
        "--out", str(out1), "--jobs", "1",
    )
    assert code == 0
    code, _ = run_main(
        "scan", "--dmin", "-50", "--dmax", "-1", "--x", "1e3",
        "--out", str(out2), "--jobs", "2",
    )
    assert code == 0
    b1, b2 = out1.read_bytes(), out2.read_bytes()
    assert b1 == b2
    lines = b1.decode().splitlines()
    assert lines[0] == SCAN_HEADER
    assert len(lines) == 1 + 16


def test_scan_csv_round_trip():
    # %.9g prints enough digits that re-emitting parsed rows is stable
    rows = scan_discriminants(-30, -1, 10**3)
    buf = io.StringIO()
    write_scan_csv(rows, buf)
    text = buf.getvalue()
    parsed = []
    for line in text.splitlines()[1:]:
        parts = line.split(",")
        parsed.append(
            ScanRow(int(parts[0]), int(parts[1]), *(float(p) for p in parts[2:]))
        )
    buf2 = io.StringIO()
    write_scan_csv(parsed, buf2)
    assert buf2.getvalue() == text


def test_scan_stdout(capsys):
    code = main(["scan", "--dmin", "-8", "--dmax", "-3", "--x", "100"])
    assert code == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == SCAN_HEADER
    assert {int(l.split(",")[0]) for l in lines[1:]} == {-3, -4, -7, -8}


# -------------------------------------------------------------- sieve cache


def test_cache_round_trip(tmp_path):
    table = build_sieve(1000, 5000)
    path = tmp_path / "seg.bin"
    save_sieve(table, str(path))
    back = load_sieve(str(path))
    assert back.lo == 1000 and back.hi == 5000
    assert np.array_equal(back.omega, table.omega)
    assert np.array_equal(back.lambda_sign, table.lambda_sign)
    assert np.array_equal(back.pp_base, table.pp_base)
    assert back.lambda_sign.dtype == np.int8
    assert back.pp_base.dtype == np.int64


def test_cache_rejects_wrong_magic(tmp_path):
    path = tmp_path / "seg.bin"
    save_sieve(build_sieve(1, 100), str(path))
    raw = bytearray(path.read_bytes())
    raw[:8] = b"NOTMAGIC"
    path.write_bytes(bytes(raw))
    with pytest.raises(CacheFormatError):
        load_sieve(str(path))


def test_cache_rejects_truncation(tmp_path):
    path = tmp_path / "seg.bin"
    save_sieve(build_sieve(1, 100), str(path))
    raw = path.read_bytes()
    path.write_bytes(raw[:-7])
    with pytest.raises(CacheFormatError):
        load_sieve(str(path))


def test_cache_rejects_bad_lambda_flag(tmp_path):
    path = tmp_path / "seg.bin"
    save_sieve(build_sieve(1, 50), str(path))
    raw = bytearray(path.read_bytes())
    raw[len(CACHE_MAGIC) + 16 + 1] = 7  # lam byte of the first record
    path.write_bytes(bytes(raw))
    with pytest.raises(CacheFormatError):
        load_sieve(str(path))


def test_cache_capacity_guard(tmp_path):
    table = build_sieve(2**32 - 10, 2**32 + 10)
    with pytest.raises(CapacityError):
        save_sieve(table, str(tmp_path / "big.bin"))


def test_cached_sieve_rebuilds_corrupt_file(tmp_path, monkeypatch):
    monkeypatch.setenv("SIEGEL_CACHE_DIR", str(tmp_path))
    first = cached_sieve(1, 300)
    path = cache_path(str(tmp_path), 1, 300)
    assert os.path.exists(path)
    with open(path, "r+b") as fh:
        fh.seek(0)
        fh.write(b"garbage!")
    second = cached_sieve(1, 300)
    assert np.array_equal(second.omega, first.omega)
    # the rewrite restored a loadable file
    third = load_sieve(path)
    assert np.array_equal(third.pp_base, first.pp_base)


def test_cache_cli_build_then_info(tmp_path):
    code, text = run_main(
        "cache", "build", "--lo", "1", "--hi", "2000",
        "--cache-dir", str(tmp_path),
    )
    assert code == 0
    code, text = run_main("cache", "info", cache_path(str(tmp_path), 1, 2000))
    assert code == 0
    assert "2000" in text


def test_cache_cli_info_corrupt_exits_one(tmp_path):
    path = cache_path(str(tmp_path), 1, 100)
    with open(path, "wb") as fh:
        fh.write(b"garbage!garbage!")
    code, _ = run_main("cache", "info", path)
    assert code == 1
