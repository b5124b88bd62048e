"""Binary sample format, CSV export, tabulated-target input."""

import csv
import struct

import numpy as np
import pytest

from srm3.errors import InvalidInputError, SampleCorruptionError, SampleFormatError
from srm3.grids import FrequencyGrid, OffsetRule
from srm3.io import (
    export_csv,
    read_bispectrum_csv,
    read_samples,
    read_spectrum_csv,
    write_samples,
)
from srm3.simulate import Method, SampleRecord


def _random_record(seed=0, m=3, n=257):
    rng = np.random.default_rng(seed)
    return SampleRecord(
        rng.normal(size=(m, n)), 0.125, Method.THIRD_ORDER_MV, seed=987654321, realization_index=4
    )


def test_round_trip_bit_exact(tmp_path):
    record = _random_record()
    path = tmp_path / "rec.srm3"
    write_samples(path, record)
    back = read_samples(path)
    assert np.array_equal(back.values, record.values)
    assert back.values.tobytes() == record.values.tobytes()
    assert back.delta_t == record.delta_t
    assert back.method is record.method
    assert back.seed == record.seed
    assert back.realization_index == record.realization_index


@pytest.mark.parametrize("method", list(Method))
def test_method_codes_round_trip(tmp_path, method):
    record = SampleRecord(np.zeros((1, 4)), 1.0, method, 1, 0)
    path = tmp_path / "rec.srm3"
    write_samples(path, record)
    assert read_samples(path).method is method


def test_bad_magic_rejected(tmp_path):
    path = tmp_path / "rec.srm3"
    write_samples(path, _random_record())
    blob = bytearray(path.read_bytes())
    blob[:4] = b"NOPE"
    path.write_bytes(blob)
    with pytest.raises(SampleFormatError):
        read_samples(path)


def test_bad_version_rejected(tmp_path):
    path = tmp_path / "rec.srm3"
    write_samples(path, _random_record())
    blob = bytearray(path.read_bytes())
    blob[4:8] = struct.pack("<I", 99)
    path.write_bytes(blob)
    with pytest.raises(SampleFormatError):
        read_samples(path)


def test_truncated_payload_rejected(tmp_path):
    path = tmp_path / "rec.srm3"
    write_samples(path, _random_record())
    blob = path.read_bytes()
    path.write_bytes(blob[:-7])
    with pytest.raises(SampleCorruptionError):
        read_samples(path)


def test_trailing_garbage_rejected(tmp_path):
    path = tmp_path / "rec.srm3"
    write_samples(path, _random_record())
    path.write_bytes(path.read_bytes() + b"x")
    with pytest.raises(SampleCorruptionError):
        read_samples(path)


def test_no_partial_file_on_failed_write(tmp_path):
    # a non-writable payload triggers the failure after the temp file opens
    class Boom(SampleRecord):
        pass

    record = _random_record()
    target = tmp_path / "rec.srm3"
    bad = SampleRecord(record.values, record.delta_t, record.method, 1, 0)
    object.__setattr__(bad, "values", None)
    with pytest.raises(Exception):
        write_samples(target, bad)
    assert not target.exists()
    assert list(tmp_path.iterdir()) == []


def test_csv_export_reparses_exactly(tmp_path):
    record = _random_record(seed=5, m=2, n=64)
    path = tmp_path / "rec.csv"
    export_csv(path, record)
    with open(path) as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["t", "f1", "f2"]
    parsed = np.array([[float(x) for x in row[1:]] for row in rows[1:]]).T
    assert np.array_equal(parsed, record.values)


def test_spectrum_csv_round_trip():
    grid = FrequencyGrid(2, 3, 0.5)
    rng = np.random.default_rng(3)
    A = rng.normal(size=(3, 2, 2)) + 1j * rng.normal(size=(3, 2, 2))
    vals = A + np.conj(np.swapaxes(A, 1, 2))
    lines = []
    for k in range(3):
        cells = [str(k)]
        for entry in vals[k].ravel():
            cells += [repr(float(entry.real)), repr(float(entry.imag))]
        lines.append(",".join(cells))
    S = read_spectrum_csv("\n".join(lines) + "\n", grid)
    np.testing.assert_array_equal(S.values, vals)


def test_spectrum_csv_errors():
    grid = FrequencyGrid(1, 2, 0.5, OffsetRule.UNIVARIATE_ERGODIC)
    with pytest.raises(InvalidInputError):
        read_spectrum_csv("0,1.0,0.0\n", grid)  # missing a bin
    with pytest.raises(InvalidInputError):
        read_spectrum_csv("0,1.0,0.0\n0,1.0,0.0\n", grid)  # repeated bin
    with pytest.raises(InvalidInputError):
        read_spectrum_csv("0,1.0\n1,1.0\n", grid)  # wrong column count
    with pytest.raises(InvalidInputError):
        read_spectrum_csv("0,one,0.0\n1,1.0,0.0\n", grid)  # non-numeric


def test_bispectrum_csv_fills_conjugate_pair():
    grid = FrequencyGrid(1, 4, 0.5, OffsetRule.UNIVARIATE_ERGODIC)
    B = read_bispectrum_csv("2,1,0.5,0.25\n", grid)
    assert B.values[2, 1, 0, 0, 0] == 0.5 + 0.25j
    assert B.values[1, 2, 0, 0, 0] == 0.5 - 0.25j
    assert not np.any(np.delete(B.values.ravel(), [0]) == np.nan)
