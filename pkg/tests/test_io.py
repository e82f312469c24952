import json

import numpy as np

from tracelab.io import manifest_hash, read_csv, read_pgm16, write_csv, write_manifest, write_pgm16


def test_manifest_hash_is_key_order_independent():
    assert manifest_hash({"a": 1, "b": [1, 2]}) == manifest_hash({"b": [1, 2], "a": 1})
    assert manifest_hash({"a": 1}) != manifest_hash({"a": 2})


def test_manifest_file_carries_its_hash(tmp_path):
    m = {"command": "dos", "kappa": 1.0}
    digest = write_manifest(tmp_path / "manifest.json", m)
    data = json.loads((tmp_path / "manifest.json").read_text())
    assert data["manifest_sha256"] == digest == manifest_hash(m)


def test_csv_round_trip_with_digest(tmp_path):
    write_csv(tmp_path / "x.csv", ["a", "b"], [(1.5, "x"), (0.1, "y")], "deadbeef")
    header, rows, digest = read_csv(tmp_path / "x.csv")
    assert header == ["a", "b"] and digest == "deadbeef"
    assert float(rows[1][0]) == 0.1 and rows[0][1] == "x"


def test_pgm_round_trip(tmp_path):
    vals = np.array([[0.0, 1.0, 2.0], [3.0, np.nan, 0.5]])
    pix = write_pgm16(tmp_path / "g.pgm", vals, vmax=2.0, manifest_digest="abc")
    assert pix.tolist() == [[0, 32768, 65535], [65535, 0, 16384]]
    assert np.array_equal(read_pgm16(tmp_path / "g.pgm"), pix)
    assert (tmp_path / "g.pgm").read_bytes().startswith(b"P5\n# manifest-sha256: abc\n3 2\n65535\n")
