"""CSV / JSON / PGM writers with an embedded run-manifest hash."""

from __future__ import annotations

import csv
import hashlib
import json
from pathlib import Path

import numpy as np

HASH_PREFIX = "# manifest-sha256: "


def manifest_hash(manifest: dict) -> str:
    blob = json.dumps(manifest, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.sha256(blob.encode()).hexdigest()


def write_manifest(path, manifest: dict) -> str:
    digest = manifest_hash(manifest)
    payload = dict(manifest, manifest_sha256=digest)
    Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True, default=str) + "\n")
    return digest


def _fmt(v) -> str:
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def write_csv(path, header: list[str], rows, manifest_digest: str | None = None) -> None:
    with open(path, "w", newline="") as fh:
        if manifest_digest:
            fh.write(f"{HASH_PREFIX}{manifest_digest}\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) for v in row])


def read_csv(path) -> tuple[list[str], list[list[str]], str | None]:
    """Return (header, rows, manifest digest or None)."""
    digest = None
    with open(path, newline="") as fh:
        lines = []
        for line in fh:
            if line.startswith(HASH_PREFIX):
                digest = line[len(HASH_PREFIX):].strip()
            elif not line.startswith("#"):
                lines.append(line)
    reader = csv.reader(lines)
    header = next(reader)
    return header, [r for r in reader if r], digest


def write_pgm16(path, values: np.ndarray, vmax: float, manifest_digest: str | None = None) -> np.ndarray:
    """Binary 16-bit PGM; 0 maps to black and ``vmax`` (or more) to white.

    Row 0 of ``values`` is written first (top of the image).  Returns the
    integer pixel array that was written.
    """
    values = np.asarray(values, dtype=float)
    if vmax <= 0:
        raise ValueError("vmax must be positive")
    scaled = np.clip(np.nan_to_num(values, nan=0.0) / vmax, 0.0, 1.0)
    pix = np.rint(scaled * 65535).astype(">u2")
    h, w = pix.shape
    comment = f"# manifest-sha256: {manifest_digest}\n" if manifest_digest else ""
    with open(path, "wb") as fh:
        fh.write(f"P5\n{comment}{w} {h}\n65535\n".encode("ascii"))
        fh.write(pix.tobytes())
    return pix.astype(np.uint16)


def read_pgm16(path) -> np.ndarray:
    data = Path(path).read_bytes()
    tokens: list[bytes] = []
    pos = 0
    while len(tokens) < 4:
        while data[pos:pos + 1].isspace():
            pos += 1
        if data[pos:pos + 1] == b"#":
            pos = data.index(b"\n", pos) + 1
            continue
        end = pos
        while not data[end:end + 1].isspace():
            end += 1
        tokens.append(data[pos:end])
        pos = end
    pos += 1
    if tokens[0] != b"P5":
        raise ValueError("not a binary PGM")
    w, h, maxval = int(tokens[1]), int(tokens[2]), int(tokens[3])
    dtype = ">u2" if maxval > 255 else "u1"
    return np.frombuffer(data[pos:], dtype=dtype, count=w * h).reshape(h, w).astype(np.uint16)
