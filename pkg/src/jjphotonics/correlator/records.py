"""Binary record format shared by ADC and envelope data.

Layout: 16-byte header (8-byte magic, uint32 version, 4 reserved bytes),
one JSON metadata line terminated by a newline, then little-endian float32
payload, channel-interleaved sample by sample (re/im pairs when complex).
"""

from __future__ import annotations

import json

import numpy as np

MAGIC = b"JJPHOTON"
VERSION = 1


def write_record(path, channels, sample_interval: float, kind: str,
                 block_size: int | None = None, extra: dict | None = None):
    channels = [np.asarray(c) for c in channels]
    n = channels[0].size
    if any(c.size != n for c in channels):
        raise ValueError("all channels must have equal length")
    is_complex = any(np.iscomplexobj(c) for c in channels)
    meta = {
        "kind": kind,
        "sample_interval_s": sample_interval,
        "channels": len(channels),
        "samples": int(n),
        "complex": bool(is_complex),
    }
    if block_size is not None:
        meta["block_size"] = int(block_size)
    if extra:
        meta.update(extra)
    if is_complex:
        flat = np.empty((n, 2 * len(channels)), dtype="<f4")
        for i, c in enumerate(channels):
            flat[:, 2 * i] = c.real
            flat[:, 2 * i + 1] = c.imag
    else:
        flat = np.empty((n, len(channels)), dtype="<f4")
        for i, c in enumerate(channels):
            flat[:, i] = c
    with open(path, "wb") as fh:
        fh.write(MAGIC + np.uint32(VERSION).tobytes() + b"\x00" * 4)
        fh.write((json.dumps(meta) + "\n").encode())
        fh.write(flat.tobytes())


def read_record(path):
    """Returns (list of channel arrays, metadata dict)."""
    with open(path, "rb") as fh:
        header = fh.read(16)
        if header[:8] != MAGIC:
            raise ValueError("not a jjphotonics record file")
        version = int(np.frombuffer(header[8:12], dtype=np.uint32)[0])
        if version != VERSION:
            raise ValueError(f"unsupported record version {version}")
        meta = json.loads(fh.readline().decode())
        raw = np.frombuffer(fh.read(), dtype="<f4")
    n_ch = meta["channels"]
    n = meta["samples"]
    if meta["complex"]:
        raw = raw.reshape(n, 2 * n_ch)
        channels = [raw[:, 2 * i].astype(float) + 1j * raw[:, 2 * i + 1].astype(float)
                    for i in range(n_ch)]
    else:
        raw = raw.reshape(n, n_ch)
        channels = [raw[:, i].astype(float) for i in range(n_ch)]
    return channels, meta
