"""Read-only access to the embedded tables, with checksum verification."""
from __future__ import annotations

import hashlib
import json
from functools import lru_cache
from importlib import resources


class ChecksumMismatch(RuntimeError):
    pass


def _read(name: str) -> bytes:
    return resources.files("isingff").joinpath("data", name).read_bytes()


@lru_cache(maxsize=1)
def _sums() -> dict:
    out = {}
    for line in _read("checksums.sha256").decode().splitlines():
        if line.strip():
            digest, name = line.split()
            out[name] = digest
    return out


@lru_cache(maxsize=None)
def load_json(name: str):
    raw = _read(name)
    want = _sums().get(name)
    got = hashlib.sha256(raw).hexdigest()
    if want is None or want != got:
        raise ChecksumMismatch(f"{name}: checksum {got} does not match the recorded value")
    return json.loads(raw)
