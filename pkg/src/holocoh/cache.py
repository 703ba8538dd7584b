"""On-disk persistence of minimal resolutions.

One file per group, ``<group key>.res``::

    magic   8 bytes  b"HOLORES\\x00"
    length  4 bytes  little-endian size of the JSON header
    header  JSON     versions, group key, ranks, payload SHA-256
    payload          differentials d_1..d_n, each the raw little-endian
                     uint64 words of its bit-packed generator images

A file whose versions differ from the running code is ignored (and later
overwritten); a damaged file is reported with a warning and recomputed.
Writers hold ``<file>.lock`` and replace the file atomically, so readers
never see a partial write.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import struct
import tempfile
import warnings
from pathlib import Path

import numpy as np
from filelock import FileLock

from . import gf2
from .groups import ELEMENT_ORDER_VERSION, Group
from .resolution import ALGORITHM_VERSION, Resolution

MAGIC = b"HOLORES\x00"
FORMAT_VERSION = 1
ENV_VAR = "HOLOCOH_CACHE_DIR"

log = logging.getLogger(__name__)


class CacheCorruption(ValueError):
    """A cache file exists but cannot be decoded."""


class CacheWarning(UserWarning):
    """Emitted when a damaged cache file is discarded."""


def default_cache_dir() -> Path | None:
    value = os.environ.get(ENV_VAR)
    return Path(value) if value else None


def path_for(cache_dir, group: Group) -> Path:
    return Path(cache_dir) / f"{group.spec.key}.res"


def _versions() -> dict[str, int]:
    return {
        "format": FORMAT_VERSION,
        "element_order": ELEMENT_ORDER_VERSION,
        "algorithm": ALGORITHM_VERSION,
    }


def encode(res: Resolution) -> bytes:
    payload = b"".join(res.differentials[n].data.astype("<u8").tobytes() for n in range(1, len(res.ranks)))
    header = dict(_versions())
    header.update(
        group=res.group.spec.key,
        order=res.group.order,
        ranks=list(res.ranks),
        sha256=hashlib.sha256(payload).hexdigest(),
    )
    head = json.dumps(header, sort_keys=True).encode()
    return MAGIC + struct.pack("<I", len(head)) + head + payload


def read_header(blob: bytes) -> tuple[dict, int]:
    """Decode the header; returns it with the payload offset."""
    if blob[: len(MAGIC)] != MAGIC:
        raise CacheCorruption("bad magic")
    if len(blob) < len(MAGIC) + 4:
        raise CacheCorruption("truncated header")
    (size,) = struct.unpack("<I", blob[len(MAGIC) : len(MAGIC) + 4])
    start = len(MAGIC) + 4
    try:
        header = json.loads(blob[start : start + size])
    except ValueError as exc:
        raise CacheCorruption(f"unreadable header: {exc}") from None
    if not isinstance(header, dict):
        raise CacheCorruption("header is not an object")
    return header, start + size


def decode(blob: bytes, group: Group) -> Resolution | None:
    """Rebuild a resolution; ``None`` if the file was written by other versions."""
    header, offset = read_header(blob)
    if any(header.get(k) != v for k, v in _versions().items()):
        return None
    if header.get("group") != group.spec.key or header.get("order") != group.order:
        raise CacheCorruption(f"file describes {header.get('group')}, expected {group.spec.key}")
    payload = blob[offset:]
    if hashlib.sha256(payload).hexdigest() != header.get("sha256"):
        raise CacheCorruption("payload checksum mismatch")
    ranks = [int(b) for b in header["ranks"]]
    if not ranks or ranks[0] != 1:
        raise CacheCorruption("bad rank list")
    differentials: list = [None]
    pos = 0
    for n in range(1, len(ranks)):
        cols = ranks[n - 1] * group.order
        words = (cols + 63) // 64
        nbytes = ranks[n] * words * 8
        chunk = payload[pos : pos + nbytes]
        if len(chunk) != nbytes:
            raise CacheCorruption("truncated payload")
        data = np.frombuffer(chunk, dtype="<u8").reshape(ranks[n], words).astype(np.uint64)
        differentials.append(gf2.BitMatrix(ranks[n], cols, data))
        pos += nbytes
    if pos != len(payload):
        raise CacheCorruption("trailing bytes after payload")
    return Resolution(group, ranks, differentials)


def load(cache_dir, group: Group) -> Resolution | None:
    """The cached resolution of ``group``, or ``None`` if absent, stale or damaged."""
    path = path_for(cache_dir, group)
    if not path.exists():
        return None
    try:
        res = decode(path.read_bytes(), group)
    except (CacheCorruption, KeyError, TypeError, ValueError) as exc:
        warnings.warn(f"discarding damaged cache file {path}: {exc}", CacheWarning, stacklevel=2)
        return None
    if res is None:
        log.info("ignoring %s: written by a different version", path)
    return res


def store(cache_dir, res: Resolution) -> Path:
    """Write ``res`` atomically under the per-file lock."""
    cache_dir = Path(cache_dir)
    cache_dir.mkdir(parents=True, exist_ok=True)
    path = path_for(cache_dir, res.group)
    blob = encode(res)
    with FileLock(str(path) + ".lock"):
        fd, tmp = tempfile.mkstemp(dir=cache_dir, prefix=path.name, suffix=".tmp")
        try:
            with os.fdopen(fd, "wb") as fh:
                fh.write(blob)
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
    return path


def entries(cache_dir) -> list[dict]:
    """Summary of every cache file in ``cache_dir``."""
    out = []
    for path in sorted(Path(cache_dir).glob("*.res")):
        info = {"file": path.name, "bytes": path.stat().st_size}
        try:
            header, _ = read_header(path.read_bytes())
            info.update(
                group=header.get("group"),
                ranks=header.get("ranks"),
                current=all(header.get(k) == v for k, v in _versions().items()),
            )
        except CacheCorruption as exc:
            info["error"] = str(exc)
        out.append(info)
    return out


def clear(cache_dir) -> int:
    """Remove every cache file (and lock file); returns the number of resolutions removed."""
    cache_dir = Path(cache_dir)
    if not cache_dir.exists():
        return 0
    count = 0
    for path in cache_dir.glob("*.res"):
        path.unlink()
        count += 1
    for path in cache_dir.glob("*.res.lock"):
        path.unlink(missing_ok=True)
    return count
