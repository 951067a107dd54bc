"""
On-disk cache for sieved segments.

File layout (little-endian):
    magic   6 bytes  b"D3SEG\\0"
    version u16      1
    k       u8
    lo      u64
    hi      u64
    values  (hi - lo) x u32
    fnv1a   u64      64-bit FNV-1a of the values payload

Misses and unreadable files are silent apart from a debug log line.
"""

import logging
import struct
from pathlib import Path
from typing import Optional, Union

import numpy as np

logger = logging.getLogger(__name__)

MAGIC = b"D3SEG\0"
VERSION = 1
HEADER = struct.Struct("<6sHBQQ")
CHECKSUM = struct.Struct("<Q")

FNV_OFFSET = 0xCBF29CE484222325
FNV_PRIME = 0x100000001B3
MASK64 = (1 << 64) - 1


def fnv1a_64(payload: bytes) -> int:
    h = FNV_OFFSET
    for byte in payload:
        h = ((h ^ byte) * FNV_PRIME) & MASK64
    return h


def cache_path(cache_dir: Union[str, Path], k: int, lo: int, hi: int) -> Path:
    return Path(cache_dir) / f"d{k}_{lo}_{hi}_v{VERSION}.seg"


def load_values(cache_dir: Union[str, Path], k: int, lo: int, hi: int) -> Optional[np.ndarray]:
    """
    Read cached d_k values for (lo, hi].

    Returns:
        int64 array of length hi - lo, or None on any miss
    """
    path = cache_path(cache_dir, k, lo, hi)
    try:
        data = path.read_bytes()
    except OSError:
        logger.debug(f"Segment cache miss: {path}")
        return None

    expected = HEADER.size + 4 * (hi - lo) + CHECKSUM.size
    if len(data) != expected:
        logger.debug(f"Segment cache entry {path} has wrong size {len(data)}")
        return None
    magic, version, k_file, lo_file, hi_file = HEADER.unpack_from(data)
    if (magic, version, k_file, lo_file, hi_file) != (MAGIC, VERSION, k, lo, hi):
        logger.debug(f"Segment cache entry {path} has a mismatched header")
        return None

    payload = data[HEADER.size:-CHECKSUM.size]
    (stored,) = CHECKSUM.unpack_from(data, len(data) - CHECKSUM.size)
    if fnv1a_64(payload) != stored:
        logger.debug(f"Segment cache entry {path} failed its checksum")
        return None
    return np.frombuffer(payload, dtype="<u4").astype(np.int64)


def store_values(cache_dir: Union[str, Path], k: int, lo: int, hi: int,
                 values: np.ndarray) -> Path:
    """Write values for (lo, hi] atomically (temp file, then rename)."""
    if len(values) != hi - lo:
        raise ValueError(f"Expected {hi - lo} values, got {len(values)}")
    if values.max(initial=0) > np.iinfo(np.uint32).max:
        raise OverflowError("Segment values do not fit the u32 cache format")

    directory = Path(cache_dir)
    directory.mkdir(parents=True, exist_ok=True)
    path = cache_path(directory, k, lo, hi)
    payload = values.astype("<u4").tobytes()
    tmp = path.with_suffix(".tmp")
    with open(tmp, "wb") as f:
        f.write(HEADER.pack(MAGIC, VERSION, k, lo, hi))
        f.write(payload)
        f.write(CHECKSUM.pack(fnv1a_64(payload)))
    tmp.replace(path)
    logger.debug(f"Cached segment {path}")
    return path
