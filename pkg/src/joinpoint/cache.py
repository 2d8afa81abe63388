"""On-disk cache of simulated null distributions.

Entries are keyed by the exact simulation parameters (method, trimming,
grid size, replicate count, seed, schema version); a hit reproduces the
distribution bit for bit, including every draw.  Writes go through a
temporary file and an atomic rename, so concurrent readers never observe
a partial entry.
"""
from __future__ import annotations

import base64
import hashlib
import json
import os
import tempfile
from pathlib import Path
from typing import Optional

import numpy as np

from .errors import CacheCorruption
from .nulldist import NullDistribution

CACHE_SCHEMA_VERSION = 1

ENV_CACHE_DIR = "JOINPOINT_CACHE_DIR"


def default_cache_dir() -> Path:
    env = os.environ.get(ENV_CACHE_DIR)
    if env:
        return Path(env)
    return Path.home() / ".cache" / "joinpoint"


def _encode_array(arr: np.ndarray) -> str:
    return base64.b64encode(np.asarray(arr, dtype="<f8").tobytes()).decode("ascii")


def _decode_array(text: str) -> np.ndarray:
    arr = np.frombuffer(base64.b64decode(text.encode("ascii")), dtype="<f8")
    return arr.astype(float)


class QuantileCache:
    """Filesystem cache mapping simulation parameters to null draws."""

    def __init__(self, directory=None):
        self.directory = Path(directory) if directory is not None \
            else default_cache_dir()

    def _key_fields(self, method, delta, grid_size, replicates, seed) -> dict:
        return {
            "method": str(method),
            "delta": repr(float(delta)),
            "grid_size": int(grid_size),
            "replicates": int(replicates),
            "seed": int(seed),
            "schema_version": CACHE_SCHEMA_VERSION,
        }

    def _path_for(self, fields: dict) -> Path:
        canon = json.dumps(fields, sort_keys=True, separators=(",", ":"))
        digest = hashlib.sha256(canon.encode("ascii")).hexdigest()[:32]
        return self.directory / f"null-{digest}.json"

    def get(self, method, delta, grid_size, replicates, seed) -> Optional[NullDistribution]:
        """Fetch a cached distribution, or None on a miss.

        A present but undecodable or mismatched entry raises
        CacheCorruption rather than silently resimulating.
        """
        fields = self._key_fields(method, delta, grid_size, replicates, seed)
        path = self._path_for(fields)
        if not path.exists():
            return None
        try:
            payload = json.loads(path.read_text(encoding="ascii"))
        except (ValueError, OSError) as exc:
            raise CacheCorruption(f"unreadable cache entry {path}: {exc}")
        stored = payload.get("key")
        if stored != fields:
            raise CacheCorruption(
                f"cache entry {path} does not match its key: {stored}")
        try:
            draws = _decode_array(payload["draws"])
            grid = _decode_array(payload["grid"])
        except (KeyError, ValueError) as exc:
            raise CacheCorruption(f"undecodable cache entry {path}: {exc}")
        if draws.size != int(fields["replicates"]) or grid.size != int(fields["grid_size"]):
            raise CacheCorruption(f"cache entry {path} has wrong array sizes")
        draws.flags.writeable = False
        grid.flags.writeable = False
        return NullDistribution(
            delta=float(fields["delta"]), grid=grid, draws=draws,
            seed=int(fields["seed"]), method=str(fields["method"]),
            n_sim=int(fields["replicates"]))

    def put(self, dist: NullDistribution) -> Path:
        """Store a distribution; atomic replace, safe against readers."""
        fields = self._key_fields(dist.method, dist.delta, dist.grid.size,
                                  dist.n_sim, dist.seed)
        path = self._path_for(fields)
        payload = {
            "key": fields,
            "draws": _encode_array(dist.draws),
            "grid": _encode_array(dist.grid),
        }
        self.directory.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=self.directory, suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="ascii") as handle:
                json.dump(payload, handle)
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
        return path
