"""Check records shared by the verification suites and the CLI."""

from __future__ import annotations

import hashlib

import numpy as np


def inputs_digest(*parts) -> str:
    """Short stable digest of heterogeneous inputs (arrays, strings, numbers)."""
    h = hashlib.sha256()
    for p in parts:
        if isinstance(p, np.ndarray):
            h.update(str(p.shape).encode())
            h.update(np.ascontiguousarray(p).tobytes())
        else:
            h.update(repr(p).encode())
    return h.hexdigest()[:12]


def check_record(op: str, lhs: float, rhs: float, holds: bool,
                 digest: str = "", seed=None, **detail) -> dict:
    rec = {
        "op": op,
        "inputs_digest": digest,
        "lhs": float(lhs),
        "rhs": float(rhs),
        "holds": bool(holds),
        "seed": seed,
    }
    if detail:
        rec["detail"] = detail
    return rec
