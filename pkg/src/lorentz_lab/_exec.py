"""Worker-pool helper honoring the LORENTZ_LAB_THREADS cap."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor


def worker_cap() -> int:
    raw = os.environ.get("LORENTZ_LAB_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def pmap(fn, items):
    """Map preserving input order; parallel over independent items when the
    environment allows more than one worker."""
    items = list(items)
    cap = worker_cap()
    if cap == 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=min(cap, len(items))) as pool:
        return list(pool.map(fn, items))
