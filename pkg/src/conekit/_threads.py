"""Internal parallelism cap.

CONEKIT_THREADS bounds the number of worker threads used by the quadrature
cell sweep.  Results are reduced in a fixed order, so output is
byte-identical for any cap value.
"""

from __future__ import annotations

import os


def thread_cap() -> int:
    raw = os.environ.get("CONEKIT_THREADS", "1")
    try:
        cap = int(raw)
    except ValueError:
        return 1
    return max(cap, 1)
