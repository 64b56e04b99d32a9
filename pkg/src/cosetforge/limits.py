"""Default resource caps. Every long-running operation takes its cap as an argument."""

from __future__ import annotations

ELEMENT_CAP = 20_000
CONJUGACY_SCAN_CAP = 2_000_000
PAIR_SCAN_CAP = 2_000_000
INDEX_CAP = 100_000
AUT_CAP = 20_000
SCAN_CAP = 250_000_000
COSET_CAP = 100_000
ISO_FALLBACK_CAP = 500
SARC_ENUM_CAP = 500


class CapExceeded(RuntimeError):
    """Raised when an operation would exceed a configured size cap."""
