"""Canonical JSON serialization shared by persistence, charts and the API."""

from __future__ import annotations

import json


def canonical_json(payload) -> str:
    """Sorted keys, tight separators, raw unicode: byte-stable for equal input."""
    return json.dumps(payload, sort_keys=True, ensure_ascii=False, separators=(",", ":"))
