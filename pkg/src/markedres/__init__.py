"""Marked bases over quasi-stable modules, their syzygies and resolutions."""
from __future__ import annotations

__version__ = "0.1.0"
