"""Shared record of acceptance verdicts, printed in the pytest terminal summary."""
from __future__ import annotations

from typing import Dict

LINES: Dict[int, str] = {}


def record(n: int, ok: bool, detail: str) -> None:
    line = f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    LINES[n] = line
    print(line)
