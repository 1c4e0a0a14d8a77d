"""Opt-in operation counters for structural assertions and benchmarking.

Counters are disabled unless a `counting()` scope is active, so the hot
paths pay a single attribute check. Scopes nest: every active scope sees
every event, which lets a benchmark keep a grand total while a caller
snapshots one sub-computation.
"""

from contextlib import contextmanager
from dataclasses import dataclass


@dataclass
class Counters:
    modmul: int = 0        # general-width modular multiplications
    xof_bytes: int = 0     # bytes squeezed out of SHAKE streams
    swar_steps: int = 0    # packed-lane accumulation batches

    def snapshot(self) -> "Counters":
        return Counters(self.modmul, self.xof_bytes, self.swar_steps)


_active: list[Counters] = []


def add_modmul(count: int) -> None:
    for c in _active:
        c.modmul += count


def add_xof_bytes(count: int) -> None:
    for c in _active:
        c.xof_bytes += count


def add_swar_steps(count: int) -> None:
    for c in _active:
        c.swar_steps += count


@contextmanager
def counting():
    """Activate a fresh counter for the duration of the scope and yield it."""
    c = Counters()
    _active.append(c)
    try:
        yield c
    finally:
        _active.remove(c)
