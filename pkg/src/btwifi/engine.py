"""Deterministic discrete-event core: virtual clock, event queue, seeded RNG streams.

All simulation time is kept in integer microsecond ticks.  Every protocol
duration used by the MAC (slot, SIFS, AIFS, airtimes) is an exact integer
number of microseconds, so there is no floating-point time anywhere in the
event loop and two runs with the same seed produce byte-identical traces.

Events with equal fire time dispatch in insertion order.  That tie-break is
purely for reproducibility: nothing physical may depend on it (the medium
decides collisions from interval overlap, not from dispatch order).
"""

from __future__ import annotations

import heapq
import random
from dataclasses import dataclass, field
from typing import Callable, Optional

# Base time unit: 1 microsecond.
SimTime = int


class ContractViolation(RuntimeError):
    """An internal precondition was broken; the run cannot continue."""


@dataclass(slots=True)
class Event:
    """A scheduled callback.  (fire_at, seq) totally orders all events."""

    fire_at: SimTime
    seq: int
    kind: str
    target: str
    fn: Callable[[], None] = field(repr=False)
    cancelled: bool = False


class Engine:
    """Single-run event loop.  Not shared between runs, never thread-safe."""

    def __init__(self) -> None:
        self.now: SimTime = 0
        self.dispatched = 0
        self._heap: list[tuple[SimTime, int, Event]] = []
        self._seq = 0

    def schedule(self, fire_at: SimTime, fn: Callable[[], None],
                 kind: str = "", target: str = "") -> Event:
        """Schedule fn at fire_at; returns a handle usable with cancel().

        Scheduling in the past is a fatal contract violation.
        """
        if fire_at < self.now:
            raise ContractViolation(
                f"schedule at t={fire_at} but clock is at t={self.now} ({kind})")
        ev = Event(fire_at, self._seq, kind, target, fn)
        self._seq += 1
        heapq.heappush(self._heap, (fire_at, ev.seq, ev))
        return ev

    def cancel(self, ev: Optional[Event]) -> bool:
        """Suppress a pending event.  False if already fired or cancelled."""
        if ev is None or ev.cancelled or ev.fn is None:
            return False
        ev.cancelled = True
        return True

    def run_until(self, t_end: SimTime) -> int:
        """Dispatch every event with fire_at <= t_end; clock ends at t_end."""
        if t_end < self.now:
            raise ContractViolation(f"run_until({t_end}) is before now={self.now}")
        heap = self._heap
        n = 0
        while heap and heap[0][0] <= t_end:
            fire_at, _, ev = heapq.heappop(heap)
            if ev.cancelled:
                continue
            self.now = fire_at
            fn = ev.fn
            ev.fn = None  # mark fired; also drops the closure reference
            fn()
            n += 1
        self.now = t_end
        self.dispatched += n
        return n

    def pending(self) -> int:
        return sum(1 for _, _, ev in self._heap if not ev.cancelled and ev.fn is not None)


class RngStream:
    """Deterministic pseudo-random stream keyed by (seed, stream id).

    Streams for different stations/purposes are derived independently from
    the master seed, so adding a station does not perturb anyone else's
    draw sequence.  Seeding goes through the string form, which CPython
    hashes with SHA-512: stable across processes and platforms.
    """

    def __init__(self, seed: int, stream_id: str) -> None:
        self.seed = seed
        self.stream_id = stream_id
        self._rng = random.Random(f"{seed}/{stream_id}")

    def uniform_int(self, lo: int, hi: int) -> int:
        """Uniform integer on [lo, hi], inclusive."""
        if lo > hi:
            raise ContractViolation(f"uniform_int: lo={lo} > hi={hi}")
        return self._rng.randint(lo, hi)

    def exponential(self, mean: SimTime) -> SimTime:
        """Exponential duration with the given mean, rounded to >= 1 tick."""
        if mean <= 0:
            raise ContractViolation(f"exponential: mean={mean} must be positive")
        d = round(self._rng.expovariate(1.0 / mean))
        return d if d >= 1 else 1


class RngStreams:
    """Factory handing out per-purpose streams from one master seed."""

    def __init__(self, master_seed: int) -> None:
        self.master_seed = master_seed

    def stream(self, stream_id: str) -> RngStream:
        return RngStream(self.master_seed, stream_id)
