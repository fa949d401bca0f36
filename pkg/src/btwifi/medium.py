"""The shared radio: main data channel plus the narrowband tone channel.

Main channel model: no capture, no noise.  A transmission is delivered iff
its airtime interval [start, end) intersects no other transmission's
interval; back-to-back frames (one ending exactly when the next starts) do
not collide.  Aborted transmissions keep their truncated interval for
overlap purposes - the energy was on air.

Tone channel model: a set of stations may assert a continuous tone;
listeners only see busy/idle, so overlapping tones are indistinguishable
from a single one.  Both channels broadcast their busy/idle transitions to
every station (single broadcast domain, no hidden stations).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

from .engine import ContractViolation, Engine, SimTime

CLEAN = "clean"
COLLIDED = "collided"
ABORTED = "aborted"


@dataclass(slots=True)
class Transmission:
    tx_id: int
    sta: str
    frame_kind: str  # "regular-data" | "urllc-data" | "ack"
    start: SimTime
    duration: SimTime
    on_end: Callable[[str], None]
    aborted_at: Optional[SimTime] = None
    dirty: bool = False  # overlapped some other transmission at any point
    _end_ev: object = None

    @property
    def end(self) -> SimTime:
        return self.aborted_at if self.aborted_at is not None else self.start + self.duration


class Medium:
    """Owns both channels; mutated only from its run's event loop.

    listeners is the fixed, ordered list of stations; broadcasts iterate it
    in order so runs are reproducible.
    """

    def __init__(self, engine: Engine, detection_delay: SimTime = 0,
                 collector=None, tracer=None) -> None:
        self.engine = engine
        self.detection_delay = detection_delay
        self.collector = collector
        self.tracer = tracer
        self.listeners: list = []
        self._active: dict[int, Transmission] = {}
        self._next_tx_id = 0
        self._tones: dict[str, SimTime] = {}  # sta -> assertion time

    # -- main data channel ------------------------------------------------

    def is_main_busy(self) -> bool:
        return bool(self._active)

    def begin_transmission(self, sta: str, frame_kind: str, duration: SimTime,
                           on_end: Callable[[str], None], frame_id=None) -> Transmission:
        now = self.engine.now
        for other in self._active.values():
            if other.sta == sta:
                raise ContractViolation(f"{sta} began a second transmission at t={now}")
        tx = Transmission(self._next_tx_id, sta, frame_kind, now, duration, on_end)
        self._next_tx_id += 1
        was_idle = not self._active
        if not was_idle:
            tx.dirty = True
            for other in self._active.values():
                other.dirty = True
        self._active[tx.tx_id] = tx
        tx._end_ev = self.engine.schedule(now + duration, lambda: self._finish(tx),
                                          "tx-end", sta)
        if self.tracer is not None:
            self.tracer.tx_start(now, sta, tx.tx_id, frame_kind, duration, frame_id)
        if was_idle:
            if self.collector is not None:
                self.collector.on_main_busy(now)
            for sta_obj in self.listeners:
                sta_obj.on_main_busy(now)
        return tx

    def abort_transmission(self, tx: Transmission, at: SimTime) -> None:
        if tx.tx_id not in self._active:
            raise ContractViolation(f"abort of inactive transmission {tx.tx_id}")
        if at != self.engine.now:
            raise ContractViolation("abort must happen at the current instant")
        self.engine.cancel(tx._end_ev)
        tx.aborted_at = at
        self._remove(tx, ABORTED)

    def _finish(self, tx: Transmission) -> None:
        self._remove(tx, COLLIDED if tx.dirty else CLEAN)

    def _remove(self, tx: Transmission, outcome: str) -> None:
        now = self.engine.now
        del self._active[tx.tx_id]
        if self.tracer is not None:
            self.tracer.tx_end(now, tx.tx_id, outcome)
        if not self._active:
            if self.collector is not None:
                self.collector.on_main_idle(now)
            for sta_obj in self.listeners:
                sta_obj.on_main_idle(now)
        tx.on_end(outcome)

    # -- tone (control) channel --------------------------------------------

    def is_control_busy(self) -> bool:
        return bool(self._tones)

    def tone_asserted_before(self, t: SimTime) -> bool:
        """True iff some tone was already up strictly before instant t.

        Arrivals that assert within the same microsecond therefore each see
        an idle control channel; they all go on to transmit immediately and
        collide with each other, which is exactly the contention the scheme
        leaves unresolved.
        """
        return any(since < t for since in self._tones.values())

    def busy_tone_set(self, sta: str, on: bool) -> str:
        """Assert/release sta's tone; returns the channel transition."""
        now = self.engine.now
        if on:
            if sta in self._tones:
                raise ContractViolation(f"{sta} asserted its tone twice")
            was_busy = bool(self._tones)
            self._tones[sta] = now
            if was_busy:
                return "none"
            self._broadcast_control(True, now)
            return "idle-to-busy"
        if sta not in self._tones:
            raise ContractViolation(f"{sta} released a tone it does not hold")
        del self._tones[sta]
        if self._tones:
            return "none"
        self._broadcast_control(False, now)
        return "busy-to-idle"

    def _broadcast_control(self, busy: bool, at: SimTime) -> None:
        if self.detection_delay == 0:
            self._deliver_control(busy)
        else:
            self.engine.schedule(at + self.detection_delay,
                                 lambda: self._deliver_control(busy),
                                 kind="busy-tone-on" if busy else "busy-tone-off",
                                 target="medium")

    def _deliver_control(self, busy: bool) -> None:
        now = self.engine.now
        if busy:
            for sta_obj in self.listeners:
                sta_obj.on_control_busy(now)
        else:
            for sta_obj in self.listeners:
                sta_obj.on_control_idle(now)
