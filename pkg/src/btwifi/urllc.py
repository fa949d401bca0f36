"""Busy-tone priority extension for low-latency stations.

A station with a pending low-latency frame asserts a continuous tone on
the control channel for the whole service of that frame (first attempt,
retries, until the ack or the drop).  Regular stations hearing the tone
vacate the main channel and suspend their backoff, so low-latency frames
only ever contend with each other.

If the control channel is idle at the instant the tone goes up, the
asserting station is the only one with low-latency traffic and skips the
backoff entirely: its data goes on air one AIFS after the tone onset, ack
SIFS after that.  The AIFS gap gives a preempted regular transmitter time
to vacate.  If the control channel is already busy, the station joins the
tone and runs the normal EDCA procedure against main-channel idleness -
the tone never freezes another tone holder's backoff, otherwise all
holders would deadlock.

Arrivals within the same microsecond each see an idle control channel and
each take the no-backoff path; the resulting collision between them is
resolved by ordinary EDCA retries while both tones stay up.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .engine import SimTime
from .mac import Frame, Station


@dataclass(slots=True)
class ToneSession:
    sta: str
    started_at: SimTime
    fast_path: bool
    ends_at: Optional[SimTime] = None


class UrllcStation(Station):
    """Station running the tone scheme for its own traffic.

    Never suspended by tones (reacts_to_tone stays False); collisions
    inside the low-latency class are handled by the inherited EDCA retry.
    """

    def __init__(self, *args, **kwargs) -> None:
        kwargs["reacts_to_tone"] = False
        super().__init__(*args, **kwargs)
        self.session: Optional[ToneSession] = None

    def _after_enqueue(self, frame: Frame) -> None:
        now = self.engine.now
        fast = not self.medium.tone_asserted_before(now)
        self.session = ToneSession(self.sta_id, now, fast)
        if fast:
            # Sole tone holder: data goes on air AIFS after the tone onset,
            # no backoff draw at all, independent of main-channel history.
            self.counter = 0
            self._fast_ev = self.engine.schedule(
                now + self.aifs_us, self._fire_fast, kind="fast-path",
                target=self.sta_id)
        else:
            self.counter = self.rng.uniform_int(0, self.cw_current)
        if self.tracer is not None:
            self.tracer.tone_on(now, self.sta_id, fast)
        # Asserting may preempt a regular transmitter and cascade busy/idle
        # notifications; the fast event is already up so _try_arm stays out.
        self.medium.busy_tone_set(self.sta_id, True)
        if not fast:
            self._try_arm()

    def _fire_fast(self) -> None:
        self._fast_ev = None
        self._begin_data_tx()

    def _after_service(self, frame: Frame, outcome: str) -> None:
        now = self.engine.now
        self.session.ends_at = now
        if self.tracer is not None:
            self.tracer.tone_off(now, self.sta_id, outcome)
        self.medium.busy_tone_set(self.sta_id, False)
        super()._after_service(frame, outcome)
