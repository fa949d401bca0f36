"""Per-run measurement: delay samples, throughput, counters, busy time.

Warm-up handling follows two different filters on purpose:

* delay samples count a frame iff it ARRIVED at or after the warm-up end
  (frames straddling the boundary would bias the sample);
* throughput counts payload bits of frames DELIVERED inside the
  measurement window, i.e. bits actually put through during it.

The terminal counters (delivered/dropped/collided/preempted and arrivals)
cover the whole run including warm-up so that the bookkeeping identity
arrivals == delivered + dropped + in-flight-at-end can be asserted exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .engine import ContractViolation, SimTime


def nearest_rank(sorted_samples: list, pct: int):
    """Nearest-rank percentile of an ascending, non-empty sample list."""
    n = len(sorted_samples)
    idx = (pct * n + 99) // 100 - 1  # ceil(pct*n/100) - 1
    return sorted_samples[idx if idx >= 0 else 0]


@dataclass(slots=True)
class RunSummary:
    scheme: str
    m_urllc: int
    n_regular: int
    seed: int
    sim_duration: SimTime
    warmup: SimTime
    urllc_delay_mean: Optional[float]
    urllc_delay_median: Optional[int]
    urllc_delay_p95: Optional[int]
    urllc_delay_p99: Optional[int]
    urllc_delay_max: Optional[int]
    urllc_delivered: int
    urllc_dropped: int
    urllc_collided: int
    regular_throughput_bps: float
    regular_delivered: int
    regular_dropped: int
    regular_preempted: int
    regular_collided: int
    channel_busy_fraction: float


class MetricsCollector:
    def __init__(self, warmup: SimTime, duration: SimTime) -> None:
        if not 0 <= warmup < duration:
            raise ValueError("need 0 <= warmup < duration")
        self.warmup = warmup
        self.duration = duration
        self.arrivals = {"regular": 0, "urllc": 0}
        self.delivered = {"regular": 0, "urllc": 0}
        self.dropped = {"regular": 0, "urllc": 0}
        self.collided = {"regular": 0, "urllc": 0}
        self.preempted = 0
        self.per_sta_delivered: dict[str, int] = {}
        self.urllc_delays: list[int] = []
        self.regular_bits = 0
        self._busy_since: Optional[SimTime] = None
        self._busy_in_window: SimTime = 0

    # -- frame lifecycle ----------------------------------------------------

    def on_arrival(self, cls: str) -> None:
        self.arrivals[cls] += 1

    def on_delivered(self, cls: str, sta: str, frame, payload_bits: int) -> None:
        self.delivered[cls] += 1
        self.per_sta_delivered[sta] = self.per_sta_delivered.get(sta, 0) + 1
        if cls == "urllc":
            if frame.arrival_time >= self.warmup:
                self.urllc_delays.append(frame.delivery_time - frame.arrival_time)
        elif frame.delivery_time >= self.warmup:
            self.regular_bits += payload_bits

    def on_dropped(self, cls: str) -> None:
        self.dropped[cls] += 1

    def on_collided(self, cls: str) -> None:
        self.collided[cls] += 1

    def on_preempted(self) -> None:
        self.preempted += 1

    # -- channel occupancy ----------------------------------------------------

    def on_main_busy(self, t: SimTime) -> None:
        self._busy_since = t

    def on_main_idle(self, t: SimTime) -> None:
        lo = self._busy_since if self._busy_since > self.warmup else self.warmup
        hi = t if t < self.duration else self.duration
        if hi > lo:
            self._busy_in_window += hi - lo
        self._busy_since = None

    # -- summary -------------------------------------------------------------

    def finalize(self, scheme: str, m_urllc: int, n_regular: int, seed: int,
                 in_flight: dict[str, int]) -> RunSummary:
        if self._busy_since is not None:
            self.on_main_idle(self.duration)
        for cls in ("regular", "urllc"):
            total = self.delivered[cls] + self.dropped[cls] + in_flight.get(cls, 0)
            if total != self.arrivals[cls]:
                raise ContractViolation(
                    f"{cls} frame accounting broken: {total} != {self.arrivals[cls]}")
        window = self.duration - self.warmup
        samples = sorted(self.urllc_delays)
        if samples:
            mean = sum(samples) / len(samples)
            median = nearest_rank(samples, 50)
            p95 = nearest_rank(samples, 95)
            p99 = nearest_rank(samples, 99)
            dmax = samples[-1]
        else:
            mean = median = p95 = p99 = dmax = None
        return RunSummary(
            scheme=scheme,
            m_urllc=m_urllc,
            n_regular=n_regular,
            seed=seed,
            sim_duration=self.duration,
            warmup=self.warmup,
            urllc_delay_mean=mean,
            urllc_delay_median=median,
            urllc_delay_p95=p95,
            urllc_delay_p99=p99,
            urllc_delay_max=dmax,
            urllc_delivered=self.delivered["urllc"],
            urllc_dropped=self.dropped["urllc"],
            urllc_collided=self.collided["urllc"],
            regular_throughput_bps=self.regular_bits * 1_000_000 / window,
            regular_delivered=self.delivered["regular"],
            regular_dropped=self.dropped["regular"],
            regular_preempted=self.preempted,
            regular_collided=self.collided["regular"],
            channel_busy_fraction=self._busy_in_window / window,
        )
