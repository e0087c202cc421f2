"""Deterministic discrete-event scheduler.

All simulator modules share one kernel instance for time, event delivery
and the run trace.  Time is the integer microsecond; equal-timestamp
events dispatch in schedule order, which together with the single seeded
RNG stream makes every run bit-reproducible.
"""

from __future__ import annotations

import enum
import heapq
import random
from dataclasses import dataclass, field
from typing import Any, Callable, Optional


class EventKind(enum.Enum):
    FRAME_DELIVERY = "frame-delivery"
    INPUT_CHANGE = "input-change"
    SCAN_TICK = "scan-tick"
    RELAY_SETTLE = "relay-settle"
    USER_COMMAND = "user-command"


class SchedulingError(Exception):
    """Raised when an event is scheduled before the current sim time."""


@dataclass
class SimEvent:
    timestamp: int  # microseconds since simulation start
    kind: EventKind
    payload: Any = None


@dataclass
class TraceEntry:
    timestamp: int
    description: str
    state: str

    def to_line(self) -> str:
        return f"{self.timestamp:>12d} {self.description} | {self.state}"


class Trace:
    """Ordered record of dispatched events plus observable state snapshots."""

    def __init__(self) -> None:
        self.entries: list[TraceEntry] = []

    def append(self, timestamp: int, description: str, state: str) -> None:
        if self.entries and timestamp < self.entries[-1].timestamp:
            raise SchedulingError(
                f"non-monotonic trace: {timestamp} after {self.entries[-1].timestamp}"
            )
        self.entries.append(TraceEntry(timestamp, description, state))

    def to_text(self) -> str:
        return "\n".join(e.to_line() for e in self.entries) + "\n"

    def to_bytes(self) -> bytes:
        return self.to_text().encode("utf-8")

    def __len__(self) -> int:
        return len(self.entries)


class EventHandle:
    """Returned by schedule(); permits cancellation before dispatch."""

    __slots__ = ("event", "cancelled", "done", "_sim")

    def __init__(self, event: SimEvent, sim: "Simulator") -> None:
        self.event = event
        self.cancelled = False
        self.done = False
        self._sim = sim

    def cancel(self) -> None:
        if not self.done and not self.cancelled:
            self.cancelled = True
            self._sim.cancelled_count += 1


class Simulator:
    """Single-threaded event loop.

    Not shareable across threads: external commands must enter through a
    serialized command queue drained between events (see the service
    module).  ``snapshot_fn`` supplies the observable-state string
    recorded with each trace entry.
    """

    def __init__(self, seed: int = 0) -> None:
        self.now = 0
        self.rng = random.Random(seed)
        self.trace = Trace()
        self.snapshot_fn: Callable[[], str] = lambda: ""
        self._queue: list[tuple[int, int, EventHandle, Callable[[SimEvent], None]]] = []
        self._seq = 0
        self.scheduled_count = 0
        self.dispatched_count = 0
        self.cancelled_count = 0
        # drained between events; used by the live service for commands
        self.command_hook: Optional[Callable[[], None]] = None

    def schedule(
        self, event: SimEvent, handler: Callable[[SimEvent], None]
    ) -> EventHandle:
        if event.timestamp < self.now:
            raise SchedulingError(
                f"event at t={event.timestamp} scheduled in the past (now={self.now})"
            )
        handle = EventHandle(event, self)
        heapq.heappush(self._queue, (event.timestamp, self._seq, handle, handler))
        self._seq += 1
        self.scheduled_count += 1
        return handle

    def schedule_in(
        self, delay: int, kind: EventKind, payload: Any, handler: Callable[[SimEvent], None]
    ) -> EventHandle:
        return self.schedule(SimEvent(self.now + delay, kind, payload), handler)

    def record(self, description: str) -> None:
        self.trace.append(self.now, description, self.snapshot_fn())

    def pending_count(self) -> int:
        return sum(1 for _, _, h, _ in self._queue if not h.cancelled)

    def run_until(self, t_end: int) -> Trace:
        if t_end < self.now:
            raise SchedulingError(f"run_until({t_end}) is before now={self.now}")
        while self._queue and self._queue[0][0] <= t_end:
            ts, _, handle, handler = heapq.heappop(self._queue)
            if handle.cancelled:
                continue
            self.now = ts
            handle.done = True
            self.dispatched_count += 1
            handler(handle.event)
            if self.command_hook is not None:
                self.command_hook()
        self.now = t_end
        return self.trace

    def peek_next_time(self) -> Optional[int]:
        while self._queue and self._queue[0][2].cancelled:
            heapq.heappop(self._queue)
        return self._queue[0][0] if self._queue else None
