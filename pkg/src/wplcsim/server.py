"""Live operator service: wall-clock-paced simulation behind a local HTTP API.

Surface (JSON, schema version 1, documented in docs/api.md):

    GET  /snapshot          -> full state snapshot
    POST /switch            -> {"index": 0-7, "on": bool}
    GET  /events            -> server-sent-event stream of snapshots

API handlers never touch simulator state directly: commands go through a
serialized queue drained between simulation events, and snapshots are
immutable copies published by the simulation thread.
"""

from __future__ import annotations

import json
import queue
import threading
import time
from typing import Any, Optional

from fastapi import FastAPI, HTTPException, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import StreamingResponse

from .bridge import Deployment
from .scenario import Scenario

SCHEMA_VERSION = 1


class LiveSession:
    """Owns one Deployment and paces it against the wall clock.

    ``time_scale`` is simulated time per wall time: 2.0 runs the process
    twice as fast as real time.  The simulation runs only inside
    ``run_slice``/``run_paced``; API threads interact via ``submit`` and
    the published snapshots.
    """

    def __init__(self, scenario: Scenario, time_scale: float = 1.0) -> None:
        if time_scale <= 0:
            raise ValueError("time_scale must be positive")
        self.scenario = scenario
        self.time_scale = time_scale
        self.world = Deployment(scenario)
        self.world.configure_and_pair()
        self.world.start()
        self.world.sim.command_hook = self._drain_commands
        self._commands: "queue.Queue[tuple[int, bool]]" = queue.Queue()
        self._subscribers: list["queue.Queue[dict]"] = []
        self._subscribers_lock = threading.Lock()
        self._last_published: Optional[dict] = None
        self._stop = threading.Event()

    # -- commands (any thread) ------------------------------------------

    def submit_switch(self, index: int, on: bool) -> None:
        if not 0 <= index < 8:
            raise ValueError(f"switch index {index} out of range")
        self._commands.put((index, on))

    def subscribe(self) -> "queue.Queue[dict]":
        q: "queue.Queue[dict]" = queue.Queue()
        with self._subscribers_lock:
            self._subscribers.append(q)
        q.put(self.snapshot())
        return q

    def unsubscribe(self, q: "queue.Queue[dict]") -> None:
        with self._subscribers_lock:
            if q in self._subscribers:
                self._subscribers.remove(q)

    def stop(self) -> None:
        self._stop.set()

    # -- simulation thread ----------------------------------------------

    def _drain_commands(self) -> None:
        while True:
            try:
                index, on = self._commands.get_nowait()
            except queue.Empty:
                return
            self.world.set_switch(index, on)

    def snapshot(self) -> dict[str, Any]:
        world = self.world
        images = world.images
        link = world.link
        latencies = [lat for _, lat in world.latencies if lat is not None]
        return {
            "version": SCHEMA_VERSION,
            "time_us": world.sim.now,
            "switches": [(world.field.switch_states >> i) & 1 for i in range(8)],
            "inputs": [(images.input_image >> i) & 1 for i in range(8)],
            "outputs": [(images.output_image >> i) & 1 for i in range(6)],
            "link": {
                "paired": bool(link is not None and link.alive),
                "sent": link.sent if link else 0,
                "delivered": link.delivered if link else 0,
                "dropped": link.dropped if link else 0,
                "ok": world.plc.frames_ok,
                "stale": world.plc.frames_stale,
                "corrupt": world.plc.frames_corrupt,
            },
            "last_latency_us": latencies[-1] if latencies else None,
        }

    def _publish_if_changed(self) -> None:
        snap = self.snapshot()
        if self._last_published is not None:
            unchanged = {k: v for k, v in snap.items() if k != "time_us"} == {
                k: v for k, v in self._last_published.items() if k != "time_us"
            }
            if unchanged:
                return
        self._last_published = snap
        with self._subscribers_lock:
            for q in self._subscribers:
                q.put(snap)

    def run_slice(self, target_us: int) -> None:
        """Advance the simulation to target_us, applying queued commands."""
        self._drain_commands()
        self.world.sim.run_until(target_us)
        self._publish_if_changed()

    def run_paced(self, quantum_wall_s: float = 0.01) -> None:
        """Pacing loop; returns when stop() is called."""
        while not self._stop.is_set():
            start = time.monotonic()
            step_us = max(1, int(quantum_wall_s * 1e6 * self.time_scale))
            self.run_slice(self.world.sim.now + step_us)
            elapsed = time.monotonic() - start
            remaining = quantum_wall_s - elapsed
            if remaining > 0:
                self._stop.wait(remaining)


def create_app(session: LiveSession):
    """FastAPI app over a running LiveSession."""
    app = FastAPI(title="wplcsim live service")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )

    @app.get("/snapshot")
    def get_snapshot():
        return session.snapshot()

    @app.post("/switch")
    async def post_switch(request: Request):
        try:
            body = await request.json()
        except Exception:
            raise HTTPException(status_code=422, detail="body must be JSON")
        index, on = body.get("index"), body.get("on")
        if not isinstance(index, int) or not isinstance(on, bool):
            raise HTTPException(
                status_code=422, detail="need {'index': 0-7, 'on': bool}"
            )
        try:
            session.submit_switch(index, on)
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        return {"accepted": True}

    @app.get("/events")
    def get_events():
        def stream():
            q = session.subscribe()
            try:
                while True:
                    try:
                        snap = q.get(timeout=0.5)
                    except queue.Empty:
                        yield ": keepalive\n\n"
                        continue
                    yield f"data: {json.dumps(snap, sort_keys=True)}\n\n"
            finally:
                session.unsubscribe(q)

        return StreamingResponse(stream(), media_type="text/event-stream")

    return app


def serve(scenario: Scenario, port: int = 8471, time_scale: float = 1.0) -> None:
    """Run the live session and API until interrupted."""
    import uvicorn

    session = LiveSession(scenario, time_scale=time_scale)
    app = create_app(session)
    sim_thread = threading.Thread(target=session.run_paced, daemon=True)
    sim_thread.start()
    try:
        uvicorn.run(app, host="127.0.0.1", port=port, log_level="warning")
    finally:
        session.stop()
        sim_thread.join(timeout=2.0)
