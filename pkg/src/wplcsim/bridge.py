"""Field-side and PLC-side controllers and the end-to-end wiring.

The field bridge samples switches and transmits the whole 8-bit input
image in one frame, on every change and at every report period.  The
PLC bridge decodes frames and energizes one relay coil per input
channel; closed contacts feed 24 V into the PLC input module, which the
scan cycle samples at every tick.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

from . import btlink, electrical
from .btlink import BtModule, Channel, FrameError, Link
from .ladder import ImageTables, LadderProgram, parse_program, scan_cycle
from .netmodels import NetworkSpec
from .scenario import Scenario
from .simkernel import EventKind, SimEvent, Simulator, Trace


class NodeCapError(Exception):
    """More field nodes than the network's node cap allows."""


class FieldNetwork:
    """Tracks field nodes attached to one network deployment."""

    def __init__(self, spec: NetworkSpec) -> None:
        self.spec = spec
        self.nodes: list[str] = []

    def attach(self, node_id: str) -> None:
        if len(self.nodes) >= self.spec.max_nodes:
            raise NodeCapError(
                f"{self.spec.name} supports {self.spec.max_nodes} nodes; "
                f"cannot attach {node_id!r}"
            )
        self.nodes.append(node_id)


class FieldBridge:
    """Arduino-analog on the switch side: debounce, report, refresh."""

    def __init__(
        self,
        sim: Simulator,
        module: BtModule,
        report_period_us: int = 50_000,
        debounce_us: int = 0,
    ) -> None:
        self.sim = sim
        self.module = module
        self.report_period_us = report_period_us
        self.debounce_us = debounce_us
        self.switch_states = 0
        self.last_reported = 0
        self.seq = 0
        self._debounce_handle = None
        # wired by the deployment; receives delivered frame bytes
        self.on_delivered: Callable[[bytes], None] = lambda data: None

    def start(self) -> None:
        self.sim.schedule_in(
            self.report_period_us, EventKind.SCAN_TICK, "refresh", self._refresh
        )

    def set_switch(self, index: int, on: bool) -> None:
        """Apply a switch edge at the current sim time."""
        if not 0 <= index < 8:
            raise ValueError(f"switch index {index} out of range")
        before = self.switch_states
        if on:
            self.switch_states |= 1 << index
        else:
            self.switch_states &= ~(1 << index)
        if self.switch_states == before:
            return
        if self.debounce_us == 0:
            self._report_if_changed()
            return
        # wait for the state to hold still; a revert inside the window
        # cancels the report entirely
        if self._debounce_handle is not None:
            self._debounce_handle.cancel()
        self._debounce_handle = self.sim.schedule_in(
            self.debounce_us, EventKind.INPUT_CHANGE, "debounce",
            lambda _e: self._report_if_changed(),
        )

    def _report_if_changed(self) -> None:
        if self.switch_states != self.last_reported:
            self._send_frame()

    def _refresh(self, _event: SimEvent) -> None:
        self._send_frame()
        self.sim.schedule_in(
            self.report_period_us, EventKind.SCAN_TICK, "refresh", self._refresh
        )

    def _send_frame(self) -> None:
        link = self.module.link
        if link is None or not link.alive:
            self.sim.record("link-down: frame skipped")
            return
        data = btlink.encode_frame(self.switch_states, self.seq)
        seq = self.seq
        self.seq = (self.seq + 1) & 0xFF
        self.last_reported = self.switch_states
        sent = btlink.transmit(link, data, self.sim, self.on_delivered)
        if not sent:
            self.sim.record(f"frame-dropped seq={seq} image=0x{self.switch_states:02X}")


class PlcBridge:
    """Arduino-analog on the PLC side: decode frames, drive relay coils."""

    def __init__(
        self,
        sim: Simulator,
        relay_settle_us: int = electrical.DEFAULT_SETTLE_US,
        relay_pull_in_volts: float = electrical.DEFAULT_PULL_IN_VOLTS,
        input_logic_threshold_volts: float = electrical.DEFAULT_PLC_LOGIC_THRESHOLD,
    ) -> None:
        self.sim = sim
        self.input_logic_threshold_volts = input_logic_threshold_volts
        self.relays = [
            electrical.Relay(
                pull_in_threshold=relay_pull_in_volts, settle_time=relay_settle_us
            )
            for _ in range(8)
        ]
        self._settle_handles: list[Optional[object]] = [None] * 8
        self.last_seq: Optional[int] = None
        self.frames_ok = 0
        self.frames_stale = 0
        self.frames_corrupt = 0

    def on_frame(self, data: bytes) -> None:
        """Handle one delivered frame; corrupt frames leave coils unchanged."""
        try:
            image, seq = btlink.decode_frame(data)
        except FrameError as exc:
            self.frames_corrupt += 1
            self.sim.record(f"frame-corrupt: {type(exc).__name__}")
            return
        if seq == self.last_seq:
            self.frames_stale += 1
            self.sim.record(f"frame-stale seq={seq}")
        else:
            self.frames_ok += 1
            self.last_seq = seq
            self.sim.record(f"frame-ok seq={seq} image=0x{image:02X}")
        self.apply_image(image)

    def apply_image(self, image: int) -> None:
        for k in range(8):
            volts = electrical.RELAY_COIL_VOLTS if (image >> k) & 1 else 0.0
            self._drive_coil(k, volts)

    def _drive_coil(self, k: int, volts: float) -> None:
        old = self.relays[k]
        new = electrical.relay_step(old, volts, self.sim.now)
        self.relays[k] = new
        if new.pending_at == old.pending_at and new.pending_target == old.pending_target:
            return
        handle = self._settle_handles[k]
        if handle is not None:
            handle.cancel()
            self._settle_handles[k] = None
        if new.pending_at is not None:
            self._settle_handles[k] = self.sim.schedule(
                SimEvent(new.pending_at, EventKind.RELAY_SETTLE, k), self._on_settle
            )

    def _on_settle(self, event: SimEvent) -> None:
        k = event.payload
        relay = self.relays[k]
        if relay.pending_at != self.sim.now:
            return  # superseded transition
        settled = electrical.relay_settle(relay, self.sim.now)
        self.relays[k] = settled
        self._settle_handles[k] = None
        state = "closed" if settled.contact_closed else "open"
        self.sim.record(f"relay-{k} contact {state}")

    def sample_inputs(self) -> int:
        """Input image as seen by the PLC's 24 V input channels."""
        image = 0
        for k, relay in enumerate(self.relays):
            level = electrical.ChannelLevel(
                electrical.relay_contact_level(relay).voltage,
                self.input_logic_threshold_volts,
            )
            image |= electrical.sample_input_channel(level) << k
        return image


@dataclass
class Metrics:
    frames_sent: int = 0
    frames_delivered: int = 0
    frames_dropped: int = 0
    frames_ok: int = 0
    frames_stale: int = 0
    frames_corrupt: int = 0
    latencies: list[tuple[int, Optional[int]]] = field(default_factory=list)
    final_input_image: int = 0
    final_output_image: int = 0

    def to_text(self) -> str:
        lines = [
            f"frames sent={self.frames_sent} delivered={self.frames_delivered} "
            f"dropped={self.frames_dropped}",
            f"frames ok={self.frames_ok} stale={self.frames_stale} "
            f"corrupt={self.frames_corrupt}",
            f"final input image  = 0x{self.final_input_image:02X}",
            f"final output image = 0x{self.final_output_image:02X}",
        ]
        for t, lat in self.latencies:
            shown = f"{lat} us" if lat is not None else "no output change"
            lines.append(f"stimulus at {t} us -> {shown}")
        return "\n".join(lines) + "\n"


# demo addresses in HC05 NAP:UAP:LAP form
FIELD_ADDRESS = "98d3:31:fc190f"
PLC_ADDRESS = "98d3:32:206a1b"


class Deployment:
    """All modules wired together for one scenario run."""

    def __init__(self, scenario: Scenario) -> None:
        scenario.validate()
        self.scenario = scenario
        self.sim = Simulator(seed=scenario.seed)
        self.sim.snapshot_fn = self._snapshot
        self.program: LadderProgram = parse_program(scenario.program)
        self.images = ImageTables()
        ov = scenario.overrides
        self.network = FieldNetwork(scenario.network)
        self.field_module = BtModule(FIELD_ADDRESS)
        self.plc_module = BtModule(PLC_ADDRESS)
        self.field = FieldBridge(
            self.sim, self.field_module,
            report_period_us=ov.report_period_us, debounce_us=ov.debounce_us,
        )
        self.plc = PlcBridge(
            self.sim,
            relay_settle_us=ov.relay_settle_us,
            relay_pull_in_volts=ov.relay_pull_in_volts,
            input_logic_threshold_volts=ov.input_logic_threshold_volts,
        )
        self.field.on_delivered = self.plc.on_frame
        self.link: Optional[Link] = None
        self._pending_stimuli: list[int] = []
        self.latencies: list[tuple[int, Optional[int]]] = []
        self._scan_count = 0

    # -- setup ---------------------------------------------------------

    def configure_and_pair(self) -> None:
        """Run the AT configuration handshake and establish the link."""
        sim = self.sim
        for cmd, module in (
            ("AT+ROLE=0", self.field_module),
            ("AT+ROLE=1", self.plc_module),
            (f"AT+BIND={self.field_module.address}", self.plc_module),
        ):
            response = btlink.at_command(module, cmd)
            sim.record(f"at {module.address} {cmd} -> {response}")
        btlink.enter_data_mode(self.field_module)
        btlink.enter_data_mode(self.plc_module)
        self.network.attach(self.field_module.address)
        self.link = btlink.pair(self.plc_module, self.field_module, sim.now)
        self.link.channel = Channel(
            spec=self.scenario.network,
            loss=self.scenario.channel.loss,
            jitter_us=self.scenario.channel.jitter_us,
        )
        sim.record(
            f"link-up master={self.plc_module.address} "
            f"slave={self.field_module.address} net={self.scenario.network.name}"
        )

    def start(self) -> None:
        ov = self.scenario.overrides
        self.field.start()
        self.sim.schedule(
            SimEvent(0, EventKind.SCAN_TICK, "scan"), self._scan_tick
        )
        self._scan_period = ov.scan_period_us
        for st in self.scenario.stimuli:
            self.sim.schedule(
                SimEvent(st.time_us, EventKind.INPUT_CHANGE, st), self._apply_stimulus
            )

    # -- event handlers ------------------------------------------------

    def set_switch(self, index: int, on: bool, record: bool = True) -> None:
        before = self.field.switch_states
        self.field.set_switch(index, on)
        changed = before != self.field.switch_states
        if changed:
            self._pending_stimuli.append(self.sim.now)
        if record:
            state = "on" if on else "off"
            self.sim.record(f"switch-{index} {state}")

    def _apply_stimulus(self, event: SimEvent) -> None:
        st = event.payload
        self.set_switch(st.switch, st.on)

    def _scan_tick(self, event: SimEvent) -> None:
        x_image = self.plc.sample_inputs()
        before = self.images
        self.images = scan_cycle(
            self.program, ImageTables(x_image, 0, before.internal_bits)
        )
        self._scan_count += 1
        output_changed = self.images.output_image != before.output_image
        if output_changed:
            latency = None
            if self._pending_stimuli:
                latency = self.sim.now - self._pending_stimuli.pop(0)
                self.latencies.append((self.sim.now - latency, latency))
            self.sim.record(
                f"scan output-change Y=0x{self.images.output_image:02X}"
            )
        elif x_image != before.input_image:
            self.sim.record(f"scan input-change X=0x{x_image:02X}")
        self.sim.schedule(
            SimEvent(self.sim.now + self._scan_period, EventKind.SCAN_TICK, "scan"),
            self._scan_tick,
        )

    # -- observability ---------------------------------------------------

    def _snapshot(self) -> str:
        link = self.link
        sent = link.sent if link else 0
        delivered = link.delivered if link else 0
        dropped = link.dropped if link else 0
        return (
            f"sw=0x{self.field.switch_states:02X} X=0x{self.images.input_image:02X} "
            f"Y=0x{self.images.output_image:02X} M=0x{self.images.internal_bits:04X} "
            f"sent={sent} del={delivered} drop={dropped} "
            f"ok={self.plc.frames_ok} stale={self.plc.frames_stale} "
            f"corr={self.plc.frames_corrupt}"
        )

    def metrics(self) -> Metrics:
        link = self.link
        # stimuli that never produced an output change report no latency
        unmatched = [(t, None) for t in self._pending_stimuli]
        return Metrics(
            frames_sent=link.sent if link else 0,
            frames_delivered=link.delivered if link else 0,
            frames_dropped=link.dropped if link else 0,
            frames_ok=self.plc.frames_ok,
            frames_stale=self.plc.frames_stale,
            frames_corrupt=self.plc.frames_corrupt,
            latencies=sorted(self.latencies + unmatched, key=lambda p: p[0]),
            final_input_image=self.images.input_image,
            final_output_image=self.images.output_image,
        )


def run_end_to_end(scenario: Scenario) -> tuple[Trace, Metrics, Deployment]:
    """Wire everything together and run the scenario to its duration."""
    world = Deployment(scenario)
    world.configure_and_pair()
    world.start()
    trace = world.sim.run_until(scenario.duration_us)
    return trace, world.metrics(), world
