import itertools
import random

import pytest

from wplcsim import btlink
from wplcsim.btlink import (
    AlreadyLinkedError,
    AtModeError,
    BadSyncError,
    BaudMismatchError,
    BindMismatchError,
    BtModule,
    Channel,
    ChecksumError,
    LinkDownError,
    RoleConflictError,
    ShortFrameError,
    at_command,
    decode_frame,
    encode_frame,
    enter_data_mode,
    pair,
    transmit,
)
from wplcsim.netmodels import network_spec
from wplcsim.simkernel import Simulator

ADDR_A = "98d3:31:fc190f"
ADDR_B = "98d3:32:206a1b"


class TestAtCommands:
    def test_ping(self):
        m = BtModule(ADDR_A)
        assert at_command(m, "AT") == "OK"
        assert m.role is None and m.baud == 9600

    def test_role_set_and_query(self):
        m = BtModule(ADDR_A)
        assert at_command(m, "AT+ROLE=1") == "OK"
        assert m.role == "master"
        assert at_command(m, "AT+ROLE?") == "+ROLE:1\nOK"
        assert at_command(m, "AT+ROLE=0") == "OK"
        assert m.role == "slave"

    def test_uart(self):
        m = BtModule(ADDR_A)
        assert at_command(m, "AT+UART=38400") == "OK"
        assert m.baud == 38400

    def test_addr_query(self):
        m = BtModule(ADDR_A)
        assert at_command(m, "AT+ADDR?") == f"+ADDR:{ADDR_A}\nOK"

    def test_bind(self):
        m = BtModule(ADDR_A)
        assert at_command(m, f"AT+BIND={ADDR_B}") == "OK"
        assert m.bind_address == ADDR_B

    def test_bind_accepts_any_valid_address(self):
        m = BtModule(ADDR_A)
        for addr in ("0000:00:000000", "ffff:ff:ffffff", "1a2b:3c:4d5e6f"):
            assert at_command(m, f"AT+BIND={addr}") == "OK"
            assert m.bind_address == addr

    def test_unknown_command(self):
        m = BtModule(ADDR_A)
        assert at_command(m, "AT+PSWD=1234") == "ERROR:(0)"

    def test_malformed_arguments(self):
        m = BtModule(ADDR_A)
        assert at_command(m, "AT+ROLE=2") == "ERROR:(1)"
        assert at_command(m, "AT+UART=fast") == "ERROR:(1)"
        assert at_command(m, "AT+BIND=nonsense") == "ERROR:(1)"

    def test_command_in_data_mode_is_an_error(self):
        m = BtModule(ADDR_A)
        enter_data_mode(m)
        with pytest.raises(AtModeError):
            at_command(m, "AT")


def make_pairable():
    master = BtModule(ADDR_B, role="master", bind_address=ADDR_A, mode="data")
    slave = BtModule(ADDR_A, role="slave", mode="data")
    return master, slave


class TestPairing:
    def test_happy_path(self):
        master, slave = make_pairable()
        link = pair(master, slave, now=0)
        assert master.link is link and slave.link is link
        assert link.established_at == 0

    def test_baud_mismatch(self):
        master, slave = make_pairable()
        slave.baud = 38400
        with pytest.raises(BaudMismatchError):
            pair(master, slave, now=0)

    def test_two_masters(self):
        master, slave = make_pairable()
        slave.role = "master"
        with pytest.raises(RoleConflictError):
            pair(master, slave, now=0)

    def test_unset_role(self):
        master, slave = make_pairable()
        slave.role = None
        with pytest.raises(RoleConflictError):
            pair(master, slave, now=0)

    def test_bind_mismatch(self):
        master, slave = make_pairable()
        master.bind_address = ADDR_B
        with pytest.raises(BindMismatchError):
            pair(master, slave, now=0)

    def test_pair_requires_data_mode(self):
        master, slave = make_pairable()
        slave.mode = "at"
        with pytest.raises(AtModeError):
            pair(master, slave, now=0)

    def test_exhaustive_condition_matrix(self):
        # pair succeeds only when role, baud and bind are all satisfied
        expected_error = {
            "role": RoleConflictError,
            "baud": BaudMismatchError,
            "bind": BindMismatchError,
        }
        for role_ok, baud_ok, bind_ok in itertools.product((True, False), repeat=3):
            master, slave = make_pairable()
            if not role_ok:
                slave.role = "master"
            if not baud_ok:
                slave.baud = 38400
            if not bind_ok:
                master.bind_address = ADDR_B
            if role_ok and baud_ok and bind_ok:
                assert pair(master, slave, now=0) is not None
            else:
                first_bad = next(
                    name
                    for name, ok in (("role", role_ok), ("baud", baud_ok), ("bind", bind_ok))
                    if not ok
                )
                with pytest.raises(expected_error[first_bad]):
                    pair(master, slave, now=0)

    def test_second_pair_attempt_errors(self):
        master, slave = make_pairable()
        pair(master, slave, now=0)
        third = BtModule("aaaa:bb:cccccc", role="slave", mode="data")
        master2 = BtModule("dddd:ee:ffffff", role="master",
                           bind_address=ADDR_A, mode="data")
        with pytest.raises(AlreadyLinkedError):
            pair(master, third, now=1)
        with pytest.raises(AlreadyLinkedError):
            pair(master2, slave, now=1)


class TestFrames:
    def test_encode_hand_checked_examples(self):
        assert encode_frame(0b00000001, 0) == bytes.fromhex("aa00010100")
        assert encode_frame(0, 0) == bytes.fromhex("aa00010001")

    def test_decode_inverse_of_example(self):
        assert decode_frame(bytes.fromhex("aa00010100")) == (0b00000001, 0)

    def test_bad_sync(self):
        with pytest.raises(BadSyncError):
            decode_frame(bytes.fromhex("5500010100"))

    def test_short_frame(self):
        with pytest.raises(ShortFrameError):
            decode_frame(bytes.fromhex("aa0001"))

    def test_declared_length_must_match(self):
        with pytest.raises(ShortFrameError):
            decode_frame(bytes.fromhex("aa00020100"))

    def test_zero_length_rejected(self):
        with pytest.raises(ShortFrameError):
            decode_frame(bytes.fromhex("aa00000100"))

    def test_checksum_failure(self):
        with pytest.raises(ChecksumError):
            decode_frame(bytes.fromhex("aa00010101"))

    def test_round_trip_identity(self):
        rng = random.Random(99)
        for _ in range(1000):
            image, seq = rng.randrange(256), rng.randrange(256)
            data = encode_frame(image, seq)
            assert len(data) == 5
            assert decode_frame(data) == (image, seq)

    def test_every_single_bit_flip_rejected(self):
        reference = encode_frame(0b00000001, 0)
        for bit in range(8 * len(reference)):
            corrupted = bytearray(reference)
            corrupted[bit // 8] ^= 1 << (bit % 8)
            with pytest.raises((BadSyncError, ShortFrameError, ChecksumError)):
                decode_frame(bytes(corrupted))


def make_link(loss=0.0, jitter=0, seed=0):
    sim = Simulator(seed=seed)
    master, slave = make_pairable()
    link = pair(master, slave, now=0)
    link.channel = Channel(spec=network_spec("Bluetooth"), loss=loss, jitter_us=jitter)
    return sim, link


class TestTransmit:
    def test_five_byte_frame_arrives_after_40us(self):
        sim, link = make_link()
        arrivals = []
        transmit(link, encode_frame(1, 0), sim, lambda d: arrivals.append(sim.now))
        sim.run_until(100)
        assert arrivals == [40]

    def test_total_loss_drops(self):
        sim, link = make_link(loss=1.0)
        assert transmit(link, encode_frame(1, 0), sim, lambda d: None) is False
        assert link.dropped == 1 and link.sent == 1

    def test_lossless_preserves_send_order(self):
        sim, link = make_link()
        received = []
        for seq in range(100):
            transmit(link, encode_frame(0, seq), sim,
                     lambda d: received.append(decode_frame(d)[1]))
        sim.run_until(1_000)
        assert received == list(range(100))
        assert link.delivered == 100

    def test_dead_link_errors(self):
        sim, link = make_link()
        link.alive = False
        with pytest.raises(LinkDownError):
            transmit(link, b"\xaa", sim, lambda d: None)

    def test_loss_counters_partition_sends(self):
        sim, link = make_link(loss=0.5, seed=3)
        for seq in range(200):
            transmit(link, encode_frame(0, seq), sim, lambda d: None)
        sim.run_until(10_000)
        assert link.sent == 200
        assert link.delivered + link.dropped == 200
        assert 0 < link.dropped < 200
