"""Two-party protocol execution over byte-stream transports.

Three components: Alice and Bob endpoints and a trusted broker that hands
out singlet measurement outcomes (singlet statistics cannot be produced by
two independent local samplers, so the broker is an explicit simulation
device, not physics).  All records are newline-delimited text lines with
the version tag "earac/1" and a fixed field order, so transcripts diff
cleanly.  Exactly one classical payload bit crosses from Alice to Bob.
"""

from __future__ import annotations

import queue
import socket
import threading
from dataclasses import dataclass, field

from . import codetree
from .bloch import BlochVector, SingletSource
from .codetree import CodeTree, format_tree, parse_tree

WIRE_VERSION = "earac/1"


class ProtocolError(RuntimeError):
    pass


class TransportError(RuntimeError):
    pass


# -- wire messages ------------------------------------------------------------

@dataclass(frozen=True)
class Setup:
    n: int
    tree_text: str
    sr_seed: int


@dataclass(frozen=True)
class Measure:
    pair_id: str
    axis: tuple[float, float, float]


@dataclass(frozen=True)
class Outcome:
    pair_id: str
    bit: int


@dataclass(frozen=True)
class Classical:
    bit: int


@dataclass(frozen=True)
class Query:
    leaf: int


@dataclass(frozen=True)
class Guess:
    bit: int


WireMessage = Setup | Measure | Outcome | Classical | Query | Guess


def encode_message(msg: WireMessage) -> str:
    if isinstance(msg, Setup):
        return f"{WIRE_VERSION} SETUP n={msg.n} seed={msg.sr_seed} tree={msg.tree_text}"
    if isinstance(msg, Measure):
        x, y, z = msg.axis
        return f"{WIRE_VERSION} MEASURE pair={msg.pair_id} axis={x!r},{y!r},{z!r}"
    if isinstance(msg, Outcome):
        return f"{WIRE_VERSION} OUTCOME pair={msg.pair_id} bit={msg.bit}"
    if isinstance(msg, Classical):
        return f"{WIRE_VERSION} CLASSICAL bit={msg.bit}"
    if isinstance(msg, Query):
        return f"{WIRE_VERSION} QUERY leaf={msg.leaf}"
    if isinstance(msg, Guess):
        return f"{WIRE_VERSION} GUESS bit={msg.bit}"
    raise TypeError(f"not a wire message: {msg!r}")


def parse_message(line: str) -> WireMessage:
    parts = line.strip().split(" ")
    if len(parts) < 2 or parts[0] != WIRE_VERSION:
        raise ProtocolError(f"bad wire line: {line!r}")
    tag = parts[1]
    fields = {}
    for p in parts[2:]:
        k, _, v = p.partition("=")
        fields[k] = v
    try:
        if tag == "SETUP":
            return Setup(int(fields["n"]), fields["tree"], int(fields["seed"]))
        if tag == "MEASURE":
            x, y, z = (float(c) for c in fields["axis"].split(","))
            return Measure(fields["pair"], (x, y, z))
        if tag == "OUTCOME":
            return Outcome(fields["pair"], int(fields["bit"]))
        if tag == "CLASSICAL":
            return Classical(int(fields["bit"]))
        if tag == "QUERY":
            return Query(int(fields["leaf"]))
        if tag == "GUESS":
            return Guess(int(fields["bit"]))
    except (KeyError, ValueError) as exc:
        raise ProtocolError(f"malformed {tag} line: {line!r}") from exc
    raise ProtocolError(f"unknown message tag {tag!r}")


# -- transports ---------------------------------------------------------------

class QueueChannel:
    """In-process duplex channel; one side of a paired queue pipe."""

    def __init__(self, inbox: queue.Queue, outbox: queue.Queue):
        self._inbox = inbox
        self._outbox = outbox

    def send_line(self, line: str) -> None:
        self._outbox.put(line)

    def recv_line(self) -> str | None:
        item = self._inbox.get()
        return item

    def close(self) -> None:
        self._outbox.put(None)


def queue_channel_pair() -> tuple[QueueChannel, QueueChannel]:
    a, b = queue.Queue(), queue.Queue()
    return QueueChannel(a, b), QueueChannel(b, a)


class SocketChannel:
    """Newline-framed channel over a connected socket."""

    def __init__(self, sock: socket.socket):
        self._sock = sock
        self._file = sock.makefile("rwb")

    def send_line(self, line: str) -> None:
        try:
            self._file.write(line.encode("utf-8") + b"\n")
            self._file.flush()
        except OSError as exc:
            raise TransportError(str(exc)) from exc

    def recv_line(self) -> str | None:
        try:
            raw = self._file.readline()
        except OSError as exc:
            raise TransportError(str(exc)) from exc
        if not raw:
            return None
        return raw.decode("utf-8").rstrip("\n")

    def close(self) -> None:
        try:
            self._file.close()
            self._sock.close()
        except OSError:
            pass


# -- endpoints ----------------------------------------------------------------

@dataclass
class EndpointLog:
    """Ordered record of everything an endpoint sent, received or decided."""
    entries: list[tuple[str, str]] = field(default_factory=list)

    def sent(self, line: str) -> None:
        self.entries.append(("sent", line))

    def received(self, line: str) -> None:
        self.entries.append(("received", line))

    def local(self, line: str) -> None:
        self.entries.append(("local", line))


class _RemoteSource:
    """Correlation source backed by broker round-trips."""

    def __init__(self, channel, log: EndpointLog):
        self._channel = channel
        self._log = log

    def measure(self, pair_id, axis: BlochVector) -> int:
        line = encode_message(Measure(pair_id, axis.components()))
        self._channel.send_line(line)
        self._log.sent(line)
        reply = self._channel.recv_line()
        if reply is None:
            raise TransportError("broker closed the channel")
        self._log.received(reply)
        msg = parse_message(reply)
        if not isinstance(msg, Outcome) or msg.pair_id != pair_id:
            raise ProtocolError(f"expected outcome for pair {pair_id}, got {reply!r}")
        return msg.bit


class Broker:
    """Entanglement broker: serves at most two measurements per pair.

    Pairs exist only for node ids declared by the first SETUP; both parties
    must send identical SETUP lines before measuring.
    """

    def __init__(self):
        self._source = None
        self._setup = None
        self._known_pairs: set[str] = set()
        self.log = EndpointLog()

    def _handle(self, msg: WireMessage) -> WireMessage | None:
        if isinstance(msg, Setup):
            if self._setup is None:
                self._setup = msg
                self._source = SingletSource(msg.sr_seed)
                tree = parse_tree(msg.tree_text)
                self._known_pairs = set(_internal_ids(tree))
            elif msg != self._setup:
                raise ProtocolError("endpoints disagree on session setup")
            return None
        if isinstance(msg, Measure):
            if self._setup is None:
                raise ProtocolError("measure before setup")
            if msg.pair_id not in self._known_pairs:
                raise ProtocolError(f"unknown pair {msg.pair_id!r}")
            bit = self._source.measure(msg.pair_id, BlochVector(*msg.axis))
            return Outcome(msg.pair_id, bit)
        raise ProtocolError(f"broker cannot handle {msg!r}")

    def serve(self, channel) -> None:
        """Serve one connection until the peer closes it."""
        while True:
            line = channel.recv_line()
            if line is None:
                return
            self.log.received(line)
            reply = self._handle(parse_message(line))
            if reply is not None:
                out = encode_message(reply)
                channel.send_line(out)
                self.log.sent(out)


def _internal_ids(tree: CodeTree) -> list[str]:
    ids = []

    def go(node, nid):
        if isinstance(node, codetree.Node):
            ids.append(nid)
            for i, c in enumerate(node.children):
                go(c, f"{nid}.{i}")

    go(tree, "n")
    return ids


def run_alice(tree: CodeTree, bits, broker_chan, bob_chan, sr_seed: int) -> EndpointLog:
    log = EndpointLog()
    setup = encode_message(Setup(codetree.leaf_count(tree), format_tree(tree), sr_seed))
    broker_chan.send_line(setup)
    log.sent(setup)
    source = _RemoteSource(broker_chan, log)
    message, _ = codetree.encode(tree, bits, source)
    classical = encode_message(Classical(message))
    bob_chan.send_line(classical)
    log.sent(classical)
    return log


def run_bob(tree: CodeTree, target: int, broker_chan, alice_chan,
            sr_seed: int) -> tuple[int, EndpointLog]:
    log = EndpointLog()
    setup = encode_message(Setup(codetree.leaf_count(tree), format_tree(tree), sr_seed))
    broker_chan.send_line(setup)
    log.sent(setup)
    log.local(encode_message(Query(target)))  # never transmitted
    line = alice_chan.recv_line()
    if line is None:
        raise TransportError("no classical message from Alice")
    log.received(line)
    msg = parse_message(line)
    if not isinstance(msg, Classical):
        raise ProtocolError(f"expected the classical bit, got {line!r}")
    source = _RemoteSource(broker_chan, log)
    guess, _ = codetree.decode(tree, msg.bit, target, source)
    log.local(encode_message(Guess(guess)))
    return guess, log


@dataclass
class SessionResult:
    guess: int
    alice_log: EndpointLog
    bob_log: EndpointLog
    broker_log: EndpointLog

    def classical_bits_sent(self) -> int:
        return sum(1 for d, line in self.alice_log.entries
                   if d == "sent" and " CLASSICAL " in line)


def run_session(tree: CodeTree, bits, target: int, transport: str = "inproc",
                seed: int = 0) -> SessionResult:
    """Full two-party run; Alice completes before Bob starts (one-way)."""
    if transport == "inproc":
        return _run_inproc(tree, bits, target, seed)
    if transport == "tcp":
        return _run_tcp(tree, bits, target, seed)
    raise ValueError(f"unknown transport {transport!r}")


def _run_inproc(tree, bits, target, seed) -> SessionResult:
    broker = Broker()
    alice_side_a, broker_side_a = queue_channel_pair()
    bob_side_b, broker_side_b = queue_channel_pair()
    alice_to_bob, bob_from_alice = queue_channel_pair()

    def broker_main():
        broker.serve(broker_side_a)
        broker.serve(broker_side_b)

    t = threading.Thread(target=broker_main, daemon=True)
    t.start()
    alice_log = run_alice(tree, bits, alice_side_a, alice_to_bob, seed)
    alice_side_a.close()
    guess, bob_log = run_bob(tree, target, bob_side_b, bob_from_alice, seed)
    bob_side_b.close()
    t.join(timeout=10)
    return SessionResult(guess, alice_log, bob_log, broker.log)


def _run_tcp(tree, bits, target, seed) -> SessionResult:
    broker = Broker()
    broker_listener = socket.create_server(("127.0.0.1", 0))
    classical_listener = socket.create_server(("127.0.0.1", 0))
    broker_port = broker_listener.getsockname()[1]
    classical_port = classical_listener.getsockname()[1]

    def broker_main():
        for _ in range(2):
            conn, _ = broker_listener.accept()
            chan = SocketChannel(conn)
            broker.serve(chan)
            chan.close()

    t = threading.Thread(target=broker_main, daemon=True)
    t.start()

    alice_broker = SocketChannel(socket.create_connection(("127.0.0.1", broker_port)))
    alice_to_bob = SocketChannel(socket.create_connection(("127.0.0.1", classical_port)))
    alice_log = run_alice(tree, bits, alice_broker, alice_to_bob, seed)
    alice_broker.close()
    alice_to_bob.close()

    bob_broker = SocketChannel(socket.create_connection(("127.0.0.1", broker_port)))
    conn, _ = classical_listener.accept()
    bob_from_alice = SocketChannel(conn)
    guess, bob_log = run_bob(tree, target, bob_broker, bob_from_alice, seed)
    bob_broker.close()
    bob_from_alice.close()
    t.join(timeout=10)
    broker_listener.close()
    classical_listener.close()
    return SessionResult(guess, alice_log, bob_log, broker.log)


def dump_transcript(result: SessionResult, path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        for name, log in (("alice", result.alice_log), ("bob", result.bob_log),
                          ("broker", result.broker_log)):
            for direction, line in log.entries:
                f.write(f"{name} {direction} {line}\n")
