"""Two-device image exchange over a byte-level wire protocol.

The protocol never carries key material: both ends regenerate the key
matrix locally from a pre-agreed profile (map parameters + evaluation
scheme). A frame is a fixed 17-byte header followed by the encrypted
row-major pixel payload:

    offset  size  field
    0       4     magic  b"CBX1"
    4       1     msg_type (0x01 = encrypted image)
    5       4     width   (u32, big-endian)
    9       4     height  (u32, big-endian)
    13      4     payload length in bytes (u32, big-endian)

Decryption uses the receiver's own profile. When the two profiles
evaluate the map with different operation orderings the regenerated
keys drift apart and the candidate plaintext is garbage; the match
fraction quantifies that failure.
"""

import socket
import struct
import threading
from dataclasses import dataclass
from typing import Callable

import numpy as np

from cubicrypt.cipher import GrayImage, xor_apply
from cubicrypt.keygen import KeystreamConfig, KeyMatrix, key_matrix_for
from cubicrypt.maps import EvaluationScheme
from cubicrypt.metrics import EntropyReport, histogram, shannon_entropy

MAGIC = b"CBX1"
MSG_ENCRYPTED_IMAGE = 0x01
_HEADER = struct.Struct(">4sBIII")
HEADER_SIZE = _HEADER.size
MAX_DIMENSION = 65536


class ProtocolError(ValueError):
    """Malformed or inconsistent wire frame."""


@dataclass(frozen=True)
class DeviceProfile:
    """A named, pre-agreed keystream recipe standing in for one device."""

    name: str
    keystream: KeystreamConfig

    def key_matrix(self, width: int, height: int) -> KeyMatrix:
        return key_matrix_for(self.keystream, width, height)


def _single(scheme: EvaluationScheme) -> KeystreamConfig:
    return KeystreamConfig.single_orbit(scheme=scheme)


def _damped(scheme: EvaluationScheme) -> KeystreamConfig:
    return KeystreamConfig.multi_seed(scheme=scheme)


PROFILES: dict[str, DeviceProfile] = {}
for _scheme in EvaluationScheme:
    _n = f"device{int(_scheme)}"
    PROFILES[_n] = DeviceProfile(name=_n, keystream=_single(_scheme))
    PROFILES[_n + "-damped"] = DeviceProfile(name=_n + "-damped", keystream=_damped(_scheme))
del _scheme, _n


def encode_frame(image: GrayImage, msg_type: int = MSG_ENCRYPTED_IMAGE) -> bytes:
    payload = image.tobytes()
    return _HEADER.pack(MAGIC, msg_type, image.width, image.height, len(payload)) + payload


def decode_frame(frame: bytes) -> GrayImage:
    """Inverse of encode_frame; raises ProtocolError with a distinct
    message per failure mode.
    """
    if len(frame) < HEADER_SIZE:
        raise ProtocolError(f"incomplete frame: {len(frame)} bytes, header needs {HEADER_SIZE}")
    magic, msg_type, width, height, payload_len = _HEADER.unpack_from(frame)
    if magic != MAGIC:
        raise ProtocolError(f"bad magic {magic!r}: expected {MAGIC!r}")
    if msg_type != MSG_ENCRYPTED_IMAGE:
        raise ProtocolError(f"unknown message type 0x{msg_type:02x}")
    if width == 0 or height == 0 or width > MAX_DIMENSION or height > MAX_DIMENSION:
        raise ProtocolError(f"invalid dimensions {width}x{height}")
    if payload_len != width * height:
        raise ProtocolError(
            f"length mismatch: payload {payload_len} bytes for {width}x{height} image"
        )
    payload = frame[HEADER_SIZE : HEADER_SIZE + payload_len]
    if len(payload) < payload_len:
        raise ProtocolError(f"incomplete frame: {len(payload)} of {payload_len} payload bytes")
    if len(frame) > HEADER_SIZE + payload_len:
        raise ProtocolError(f"{len(frame) - HEADER_SIZE - payload_len} trailing bytes after frame")
    return GrayImage.frombytes(payload, width, height)


def _recv_exact(conn: socket.socket, count: int) -> bytes:
    """Read exactly count bytes; short reads across TCP segmentation are
    the norm, a closed socket mid-frame is an error.
    """
    chunks = []
    remaining = count
    while remaining > 0:
        chunk = conn.recv(min(remaining, 65536))
        if not chunk:
            raise ProtocolError(f"connection closed with {remaining} bytes outstanding")
        chunks.append(chunk)
        remaining -= len(chunk)
    return b"".join(chunks)


def send_frame(conn: socket.socket, image: GrayImage) -> None:
    conn.sendall(encode_frame(image))


def recv_frame(conn: socket.socket) -> GrayImage:
    header = _recv_exact(conn, HEADER_SIZE)
    magic, msg_type, width, height, payload_len = _HEADER.unpack(header)
    if magic != MAGIC:
        raise ProtocolError(f"bad magic {magic!r}: expected {MAGIC!r}")
    if payload_len > MAX_DIMENSION * MAX_DIMENSION:
        raise ProtocolError(f"payload length {payload_len} exceeds limit")
    payload = _recv_exact(conn, payload_len)
    return decode_frame(header + payload)


@dataclass(frozen=True)
class ExchangeReport:
    """Outcome of one sender->receiver image transfer."""

    sender: str
    receiver: str
    width: int
    height: int
    match_fraction: float
    key_mismatch_fraction: float
    candidate_entropy: EntropyReport
    candidate: GrayImage

    @property
    def matched(self) -> bool:
        return self.match_fraction == 1.0

    def summary(self) -> str:
        return (
            f"{self.sender} -> {self.receiver}: match={self.match_fraction:.6f} "
            f"key_mismatch={self.key_mismatch_fraction:.6f} "
            f"candidate_h_norm={self.candidate_entropy.h_norm:.6f}"
        )


def _loopback_transfer(frame: bytes) -> bytes:
    """Push the frame through a real localhost TCP socket pair.

    The writer runs on its own thread: frames routinely exceed the
    kernel socket buffers, so a single-threaded sendall-then-recv would
    deadlock.
    """
    with socket.socket(socket.AF_INET, socket.SOCK_STREAM) as listener:
        listener.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
        listener.bind(("127.0.0.1", 0))
        listener.listen(1)
        port = listener.getsockname()[1]
        with socket.create_connection(("127.0.0.1", port)) as sender_conn:
            receiver_conn, _ = listener.accept()
            with receiver_conn:
                writer = threading.Thread(
                    target=sender_conn.sendall, args=(frame,), daemon=True
                )
                writer.start()
                received = _recv_exact(receiver_conn, HEADER_SIZE)
                _, _, _, _, payload_len = _HEADER.unpack(received)
                received += _recv_exact(receiver_conn, payload_len)
                writer.join()
    return received


def run_exchange(
    sender: DeviceProfile,
    receiver: DeviceProfile,
    image: GrayImage,
    transport: str = "memory",
) -> ExchangeReport:
    """Encrypt with the sender's key, move the frame, decrypt with the
    receiver's independently regenerated key, and score the result.
    """
    if transport not in ("memory", "tcp"):
        raise ValueError(f"unknown transport {transport!r}")
    send_key = sender.key_matrix(image.width, image.height)
    encrypted = xor_apply(image, send_key)
    frame = encode_frame(encrypted)
    if transport == "tcp":
        frame = _loopback_transfer(frame)
    received = decode_frame(frame)
    recv_key = receiver.key_matrix(received.width, received.height)
    candidate = xor_apply(received, recv_key)
    match_fraction = float(np.mean(candidate.pixels == image.pixels))
    key_mismatch_fraction = float(np.mean(send_key.cells != recv_key.cells))
    entropy = shannon_entropy(histogram(candidate.pixels))
    return ExchangeReport(
        sender=sender.name,
        receiver=receiver.name,
        width=image.width,
        height=image.height,
        match_fraction=match_fraction,
        key_mismatch_fraction=key_mismatch_fraction,
        candidate_entropy=entropy,
        candidate=candidate,
    )


def serve_once(
    host: str,
    port: int,
    profile: DeviceProfile,
    on_bound: Callable[[int], None] | None = None,
) -> tuple[GrayImage, int]:
    """Accept one connection, receive one frame, decrypt with the
    profile's key; returns (candidate image, bound port). ``on_bound``
    is called with the bound port before blocking in accept, so a
    caller serving on port 0 can learn where to connect.
    """
    with socket.socket(socket.AF_INET, socket.SOCK_STREAM) as listener:
        listener.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
        listener.bind((host, port))
        listener.listen(1)
        bound = listener.getsockname()[1]
        if on_bound is not None:
            on_bound(bound)
        conn, _ = listener.accept()
        with conn:
            encrypted = recv_frame(conn)
    key = profile.key_matrix(encrypted.width, encrypted.height)
    return xor_apply(encrypted, key), bound


def send_image(host: str, port: int, profile: DeviceProfile, image: GrayImage) -> None:
    """Encrypt with the profile's key and push one frame to host:port."""
    key = profile.key_matrix(image.width, image.height)
    encrypted = xor_apply(image, key)
    with socket.create_connection((host, port)) as conn:
        send_frame(conn, encrypted)
