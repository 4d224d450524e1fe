"""XOR stream cipher over byte matrices.

Encryption and decryption are the same operation: bitwise XOR with a key
matrix of the image's shape. XOR is an involution, so applying the key
twice restores the plaintext bit for bit.
"""

from dataclasses import dataclass, field

import numpy as np

from cubicrypt.keygen import KeyMatrix


@dataclass(frozen=True)
class GrayImage:
    """8-bit grayscale image: height x width pixels, 0 black to 255 white."""

    pixels: np.ndarray = field(repr=False)

    def __post_init__(self):
        pixels = np.ascontiguousarray(self.pixels)
        if pixels.dtype != np.uint8:
            # no silent coercion: wrapping 300 -> 44 would corrupt pixels
            raise ValueError(f"pixels must be uint8, got {pixels.dtype}")
        if pixels.ndim != 2:
            raise ValueError(f"image must be 2-D, got shape {pixels.shape}")
        pixels.flags.writeable = False
        object.__setattr__(self, "pixels", pixels)

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    def tobytes(self) -> bytes:
        """Row-major pixel payload."""
        return self.pixels.tobytes()

    @classmethod
    def frombytes(cls, data: bytes, width: int, height: int) -> "GrayImage":
        flat = np.frombuffer(data, dtype=np.uint8)
        if len(flat) != width * height:
            raise ValueError(
                f"payload has {len(flat)} bytes; {width * height} needed for {width}x{height}"
            )
        return cls(pixels=flat.reshape((height, width)))


def _check_shapes(image: GrayImage, key: KeyMatrix) -> None:
    if image.pixels.shape != key.cells.shape:
        raise ValueError(
            f"image is {image.width}x{image.height} but key is {key.width}x{key.height}"
        )


def xor_apply(image: GrayImage, key: KeyMatrix) -> GrayImage:
    """Element-wise XOR; serves as both encryption and decryption."""
    _check_shapes(image, key)
    return GrayImage(pixels=np.bitwise_xor(image.pixels, key.cells))


def xor_involution_check(image: GrayImage, key: KeyMatrix) -> bool:
    """True iff applying the key twice reproduces the image bit-exactly."""
    _check_shapes(image, key)
    round_trip = xor_apply(xor_apply(image, key), key)
    return bool(np.array_equal(round_trip.pixels, image.pixels))
