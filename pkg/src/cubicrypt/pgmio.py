"""PGM image files and CSV series.

PGM (netpbm P5 binary / P2 ASCII) is used because it is lossless and
byte-exact; a lossy format would destroy XOR round-trips. Only maxval 255
is accepted: the cipher is defined over 8-bit pixels. Pixel payloads are
row-major, matching the visual layout (key matrices are filled
column-major; the two orders never mix).
"""

import numpy as np

from cubicrypt.cipher import GrayImage

MAXVAL = 255


class PgmError(ValueError):
    """Malformed PGM input."""


def _tokens(data: bytes, count: int) -> tuple[list[bytes], int]:
    """First ``count`` whitespace-separated header tokens, skipping
    # comments; returns the tokens and the offset one byte past the last
    token's trailing whitespace character.
    """
    found: list[bytes] = []
    i = 0
    n = len(data)
    while len(found) < count:
        while i < n and data[i : i + 1].isspace():
            i += 1
        if i < n and data[i] == ord("#"):
            while i < n and data[i] != ord("\n"):
                i += 1
            continue
        start = i
        while i < n and not data[i : i + 1].isspace() and data[i] != ord("#"):
            i += 1
        if i == start:
            raise PgmError("truncated header")
        found.append(data[start:i])
        if len(found) == count:
            # exactly one whitespace byte separates the header from a P5 payload
            if i < n and data[i : i + 1].isspace():
                i += 1
    return found, i


def read_pgm(data: bytes) -> GrayImage:
    """Parse P5 or P2 bytes into an image.

    Raises PgmError with a distinct message for a bad magic number, an
    unsupported maxval, or a truncated/oversized payload.
    """
    if not isinstance(data, (bytes, bytearray)):
        raise TypeError("read_pgm expects bytes")
    data = bytes(data)
    try:
        (magic,), offset = _tokens(data, 1)
    except PgmError:
        raise PgmError("bad magic number: empty input") from None
    if magic not in (b"P5", b"P2"):
        raise PgmError(f"bad magic number {magic!r}: expected P5 or P2")
    fields, offset = _tokens(data, 4)
    try:
        width, height, maxval = (int(f) for f in fields[1:])
    except ValueError:
        raise PgmError(f"non-numeric header fields {fields[1:]!r}") from None
    if width < 1 or height < 1:
        raise PgmError(f"invalid dimensions {width}x{height}")
    if maxval != MAXVAL:
        raise PgmError(f"unsupported maxval {maxval}: only {MAXVAL} (8-bit) is handled")
    needed = width * height
    if magic == b"P5":
        payload = data[offset : offset + needed]
        if len(payload) < needed:
            raise PgmError(f"truncated payload: {len(payload)} of {needed} bytes")
        if len(data) > offset + needed:
            raise PgmError(f"{len(data) - offset - needed} trailing bytes after payload")
        flat = np.frombuffer(payload, dtype=np.uint8)
    else:
        body = b"\n".join(
            line.split(b"#", 1)[0] for line in data[offset:].splitlines()
        )
        try:
            values = [int(tok) for tok in body.split()]
        except ValueError:
            raise PgmError("non-numeric P2 pixel token") from None
        if len(values) < needed:
            raise PgmError(f"truncated payload: {len(values)} of {needed} values")
        if len(values) > needed:
            raise PgmError(f"{len(values) - needed} trailing values after payload")
        if any(v < 0 or v > MAXVAL for v in values):
            raise PgmError("P2 pixel value outside [0, 255]")
        flat = np.asarray(values, dtype=np.uint8)
    return GrayImage(pixels=flat.reshape((height, width)))


def write_pgm(image: GrayImage, binary: bool = True) -> bytes:
    """Canonical PGM bytes: "P5\\n<w> <h>\\n255\\n" + row-major payload,
    or the P2 ASCII equivalent with one text row per pixel row.
    """
    header = f"{'P5' if binary else 'P2'}\n{image.width} {image.height}\n{MAXVAL}\n"
    if binary:
        return header.encode("ascii") + image.tobytes()
    rows = "\n".join(" ".join(str(int(v)) for v in row) for row in image.pixels)
    return (header + rows + "\n").encode("ascii")


def _format_value(v: float) -> str:
    # repr is the shortest string that parses back bit-exactly; drop the
    # redundant ".0" on integral values ("0.0" -> "0") which still
    # round-trips.
    text = repr(float(v))
    return text[:-2] if text.endswith(".0") else text


def write_series_csv(values, name: str = "value") -> bytes:
    """Index/value CSV: header "n,<name>" then one "n,value" line per entry.

    Values are formatted so that parsing them back yields bit-identical
    doubles.
    """
    lines = [f"n,{name}"]
    lines.extend(f"{i},{_format_value(v)}" for i, v in enumerate(values))
    return ("\n".join(lines) + "\n").encode("ascii")


def read_series_csv(data: bytes) -> np.ndarray:
    """Parse a series CSV back into its float64 values."""
    lines = data.decode("ascii").splitlines()
    if not lines or not lines[0].startswith("n,"):
        raise ValueError("missing series CSV header")
    return np.array([float(line.split(",", 1)[1]) for line in lines[1:]], dtype=np.float64)
