"""Pure-Python orbit and keystream kernels.

Fallback used when the compiled extension is unavailable. Every arithmetic
operation here is IEEE 754 binary64 with round-to-nearest-even, applied in
the exact order written, so results are bit-identical to the compiled
kernels in ``_core.pyx``.
"""

import numpy as np

BACKEND = "python"


def run_orbit(x0, r, scheme, damping, n):
    """Iterate the cubic map ``n`` times from ``x0``.

    ``scheme`` selects one of four algebraically equal orderings of
    r*x**3 + (1 - r)*x; each rounds differently, so orbits from different
    schemes drift apart. ``damping`` multiplies every iterate before it is
    fed back (pass 1.0 for the plain map; multiplying by 1.0 is exact).

    Returns ``(samples, escape_index)`` where ``samples`` is a float64
    array of length n + 1 with samples[0] == x0, and ``escape_index`` is
    the index of the first sample outside [-1.5, 1.5] (iteration stops
    there), or -1 if the whole orbit stayed inside.
    """
    if scheme not in (1, 2, 3, 4):
        raise ValueError(f"unknown evaluation scheme id {scheme!r}")
    out = np.empty(n + 1, dtype=np.float64)
    x = float(x0)
    r = float(r)
    damping = float(damping)
    omr = 1.0 - r  # hoisted; bit-identical to recomputing per step
    out[0] = x
    for k in range(n):
        if scheme == 1:
            t = r * x
            t = t * x
            t = t * x
            y = t + omr * x
        elif scheme == 2:
            t = (x * x) * x
            t = r * t
            y = t + (x - r * x)
        elif scheme == 3:
            t = (r * x) * x
            t = t + omr
            y = x * t
        else:
            t = (r * x)
            t = t * x
            t = t * x
            y = t + omr * x
        y = damping * y
        out[k + 1] = y
        if not (-1.5 <= y <= 1.5):  # also catches NaN
            return out, k + 1
        x = y
    return out, -1


def normalize_block(samples, out):
    """Map orbit samples in [-1, 1] to key bytes in [0, 254].

    Pipeline per sample: y = x/2 + 1, then keep the fractional part of
    1000*y, then floor(255 * frac). x/2 is exact, z - floor(z) is exact
    (Sterbenz), and frac < 1 keeps the result strictly below 255.

    Writes bytes into ``out`` and returns -1, or the index of the first
    sample outside [-1, 1] (bytes before that index are still written,
    matching the sequential kernel).
    """
    s = np.asarray(samples, dtype=np.float64)
    bad = (s < -1.0) | (s > 1.0) | np.isnan(s)
    stop = int(np.argmax(bad)) if bad.any() else -1
    if stop >= 0:
        s = s[:stop]
    y = s / 2.0 + 1.0
    z = y * 1000.0
    frac = z - np.floor(z)
    out[: len(s)] = np.floor(255.0 * frac).astype(np.uint8)
    return stop
