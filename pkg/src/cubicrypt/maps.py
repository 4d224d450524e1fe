"""Cubic map iteration under explicitly ordered evaluation schemes.

The map f_r(x) = r*x**3 + (1 - r)*x keeps [-1, 1] invariant for the
bifurcation parameters studied here and is chaotic for r near 3.6. Four
algebraically equal ways of writing f_r are provided; binary64 rounding
makes their orbits drift apart, which is exactly the cross-device key
mismatch this package measures. Each scheme stands in for one "device".
"""

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from cubicrypt import _backend

ESCAPE_BOUND = 1.5


class EvaluationScheme(enum.IntEnum):
    """Fixed operation orderings of the cubic map.

    E1: ((r*x)*x)*x + (1-r)*x
    E2: r*((x*x)*x) + (x - r*x)
    E3: x*(((r*x)*x) + (1-r))
    E4: ((r*x)*x)*x + (1-r)*x, the fully parenthesized spelling of E1

    The cube is always built by repeated multiplication, never a library
    power call, so scheme differences are purely associativity and
    distribution. E2 groups its linear terms as (x - r*x) so that the
    fixed points 0 and +/-1 evaluate without rounding, matching the other
    schemes.
    """

    E1 = 1
    E2 = 2
    E3 = 3
    E4 = 4

    @property
    def label(self) -> str:
        return self.name.lower()

    @classmethod
    def parse(cls, text: str) -> "EvaluationScheme":
        try:
            return cls[text.strip().upper()]
        except KeyError:
            raise ValueError(
                f"unknown evaluation scheme {text!r}; expected one of "
                f"{', '.join(s.label for s in cls)}"
            ) from None


class OrbitDivergenceError(RuntimeError):
    """An orbit sample escaped [-ESCAPE_BOUND, ESCAPE_BOUND].

    Orbits that start in [-1, 1] with a sane bifurcation parameter never
    leave [-1, 1]; escaping signals a misconfigured r.
    """

    def __init__(self, iteration: int, value: float):
        super().__init__(
            f"orbit escaped [-{ESCAPE_BOUND}, {ESCAPE_BOUND}] at iteration "
            f"{iteration} (value {value!r})"
        )
        self.iteration = iteration
        self.value = value


@dataclass(frozen=True)
class MapConfig:
    """Everything that determines an orbit: parameter, seed, scheme, damping.

    ``damping`` is an optional factor in (0, 1] multiplied onto each
    iterate before it is fed back; ``None`` means no damping (identical to
    1.0, and multiplying by 1.0 is bit-exact).
    """

    r: float = 3.6
    x0: float = 0.1
    damping: float | None = None
    scheme: EvaluationScheme = EvaluationScheme.E1

    def __post_init__(self):
        if not math.isfinite(self.r) or self.r <= 0.0:
            raise ValueError(f"bifurcation parameter must be finite and > 0, got {self.r!r}")
        if not math.isfinite(self.x0) or not -1.0 <= self.x0 <= 1.0:
            raise ValueError(f"initial condition must lie in [-1, 1], got {self.x0!r}")
        if self.damping is not None and not 0.0 < self.damping <= 1.0:
            raise ValueError(f"damping must lie in (0, 1], got {self.damping!r}")
        object.__setattr__(self, "scheme", EvaluationScheme(self.scheme))

    @property
    def effective_damping(self) -> float:
        return 1.0 if self.damping is None else self.damping


@dataclass(frozen=True)
class PseudoOrbit:
    """A finite, computed approximation of a true orbit.

    ``samples[0]`` is the initial condition; ``samples[k]`` is the k-th
    iterate (the damped value when damping is on, i.e. exactly what was
    fed back). Re-running the same config reproduces the samples
    bit-exactly.
    """

    config: MapConfig
    samples: np.ndarray = field(repr=False)

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=np.float64)
        samples.flags.writeable = False
        object.__setattr__(self, "samples", samples)

    def __len__(self) -> int:
        return len(self.samples)

    @property
    def iterations(self) -> int:
        return len(self.samples) - 1


def cubic_step(x: float, r: float, scheme: EvaluationScheme) -> float:
    """One application of the cubic map in the scheme's exact operation order.

    Pure binary64: same (x, r, scheme) always returns the same bits.
    Raises ValueError on non-finite input rather than letting NaN
    propagate into an orbit.
    """
    if not math.isfinite(x):
        raise ValueError(f"cubic map input must be finite, got {x!r}")
    if not math.isfinite(r):
        raise ValueError(f"bifurcation parameter must be finite, got {r!r}")
    scheme = EvaluationScheme(scheme)
    samples, _ = _backend.run_orbit(float(x), float(r), int(scheme), 1.0, 1)
    return float(samples[1])


def iterate_orbit(config: MapConfig, n: int) -> PseudoOrbit:
    """Produce the pseudo-orbit of ``config`` over ``n`` iterations.

    samples[k+1] = damping * cubic_step(samples[k]); length is n + 1.
    Raises OrbitDivergenceError (with the offending index) if a sample
    escapes [-1.5, 1.5].
    """
    if n < 0:
        raise ValueError(f"iteration count must be >= 0, got {n}")
    samples, escape = _backend.run_orbit(
        config.x0, config.r, int(config.scheme), config.effective_damping, n
    )
    if escape >= 0:
        raise OrbitDivergenceError(escape, float(samples[escape]))
    return PseudoOrbit(config=config, samples=samples)
