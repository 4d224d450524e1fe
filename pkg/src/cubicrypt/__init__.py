"""Chaos-based XOR image encryption and floating-point reproducibility lab.

The library iterates the cubic map under several algebraically equal
evaluation schemes, measures how their binary64 pseudo-orbits diverge,
turns orbits into byte keystreams, and XORs them against 8-bit images.
Hot kernels run in a compiled extension when available; set
CUBICRYPT_PURE=1 to force the pure-Python fallback (bit-identical
results, just slower).
"""

__version__ = "0.1.0"

from cubicrypt._backend import BACKEND as KERNEL_BACKEND
from cubicrypt._backend import available_backends
from cubicrypt.analysis import (
    LbeSeries,
    LyapunovEstimate,
    linear_regression,
    lower_bound_error,
    lyapunov_from_lbe,
)
from cubicrypt.cipher import GrayImage, xor_apply, xor_involution_check
from cubicrypt.exchange import (
    PROFILES,
    DeviceProfile,
    ExchangeReport,
    ProtocolError,
    decode_frame,
    encode_frame,
    run_exchange,
)
from cubicrypt.keygen import (
    KeyMatrix,
    KeystreamConfig,
    build_key_matrix,
    generate_keystream,
    key_matrix_for,
    normalize_sample,
)
from cubicrypt.maps import (
    ESCAPE_BOUND,
    EvaluationScheme,
    MapConfig,
    OrbitDivergenceError,
    PseudoOrbit,
    cubic_step,
    iterate_orbit,
)
from cubicrypt.metrics import EntropyReport, Histogram, histogram, shannon_entropy
from cubicrypt.pgmio import PgmError, read_pgm, write_pgm
from cubicrypt.testimage import synthetic_test_image

__all__ = [
    "__version__",
    "KERNEL_BACKEND",
    "available_backends",
    "LbeSeries",
    "LyapunovEstimate",
    "linear_regression",
    "lower_bound_error",
    "lyapunov_from_lbe",
    "GrayImage",
    "xor_apply",
    "xor_involution_check",
    "PROFILES",
    "DeviceProfile",
    "ExchangeReport",
    "ProtocolError",
    "decode_frame",
    "encode_frame",
    "run_exchange",
    "KeyMatrix",
    "KeystreamConfig",
    "build_key_matrix",
    "generate_keystream",
    "key_matrix_for",
    "normalize_sample",
    "ESCAPE_BOUND",
    "EvaluationScheme",
    "MapConfig",
    "OrbitDivergenceError",
    "PseudoOrbit",
    "cubic_step",
    "iterate_orbit",
    "EntropyReport",
    "Histogram",
    "histogram",
    "shannon_entropy",
    "PgmError",
    "read_pgm",
    "write_pgm",
    "synthetic_test_image",
]
