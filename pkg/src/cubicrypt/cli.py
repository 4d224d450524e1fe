"""Command-line surface.

Every subcommand that writes files also writes a run manifest
(<first output>.manifest.json) recording the subcommand, the fully
resolved parameters, input/output paths, the tool version, and a
canonical argv; re-running that argv reproduces the outputs
byte-for-byte. Manifests carry no timestamps for exactly that reason.

Exit codes: 0 success, 1 runtime failure (I/O, parse, divergence),
2 usage error.
"""

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from cubicrypt import __version__
from cubicrypt.analysis import lower_bound_error, lyapunov_from_lbe
from cubicrypt.cipher import GrayImage, xor_apply
from cubicrypt.exchange import (
    PROFILES,
    DeviceProfile,
    ProtocolError,
    run_exchange,
    send_image,
    serve_once,
)
from cubicrypt.keygen import KeystreamConfig, generate_keystream, key_matrix_for
from cubicrypt.maps import EvaluationScheme, MapConfig, OrbitDivergenceError, iterate_orbit
from cubicrypt.metrics import histogram, shannon_entropy
from cubicrypt.pgmio import PgmError, read_pgm, write_pgm, write_series_csv
from cubicrypt.testimage import synthetic_test_image

_KEY_FLAGS = ("x0", "r", "scheme", "damping", "iters", "seeds", "iters_per_seed")


def _scheme_arg(text: str) -> EvaluationScheme:
    try:
        return EvaluationScheme.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _add_key_flags(sub: argparse.ArgumentParser) -> None:
    grp = sub.add_argument_group("key parameters (or --profile)")
    grp.add_argument("--profile", choices=sorted(PROFILES), help="named device preset")
    grp.add_argument("--x0", type=float, help="initial condition (single-orbit mode)")
    grp.add_argument("--r", type=float, help="bifurcation parameter")
    grp.add_argument("--scheme", type=_scheme_arg, help="evaluation scheme e1..e4")
    grp.add_argument("--damping", type=float, help="per-step damping factor in (0,1]")
    grp.add_argument("--iters", type=int, help="orbit length (single-orbit mode)")
    grp.add_argument("--seeds", type=int, help="seed count (switches to multi-seed mode)")
    grp.add_argument("--iters-per-seed", type=int, help="iterations per seed (multi-seed mode)")


def _resolve_keystream(args: argparse.Namespace, parser: argparse.ArgumentParser) -> KeystreamConfig:
    given = [f for f in _KEY_FLAGS if getattr(args, f) is not None]
    if args.profile is not None:
        if given:
            parser.error(
                "--profile cannot be combined with --" + ", --".join(g.replace("_", "-") for g in given)
            )
        return PROFILES[args.profile].keystream
    kwargs = {}
    if args.scheme is not None:
        kwargs["scheme"] = args.scheme
    if args.r is not None:
        kwargs["r"] = args.r
    if args.damping is not None:
        kwargs["damping"] = args.damping
    try:
        if args.seeds is not None or args.iters_per_seed is not None:
            if args.x0 is not None or args.iters is not None:
                parser.error("--x0/--iters are single-orbit flags; multi-seed uses --seeds and --iters-per-seed")
            if args.seeds is not None:
                kwargs["seed_count"] = args.seeds
            if args.iters_per_seed is not None:
                kwargs["iterations_per_seed"] = args.iters_per_seed
            return KeystreamConfig.multi_seed(**kwargs)
        if args.x0 is not None:
            kwargs["x0"] = args.x0
        if args.iters is not None:
            kwargs["iterations"] = args.iters
        return KeystreamConfig.single_orbit(**kwargs)
    except ValueError as exc:
        parser.error(str(exc))


def _keystream_params(config: KeystreamConfig) -> dict:
    return {
        "mode": config.mode,
        "scheme": config.scheme.label,
        "r": config.r,
        "damping": config.damping,
        "x0": config.x0,
        "iterations": config.iterations,
        "seed_count": config.seed_count,
        "iterations_per_seed": config.iterations_per_seed,
    }


def _keystream_argv(args: argparse.Namespace, config: KeystreamConfig) -> list[str]:
    if args.profile is not None:
        return ["--profile", args.profile]
    argv = ["--scheme", config.scheme.label, "--r", repr(config.r)]
    if config.damping is not None:
        argv += ["--damping", repr(config.damping)]
    if config.mode == "single":
        argv += ["--x0", repr(config.x0), "--iters", str(config.iterations)]
    else:
        argv += ["--seeds", str(config.seed_count), "--iters-per-seed", str(config.iterations_per_seed)]
    return argv


def _write_manifest(
    subcommand: str,
    parameters: dict,
    inputs: list[str],
    outputs: list[str],
    argv: list[str],
) -> None:
    if not outputs:
        return
    manifest = {
        "subcommand": subcommand,
        "parameters": parameters,
        "inputs": sorted(inputs),
        "outputs": sorted(outputs),
        "argv": argv,
        "version": __version__,
    }
    path = Path(outputs[0] + ".manifest.json")
    path.write_bytes(json.dumps(manifest, indent=2, sort_keys=True).encode() + b"\n")


def replay_argv(manifest_path: str) -> list[str]:
    """Canonical argv recorded in a run manifest, for bit-exact reruns."""
    manifest = json.loads(Path(manifest_path).read_text())
    return list(manifest["argv"])


def _load_image(path: str) -> GrayImage:
    return read_pgm(Path(path).read_bytes())


def _read_data(path: str, raw: bool) -> np.ndarray:
    blob = Path(path).read_bytes()
    if raw:
        return np.frombuffer(blob, dtype=np.uint8)
    return read_pgm(blob).pixels


# ---------------------------------------------------------------- commands


def cmd_simulate(args, parser) -> int:
    config = MapConfig(
        x0=args.x0,
        r=args.r,
        scheme=args.scheme,
        damping=args.damping,
    )
    orbit = iterate_orbit(config, args.iters)
    Path(args.out).write_bytes(write_series_csv(orbit.samples, name="x"))
    argv = ["simulate", "--x0", repr(config.x0), "--r", repr(config.r),
            "--scheme", config.scheme.label]
    if config.damping is not None:
        argv += ["--damping", repr(config.damping)]
    argv += ["--iters", str(args.iters), "--out", args.out]
    _write_manifest(
        "simulate",
        {
            "x0": config.x0,
            "r": config.r,
            "scheme": config.scheme.label,
            "damping": config.damping,
            "iters": args.iters,
        },
        [],
        [args.out],
        argv,
    )
    print(f"wrote {args.iters + 1} samples to {args.out}")
    return 0


def cmd_lbe(args, parser) -> int:
    base = dict(x0=args.x0, r=args.r, damping=args.damping)
    orbit_a = iterate_orbit(MapConfig(scheme=args.scheme_a, **base), args.iters)
    orbit_b = iterate_orbit(MapConfig(scheme=args.scheme_b, **base), args.iters)
    series = lower_bound_error(orbit_a, orbit_b)
    Path(args.out).write_bytes(write_series_csv(series.delta, name="delta"))
    params = {
        "x0": args.x0,
        "r": args.r,
        "damping": args.damping,
        "scheme_a": args.scheme_a.label,
        "scheme_b": args.scheme_b.label,
        "iters": args.iters,
    }
    argv = ["lbe", "--x0", repr(args.x0), "--r", repr(args.r),
            "--scheme-a", args.scheme_a.label, "--scheme-b", args.scheme_b.label,
            "--iters", str(args.iters), "--out", args.out]
    if args.damping is not None:
        argv += ["--damping", repr(args.damping)]
    if args.report:
        argv += ["--report"]
    _write_manifest("lbe", params, [], [args.out], argv)
    print(f"wrote {len(series)} deltas to {args.out}")
    if args.report:
        estimate = lyapunov_from_lbe(series)
        report = {
            "lambda": estimate.exponent,
            "intercept": estimate.intercept,
            "fit_range": list(estimate.fit_range),
            "r_squared": estimate.r_squared,
            "n_points": estimate.n_points,
            "first_n_at_1e-3": series.first_reaching(1e-3),
        }
        print(json.dumps(report, sort_keys=True))
    return 0


def cmd_keygen(args, parser) -> int:
    config = _resolve_keystream(args, parser)
    stream = generate_keystream(config, args.count)
    payload = stream.tobytes()
    if args.hex:
        Path(args.out).write_bytes(payload.hex().encode("ascii") + b"\n")
    else:
        Path(args.out).write_bytes(payload)
    argv = (["keygen"] + _keystream_argv(args, config)
            + ["--count", str(args.count), "--out", args.out])
    if args.hex:
        argv += ["--hex"]
    params = _keystream_params(config) | {"count": args.count, "hex": bool(args.hex)}
    _write_manifest("keygen", params, [], [args.out], argv)
    print(f"wrote {args.count} key bytes to {args.out}" + (" (hex)" if args.hex else ""))
    return 0


def _cmd_xor(args, parser, subcommand: str) -> int:
    config = _resolve_keystream(args, parser)
    image = _load_image(getattr(args, "in"))
    key = key_matrix_for(config, image.width, image.height)
    result = xor_apply(image, key)
    Path(args.out).write_bytes(write_pgm(result))
    argv = ([subcommand, "--in", getattr(args, "in"), "--out", args.out]
            + _keystream_argv(args, config))
    params = _keystream_params(config) | {"width": image.width, "height": image.height}
    _write_manifest(subcommand, params, [getattr(args, "in")], [args.out], argv)
    print(f"{subcommand}ed {image.width}x{image.height} image -> {args.out}")
    return 0


def cmd_encrypt(args, parser) -> int:
    return _cmd_xor(args, parser, "encrypt")


def cmd_decrypt(args, parser) -> int:
    return _cmd_xor(args, parser, "decrypt")


def cmd_entropy(args, parser) -> int:
    data = _read_data(getattr(args, "in"), args.raw)
    report = shannon_entropy(histogram(data))
    print(f"h_bits={report.h_bits:.8f} h_norm={report.h_norm:.8f}")
    return 0


def cmd_histogram(args, parser) -> int:
    data = _read_data(getattr(args, "in"), args.raw)
    hist = histogram(data)
    Path(args.out).write_bytes(hist.to_csv())
    occupied = hist.bins[hist.bins > 0]
    ratio = float(hist.bins.max()) / float(hist.bins.min()) if hist.bins.min() > 0 else float("inf")
    argv = ["histogram", "--in", getattr(args, "in"), "--out", args.out]
    if args.raw:
        argv += ["--raw"]
    _write_manifest(
        "histogram",
        {"raw": bool(args.raw), "total": int(hist.total)},
        [getattr(args, "in")],
        [args.out],
        argv,
    )
    print(
        f"wrote 256 bins to {args.out} "
        f"(occupied={len(occupied)} max={int(hist.bins.max())} "
        f"min={int(hist.bins.min())} max/min={ratio:.4f})"
    )
    return 0


def _parse_addr(text: str, parser) -> tuple[str, int]:
    host, sep, port = text.rpartition(":")
    if not sep or not port.isdigit():
        parser.error(f"--addr must be host:port, got {text!r}")
    return host or "127.0.0.1", int(port)


def cmd_exchange_serve(args, parser) -> int:
    host, port = _parse_addr(args.addr, parser)
    profile = PROFILES[args.profile]
    candidate, _ = serve_once(host, port, profile)
    Path(args.out).write_bytes(write_pgm(candidate))
    report = shannon_entropy(histogram(candidate.pixels))
    line = f"received {candidate.width}x{candidate.height} -> {args.out} h_norm={report.h_norm:.6f}"
    inputs = []
    if args.expected:
        expected = _load_image(args.expected)
        match = float(np.mean(candidate.pixels == expected.pixels)) if (
            expected.width == candidate.width and expected.height == candidate.height
        ) else 0.0
        line += f" match={match:.6f}"
        inputs.append(args.expected)
    argv = ["exchange", "serve", "--addr", args.addr, "--profile", args.profile, "--out", args.out]
    if args.expected:
        argv += ["--expected", args.expected]
    _write_manifest("exchange serve", {"profile": args.profile, "addr": args.addr}, inputs, [args.out], argv)
    print(line)
    return 0


def cmd_exchange_send(args, parser) -> int:
    host, port = _parse_addr(args.addr, parser)
    profile = PROFILES[args.profile]
    image = _load_image(getattr(args, "in"))
    send_image(host, port, profile, image)
    print(f"sent {image.width}x{image.height} image to {args.addr} as {args.profile}")
    return 0


def cmd_exchange_run(args, parser) -> int:
    image = _load_image(getattr(args, "in"))
    report = run_exchange(
        PROFILES[args.sender], PROFILES[args.receiver], image, transport=args.transport
    )
    print(report.summary())
    if args.out:
        Path(args.out).write_bytes(write_pgm(report.candidate))
        argv = ["exchange", "run", "--in", getattr(args, "in"), "--sender", args.sender,
                "--receiver", args.receiver, "--transport", args.transport, "--out", args.out]
        _write_manifest(
            "exchange run",
            {"sender": args.sender, "receiver": args.receiver, "transport": args.transport},
            [getattr(args, "in")],
            [args.out],
            argv,
        )
    return 0


def cmd_testimage(args, parser) -> int:
    image = synthetic_test_image(args.width, args.height)
    Path(args.out).write_bytes(write_pgm(image))
    argv = ["testimage", "--width", str(args.width), "--height", str(args.height), "--out", args.out]
    _write_manifest("testimage", {"width": args.width, "height": args.height}, [], [args.out], argv)
    print(f"wrote {args.width}x{args.height} test image to {args.out}")
    return 0


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cubicrypt",
        description="Chaos-based XOR image encryption and reproducibility lab",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subs = parser.add_subparsers(dest="subcommand", required=True)

    p = subs.add_parser("simulate", help="iterate the map and write the orbit CSV")
    p.add_argument("--x0", type=float, default=0.1)
    p.add_argument("--r", type=float, default=3.6)
    p.add_argument("--scheme", type=_scheme_arg, default=EvaluationScheme.E1)
    p.add_argument("--damping", type=float, default=None)
    p.add_argument("--iters", type=int, default=100)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_simulate)

    p = subs.add_parser("lbe", help="lower bound error between two evaluation schemes")
    p.add_argument("--x0", type=float, default=0.1)
    p.add_argument("--r", type=float, default=3.6)
    p.add_argument("--scheme-a", type=_scheme_arg, default=EvaluationScheme.E1)
    p.add_argument("--scheme-b", type=_scheme_arg, default=EvaluationScheme.E2)
    p.add_argument("--damping", type=float, default=None)
    p.add_argument("--iters", type=int, default=100)
    p.add_argument("--out", required=True)
    p.add_argument("--report", action="store_true", help="print the Lyapunov fit as JSON")
    p.set_defaults(func=cmd_lbe)

    p = subs.add_parser("keygen", help="write raw keystream bytes")
    _add_key_flags(p)
    p.add_argument("--count", type=int, default=65536, help="bytes to generate")
    p.add_argument("--hex", action="store_true", help="write hex text instead of raw bytes")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_keygen)

    for name, help_text in (
        ("encrypt", "XOR a PGM image with a generated key matrix"),
        ("decrypt", "inverse of encrypt (same XOR)"),
    ):
        p = subs.add_parser(name, help=help_text)
        p.add_argument("--in", required=True)
        p.add_argument("--out", required=True)
        _add_key_flags(p)
        p.set_defaults(func=cmd_encrypt if name == "encrypt" else cmd_decrypt)

    p = subs.add_parser("entropy", help="Shannon entropy of a PGM image or raw bytes")
    p.add_argument("--in", required=True)
    p.add_argument("--raw", action="store_true", help="treat input as raw bytes, not PGM")
    p.set_defaults(func=cmd_entropy)

    p = subs.add_parser("histogram", help="256-bin histogram CSV of a PGM image or raw bytes")
    p.add_argument("--in", required=True)
    p.add_argument("--raw", action="store_true")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_histogram)

    p = subs.add_parser("exchange", help="two-device wire-protocol transfer")
    ex = p.add_subparsers(dest="exchange_command", required=True)

    q = ex.add_parser("serve", help="receive one encrypted frame and decrypt it")
    q.add_argument("--addr", required=True, help="host:port to listen on")
    q.add_argument("--profile", required=True, choices=sorted(PROFILES))
    q.add_argument("--out", required=True)
    q.add_argument("--expected", help="plaintext PGM to score the candidate against")
    q.set_defaults(func=cmd_exchange_serve)

    q = ex.add_parser("send", help="encrypt an image and push one frame")
    q.add_argument("--addr", required=True, help="host:port to connect to")
    q.add_argument("--profile", required=True, choices=sorted(PROFILES))
    q.add_argument("--in", required=True)
    q.set_defaults(func=cmd_exchange_send)

    q = ex.add_parser("run", help="in-process sender->receiver exchange with a score")
    q.add_argument("--in", required=True)
    q.add_argument("--sender", required=True, choices=sorted(PROFILES))
    q.add_argument("--receiver", required=True, choices=sorted(PROFILES))
    q.add_argument("--transport", choices=("memory", "tcp"), default="memory")
    q.add_argument("--out")
    q.set_defaults(func=cmd_exchange_run)

    p = subs.add_parser("testimage", help="write the bundled synthetic test image")
    p.add_argument("--width", type=int, default=256)
    p.add_argument("--height", type=int, default=256)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_testimage)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, parser)
    except (PgmError, ProtocolError, OrbitDivergenceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
