"""Experiment runner: one subcommand per model, CSV emission, verify driver.

Configuration is flat key=value (file via --config, overridden by
command-line flags).  CSV files start with `#` comment lines describing
each column, then a header row; all numbers are printed with %.12g so
identical configs give byte-identical outputs.

Exit codes: 0 success, 1 configuration error, 2 numerical-invariant
failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import meanfield, projection, qdomino, radiating, xychain

__all__ = ["main"]


class ConfigError(Exception):
    pass


def _fmt(x) -> str:
    if isinstance(x, str):
        return x
    return "%.12g" % float(x)


def _write_csv(path: Path, comments: list[str], header: list[str], rows) -> None:
    with open(path, "w", newline="\n") as fh:
        for c in comments:
            fh.write(f"# {c}\n")
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(x) for x in row) + "\n")


def _parse_range(text: str, integer: bool = False):
    """'a..b' inclusive range; a bare number is a single-point range."""
    parts = text.split("..")
    try:
        if len(parts) == 1:
            v = float(parts[0])
            return v, v
        if len(parts) == 2:
            return float(parts[0]), float(parts[1])
    except ValueError:
        pass
    raise ConfigError(f"cannot parse range {text!r}; expected 'a..b'")


def _int_points(text: str) -> list[int]:
    lo, hi = _parse_range(text)
    if lo != int(lo) or hi != int(hi):
        raise ConfigError(f"range {text!r} must be integer")
    return list(range(int(lo), int(hi) + 1))


def _grid(text: str, steps: int) -> np.ndarray:
    lo, hi = _parse_range(text)
    if steps < 1:
        raise ConfigError("steps must be >= 1")
    return np.linspace(lo, hi, steps)


def _load_config(path: str | None) -> dict:
    if path is None:
        return {}
    cfg = {}
    p = Path(path)
    if not p.is_file():
        raise ConfigError(f"config file {path} not found")
    for line in p.read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"config line {line!r} is not key=value")
        k, v = line.split("=", 1)
        cfg[k.strip().replace("-", "_")] = v.strip()
    return cfg


def _apply_config(args: argparse.Namespace, cfg: dict, parser: argparse.ArgumentParser) -> None:
    """Config file supplies values only where the command line used defaults."""
    for k, v in cfg.items():
        if k == "lambda":
            k = "lam"
        if not hasattr(args, k):
            raise ConfigError(f"unknown config key {k!r}")
        if getattr(args, k) == parser.get_default(k):
            cur = parser.get_default(k)
            cast = type(cur) if cur is not None and not isinstance(cur, str) else str
            try:
                setattr(args, k, cast(v))
            except ValueError as exc:
                raise ConfigError(f"config key {k!r}: {exc}") from exc


def _out_dir(args) -> Path:
    out = Path(args.out)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise ConfigError(f"output path {args.out}: {exc}") from exc
    return out


def _run_domino(args) -> int:
    js = _int_points(args.j)
    if any(j < 1 for j in js):
        raise ConfigError("domino sites must be >= 1")
    t = _grid(args.t, args.steps)
    cols = [t] + [np.array([qdomino.flip_probability(j, tv) for tv in t]) for j in js]
    _write_csv(
        _out_dir(args) / "domino_flip.csv",
        ["quantum domino chain: probability that spin j has flipped by time t",
         "columns: time, then one flip-probability column per site"],
        ["t"] + [f"flip_j{j}" for j in js],
        zip(*cols),
    )
    return 0


def _run_xy(args) -> int:
    js = _int_points(args.j)
    t = _grid(args.t, args.steps)
    if args.kappa == 0:
        raise ConfigError("kappa must be nonzero")
    cols = [t] + [np.array([xychain.occupation(j, tv, args.kappa) if tv > 0 else (1.0 if j <= -1 else 0.0) for tv in t]) for j in js]
    _write_csv(
        _out_dir(args) / "xy_occupation.csv",
        ["x-y chain site occupations from the half-filled initial state",
         "columns: time, then one occupation column per site index"],
        ["t"] + [f"occ_j{j}" for j in js],
        zip(*cols),
    )
    return 0


def _run_detector(args) -> int:
    from . import detector as det

    if args.gamma < 0:
        raise ConfigError("gamma must be >= 0")
    cfg = det.default_config(gamma=args.gamma, dt=args.dt, T=args.T)
    run = det.DetectorRun(cfg)
    run.check_weak_coupling()
    F = run.solve_fourier()
    w_time = run.detection_w(F)
    w_spec = run.detection_w_spectral()
    stride = max(1, run.n // max(args.steps - 1, 1))
    idx = np.arange(0, run.n + 1, stride)
    _write_csv(
        _out_dir(args) / "detector_amplitude.csv",
        ["no-flip amplitude F(t) of the particle-detector model",
         f"detection probability: time route {_fmt(w_time)}, spectral route {_fmt(w_spec)}",
         "columns: time, Re F, Im F, |F|^2"],
        ["t", "re_F", "im_F", "abs2_F"],
        ((run.t[i], F[i].real, F[i].imag, abs(F[i]) ** 2) for i in idx),
    )
    return 0


def _run_radiate(args) -> int:
    p = radiating.default_params(N=args.N, v=args.v)
    modes = radiating.build_modes(p, M=args.M)
    t = _grid(args.t, args.steps)
    series = radiating.decay_series(p, modes, 0, t)
    _write_csv(
        _out_dir(args) / "radiate_decay.csv",
        ["finite chain radiating into a discretized continuum",
         f"level shift eps0 {_fmt(p.eps0)}, recurrence time {_fmt(radiating.recurrence_time(modes))}",
         "columns: time, radiated-sector weight"],
        ["t", "decay"],
        zip(t, series),
    )
    return 0


def _run_meanfield(args) -> int:
    temps = sorted(set(_grid(args.T, args.steps)))
    p0 = meanfield.BCSParams(eps=args.eps, lam=getattr(args, "lam"), T=1.0)
    comments = ["BCS mean-field phase diagram: gap and representative equilibrium point",
                "columns: temperature, phase kind, gap a, F1, F3"]
    try:
        tc = meanfield.critical_temperature(p0)
        temps = sorted(set(temps) | {tc})
        comments.insert(1, f"critical temperature (closed form) {_fmt(tc)}")
    except ValueError:
        tc = None
    rows = []
    for T in temps:
        if T <= 0:
            raise ConfigError("temperatures must be positive")
        sols = meanfield.solve_gap_equation(meanfield.BCSParams(eps=args.eps, lam=args.lam, T=T))
        best = sols[-1]
        rows.append((T, best.kind, best.a, best.F[0], best.F[2]))
    _write_csv(_out_dir(args) / "meanfield_phase.csv", comments,
               ["T", "kind", "gap_a", "F1", "F3"], rows)
    return 0


def _run_orbit(args) -> int:
    z0 = complex(args.re0, args.im0)
    t = _grid(args.t, args.steps)
    zq = np.array([projection.quantum_trajectory(z0, args.lam, tv, args.a) for tv in t])
    zc = np.array([projection.classical_trajectory(z0, args.lam, tv, args.a) for tv in t])
    _write_csv(
        _out_dir(args) / "orbit_circles.csv",
        ["phase-space circles of the projected two-level dynamics",
         "columns: time, quantum orbit (re, im), classical orbit (re, im)"],
        ["t", "re_q", "im_q", "re_cl", "im_cl"],
        zip(t, zq.real, zq.imag, zc.real, zc.imag),
    )
    return 0


def _run_verify(args) -> int:
    from . import acceptance

    numbers = None
    if args.only:
        try:
            numbers = [int(x) for x in args.only.split(",")]
        except ValueError:
            raise ConfigError(f"cannot parse criterion list {args.only!r}")
    results = acceptance.run_all(numbers)
    all_ok = True
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        print(f"criterion {r.number:02d} {status}  {r.name}: {r.detail}")
        all_ok = all_ok and r.passed
    print("acceptance:", "all criteria passed" if all_ok else "FAILURES present")
    return 0 if all_ok else 2


def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="chainlab", description=__doc__.splitlines()[0])
    sub = top.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", default=None, help="key=value config file")
        p.add_argument("--out", default=".", help="output directory")

    p = sub.add_parser("domino", help="quantum domino flip probabilities")
    common(p)
    p.add_argument("--j", default="2..6")
    p.add_argument("--t", default="0..50")
    p.add_argument("--steps", type=int, default=201)
    p.set_defaults(fn=_run_domino, _parser=p)

    p = sub.add_parser("xy", help="x-y chain occupations")
    common(p)
    p.add_argument("--j", default="-3..3")
    p.add_argument("--t", default="0..50")
    p.add_argument("--steps", type=int, default=201)
    p.add_argument("--kappa", type=float, default=1.0)
    p.set_defaults(fn=_run_xy, _parser=p)

    p = sub.add_parser("detector", help="particle-detector amplitude and probability")
    common(p)
    p.add_argument("--gamma", type=float, default=0.5)
    p.add_argument("--dt", type=float, default=0.02)
    p.add_argument("--T", type=float, default=200.0)
    p.add_argument("--steps", type=int, default=401)
    p.set_defaults(fn=_run_detector, _parser=p)

    p = sub.add_parser("radiate", help="radiating finite chain decay")
    common(p)
    p.add_argument("--N", type=int, default=6)
    p.add_argument("--M", type=int, default=400)
    p.add_argument("--v", type=float, default=0.7)
    p.add_argument("--t", default="0..90")
    p.add_argument("--steps", type=int, default=301)
    p.set_defaults(fn=_run_radiate, _parser=p)

    p = sub.add_parser("meanfield", help="BCS phase diagram")
    common(p)
    p.add_argument("--eps", type=float, default=0.25)
    p.add_argument("--lambda", dest="lam", type=float, default=1.0)
    p.add_argument("--T", default="0.01..0.6")
    p.add_argument("--steps", type=int, default=60)
    p.set_defaults(fn=_run_meanfield, _parser=p)

    p = sub.add_parser("orbit", help="projected two-level phase-space circles")
    common(p)
    p.add_argument("--re0", type=float, default=1.0)
    p.add_argument("--im0", type=float, default=0.5)
    p.add_argument("--lam", type=float, default=1.0)
    p.add_argument("--a", type=float, default=1.0)
    p.add_argument("--t", default="0..12.6")
    p.add_argument("--steps", type=int, default=253)
    p.set_defaults(fn=_run_orbit, _parser=p)

    p = sub.add_parser("verify", help="run the acceptance suite")
    common(p)
    p.add_argument("--only", default=None, help="comma-separated criterion numbers")
    p.set_defaults(fn=_run_verify, _parser=p)
    return top


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        _apply_config(args, _load_config(args.config), args._parser)
        return args.fn(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, FloatingPointError, np.linalg.LinAlgError) as exc:
        print(f"numerical invariant violated: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
