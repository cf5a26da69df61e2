"""Command line interface.

Subcommands: volumes, construct, verify, cutproject, weyl, batch.
Every run reads one flat JSON config, writes CSV/text outputs plus a
machine-readable verdict.json into --out, and exits 0 (all checks pass),
1 (a verified property failed), 2 (infeasible input), or 3 (bad config).

Outputs are deterministic: identical config and seed produce
byte-identical CSV and verdict files.  Figures (--svg) are diagnostic
matplotlib renderings and are not part of any verdict.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any

from . import brs, cutproject
from .brs import (AdelicBox, PAdicBall, SparseAdele, WeightedBoxSet,
                  character_volume_identity, construct_brs, construct_witness,
                  discrepancy_series, enumerate_volumes, reduce_to_finite,
                  restrict)
from .errors import (AdelicError, CertificateFailure, ConditionViolated,
                     InconsistentConstraints, NegativeIndicator,
                     NegativeVolume, TrivialCharacter, UnsupportedCoordinate,
                     ZeroGamma)
from .exact import ExactReal, PrimeSet, is_prime
from .solenoid import (AdeleVector, character_phase, is_minimal,
                       reduce_to_fundamental, weyl_sum)

DEFAULT_CHECKPOINTS = [100, 1000, 10000, 100000]

EXIT_PASS = 0
EXIT_PROPERTY_FAILURE = 1
EXIT_INFEASIBLE = 2
EXIT_CONFIG = 3

_INFEASIBLE = (NegativeVolume, ZeroGamma, UnsupportedCoordinate,
               TrivialCharacter, ConditionViolated, InconsistentConstraints)
_BROKEN = (CertificateFailure, NegativeIndicator)


class ConfigError(Exception):
    pass


# --- config parsing -------------------------------------------------------


def parse_rational(value: Any) -> Fraction:
    if isinstance(value, bool):
        raise ConfigError(f"expected a rational, got {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as e:
            raise ConfigError(f"bad rational {value!r}: {e}") from None
    raise ConfigError(f"expected a rational, got {value!r}")


def parse_exact_real(value: Any) -> ExactReal:
    if isinstance(value, dict):
        try:
            return ExactReal(int(value.get("a", 0)), int(value.get("b", 0)),
                             int(value.get("c", 1)), int(value.get("d", 0)))
        except (ValueError, ZeroDivisionError, TypeError) as e:
            raise ConfigError(f"bad exact real {value!r}: {e}") from None
    return ExactReal.from_rational(parse_rational(value))


def _parse_prime_map(obj: Any, what: str) -> dict[int, Fraction]:
    if obj is None:
        return {}
    if not isinstance(obj, dict):
        raise ConfigError(f"{what} must be an object mapping primes")
    out = {}
    for key, val in obj.items():
        try:
            p = int(key)
        except ValueError:
            raise ConfigError(f"bad prime key {key!r} in {what}") from None
        if not is_prime(p):
            raise ConfigError(f"{p} in {what} is not prime")
        out[p] = parse_rational(val)
    return out


@dataclass
class ExperimentConfig:
    raw: dict
    alpha: AdeleVector
    gamma: Fraction
    n: int
    checkpoints: list[int]
    x0_real: ExactReal
    x0_padic: dict[int, Fraction]
    seed: int
    bound: int
    cutproject_n: int
    weyl_gamma: Fraction
    control_box: AdelicBox | None


def load_config(data: dict) -> ExperimentConfig:
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    if "alpha_real" not in data:
        raise ConfigError("missing key alpha_real")
    alpha_real = parse_exact_real(data["alpha_real"])
    parts = _parse_prime_map(data.get("alpha_padic"), "alpha_padic")
    gamma = parse_rational(data.get("gamma", 0))

    if data.get("infinite_q", False):
        sparse = SparseAdele(alpha_real, parts.items(), True)
        primes = reduce_to_finite(sparse, gamma)
        alpha = restrict(sparse, primes)
    else:
        try:
            alpha = AdeleVector(PrimeSet(parts), alpha_real, parts)
        except (ValueError, AdelicError) as e:
            raise ConfigError(str(e)) from None
    if not is_minimal(alpha):
        raise ConfigError("alpha_real must be irrational (minimal rotation)")

    checkpoints = data.get("checkpoints", DEFAULT_CHECKPOINTS)
    if (not isinstance(checkpoints, list) or not checkpoints
            or any(not isinstance(c, int) or c < 1 for c in checkpoints)
            or sorted(set(checkpoints)) != checkpoints):
        raise ConfigError("checkpoints must be strictly increasing positive "
                          "integers")

    n = data.get("n", 0)
    if not isinstance(n, int) or isinstance(n, bool):
        raise ConfigError("n must be an integer")
    seed = data.get("seed", 0)
    if not isinstance(seed, int) or isinstance(seed, bool):
        raise ConfigError("seed must be an integer")
    bound = data.get("bound", 3)
    cut_n = data.get("cutproject_n", 1000)

    control_box = None
    if data.get("control_box") is not None:
        cb = data["control_box"]
        if not isinstance(cb, dict):
            raise ConfigError("control_box must be an object")
        balls = _parse_prime_map(cb.get("balls"), "control_box.balls")
        for p in alpha.primes:
            balls.setdefault(p, Fraction(0))
        if sorted(balls) != list(alpha.primes):
            raise ConfigError("control_box.balls must use alpha's primes")
        try:
            control_box = AdelicBox(
                parse_exact_real(cb.get("real_lo", 0)),
                parse_exact_real(cb.get("real_hi", 1)),
                tuple(PAdicBall(p, Fraction(0), int(balls[p]))
                      for p in sorted(balls)))
        except ValueError as e:
            raise ConfigError(f"bad control_box: {e}") from None

    return ExperimentConfig(
        raw=data, alpha=alpha, gamma=gamma, n=n, checkpoints=list(checkpoints),
        x0_real=parse_exact_real(data.get("x0_real", 0)),
        x0_padic=_parse_prime_map(data.get("x0_padic"), "x0_padic"),
        seed=seed, bound=bound, cutproject_n=cut_n,
        weyl_gamma=parse_rational(data.get("weyl_gamma",
                                           data.get("gamma", 0))),
        control_box=control_box)


def starting_point(cfg: ExperimentConfig):
    vec = AdeleVector(cfg.alpha.primes, cfg.x0_real,
                      {p: cfg.x0_padic.get(p, Fraction(0))
                       for p in cfg.alpha.primes})
    return reduce_to_fundamental(vec)[0]


# --- output helpers -------------------------------------------------------


def write_atomic(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as f:
            f.write(text)
        os.chmod(tmp, 0o644)
        os.replace(tmp, path)
    except BaseException:
        os.unlink(tmp)
        raise


def write_csv(path: Path, header: list[str], rows: list[list[str]]) -> None:
    lines = [",".join(header)]
    lines.extend(",".join(row) for row in rows)
    write_atomic(path, "\n".join(lines) + "\n")


def write_verdict(outdir: Path, verdict: dict) -> None:
    write_atomic(outdir / "verdict.json",
                 json.dumps(verdict, indent=2, sort_keys=True) + "\n")


def _sample_checkpoints(checkpoints: list[int]) -> list[int]:
    """Geometric grid of extra sample points for plotting."""
    goal = checkpoints[-1]
    marks = set(checkpoints)
    n = 1
    while n < goal:
        marks.add(n)
        n = max(n + 1, int(n * 1.12))
    return sorted(marks)


def _plot_discrepancy(path: Path, records, checkpoints: set[int]) -> None:
    try:
        import matplotlib
        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:  # pragma: no cover
        print("matplotlib unavailable; skipping figure", file=sys.stderr)
        return
    ns = [r.n for r in records]
    ds = [r.value.to_float() for r in records]
    sups = [r.running_sup.to_float() for r in records]
    fig, ax = plt.subplots(figsize=(7, 4.2))
    ax.plot(ns, ds, lw=0.9, label="D_N")
    ax.plot(ns, sups, lw=1.4, ls="--", label="running sup |D_M|")
    marks = [r for r in records if r.n in checkpoints]
    ax.plot([r.n for r in marks], [r.value.to_float() for r in marks],
            "o", ms=4, label="checkpoints")
    ax.set_xscale("log")
    ax.set_xlabel("N")
    ax.set_ylabel("discrepancy")
    ax.legend(frameon=False, fontsize=9)
    fig.tight_layout()
    fig.savefig(path, metadata={"Date": None})
    plt.close(fig)


def _plot_weyl(path: Path, rows: list[tuple[int, float, float]]) -> None:
    try:
        import matplotlib
        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:  # pragma: no cover
        print("matplotlib unavailable; skipping figure", file=sys.stderr)
        return
    ns = [n for n, _, _ in rows]
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    ax.loglog(ns, [a for _, a, _ in rows], "o-", label="|S_N|")
    ax.loglog(ns, [b for _, _, b in rows], "s--", label="1/(2N||theta||)")
    ax.set_xlabel("N")
    ax.legend(frameon=False, fontsize=9)
    fig.tight_layout()
    fig.savefig(path, metadata={"Date": None})
    plt.close(fig)


def _plot_cutpoints(path: Path, points) -> None:
    try:
        import matplotlib
        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:  # pragma: no cover
        print("matplotlib unavailable; skipping figure", file=sys.stderr)
        return
    fig, ax = plt.subplots(figsize=(7, 3.2))
    xs = [float(pt.gamma1) for pt in points]
    ys = [pt.multiplicity for pt in points]
    ax.vlines(xs, 0, ys, lw=0.8)
    ax.set_xlabel("gamma_1")
    ax.set_ylabel("multiplicity")
    fig.tight_layout()
    fig.savefig(path, metadata={"Date": None})
    plt.close(fig)


# --- subcommands ----------------------------------------------------------


def cmd_volumes(cfg: ExperimentConfig, outdir: Path, svg: bool) -> int:
    elements = enumerate_volumes(cfg.alpha, cfg.bound)
    rows = [[str(el.gamma), str(el.n), el.value.exact_str(),
             el.value.decimal_str()] for el in elements]
    write_csv(outdir / "volumes.csv",
              ["gamma", "n", "volume_exact", "volume_decimal"], rows)
    write_verdict(outdir, {
        "command": "volumes", "seed": cfg.seed, "bound": cfg.bound,
        "count": len(elements), "pass": True,
    })
    return EXIT_PASS


def _construction_verdict(cfg: ExperimentConfig) -> tuple[WeightedBoxSet, dict]:
    if cfg.gamma == 0:
        boxset = construct_brs(cfg.alpha, cfg.gamma, cfg.n)
        flags = {
            "volume_consistent": boxset.volume_consistent(),
            "character_identity": character_volume_identity(boxset, cfg.alpha),
            "certificate_ok": True,
        }
        info = {
            "gamma": str(cfg.gamma), "n": cfg.n,
            "claimed_volume_exact": boxset.claimed_volume.exact_str(),
            "claimed_volume_decimal": boxset.claimed_volume.decimal_str(),
            "certificate": boxset.certificate,
            "flags": flags,
        }
        return boxset, info
    witness = construct_witness(cfg.alpha, cfg.gamma, cfg.n)
    boxset = witness.result
    window = abs(Fraction(witness.lam) + cfg.alpha.real)
    for p, ap in cfg.alpha.parts:
        window = window * brs.padic_abs(witness.lam + ap, p)
    flags = {
        "window_identity": window * witness.box_scale == witness.xi,
        "volume_consistent": boxset.volume_consistent(),
        "character_identity": character_volume_identity(boxset, cfg.alpha),
        "certificate_ok": boxset.certificate >= sum(
            -w for _, w in boxset.terms if w < 0),
    }
    info = {
        "gamma": str(witness.gamma_input), "n": witness.n_input,
        "sign": witness.sign, "ell": witness.ell,
        "gamma_reduced": str(witness.gamma), "n_reduced": witness.n,
        "lam1": str(witness.lam1), "lam2": str(witness.lam2),
        "lam": str(witness.lam), "box_scale": witness.box_scale,
        "copies": witness.copies, "surplus": witness.surplus,
        "xi_reduced_exact": witness.xi.exact_str(),
        "claimed_volume_exact": boxset.claimed_volume.exact_str(),
        "claimed_volume_decimal": boxset.claimed_volume.decimal_str(),
        "certificate": boxset.certificate,
        "flags": flags,
    }
    return boxset, info


def cmd_construct(cfg: ExperimentConfig, outdir: Path, svg: bool) -> int:
    boxset, info = _construction_verdict(cfg)
    write_atomic(outdir / "boxes.txt", boxset.serialize() + "\n")
    ok = all(info["flags"].values())
    write_verdict(outdir, {
        "command": "construct", "seed": cfg.seed, "pass": ok, **info})
    return EXIT_PASS if ok else EXIT_PROPERTY_FAILURE


def cmd_verify(cfg: ExperimentConfig, outdir: Path, svg: bool) -> int:
    if cfg.control_box is not None:
        box = cfg.control_box
        boxset = WeightedBoxSet(((box, 1),), box.volume(), 0)
        info: dict = {"mode": "control_box"}
    else:
        boxset, info = _construction_verdict(cfg)
        info["mode"] = "construction"

    checkpoints = cfg.checkpoints
    wanted = _sample_checkpoints(checkpoints) if svg else checkpoints
    summary = discrepancy_series(boxset, cfg.alpha, starting_point(cfg),
                                 wanted)
    marks = set(checkpoints)
    records = [r for r in summary.records if r.n in marks]

    rows = [[str(r.n), r.value.decimal_str(), r.running_sup.decimal_str(),
             r.value.exact_str(), r.running_sup.exact_str()]
            for r in records]
    write_csv(outdir / "discrepancy.csv",
              ["N", "D_N", "running_sup", "D_N_exact", "running_sup_exact"],
              rows)

    sups = [r.running_sup for r in records]
    plateau = sups[-1] * 10 <= sups[-2] * 11 if len(sups) >= 2 else True
    growth = all(a < b for a, b in zip(sups, sups[1:])) if len(sups) >= 2 \
        else False
    identities_ok = all(info.get("flags", {}).values())
    flags = dict(info.get("flags", {}))
    flags["bounded_plateau"] = plateau
    flags["growth_detected"] = growth
    verdict = {
        "command": "verify", "seed": cfg.seed, **info, "flags": flags,
        "checkpoints": [
            {"N": r.n, "D_N": r.value.decimal_str(),
             "D_N_exact": r.value.exact_str(),
             "running_sup": r.running_sup.decimal_str(),
             "running_sup_exact": r.running_sup.exact_str()}
            for r in records],
        "sup_attained_at": summary.sup_at,
        "finite_horizon_note": (
            "boundedness and growth verdicts are finite-horizon substitutes "
            "evaluated at the configured checkpoints; they certify the "
            "computed range only"),
        "pass": plateau and identities_ok,
    }
    write_verdict(outdir, verdict)
    if svg:
        _plot_discrepancy(outdir / "discrepancy.svg", summary.records, marks)
    return EXIT_PASS if (plateau and identities_ok) else EXIT_PROPERTY_FAILURE


def cmd_cutproject(cfg: ExperimentConfig, outdir: Path, svg: bool) -> int:
    boxset, info = _construction_verdict(cfg)
    count = cfg.cutproject_n
    primary = boxset.terms[0][0] if boxset.terms else None
    points = (cutproject.generate_cutproject(cfg.alpha, primary, range(count))
              if primary is not None else [])
    write_csv(outdir / "cutpoints.csv", ["gamma1", "multiplicity"],
              [[str(pt.gamma1), str(pt.multiplicity)] for pt in points])
    agrees = cutproject.correspondence_check(boxset, cfg.alpha, count)
    write_verdict(outdir, {
        "command": "cutproject", "seed": cfg.seed, "count": count,
        "points": len(points), "pass": agrees,
        "flags": {"correspondence": agrees, **info.get("flags", {})},
    })
    if svg:
        _plot_cutpoints(outdir / "cutpoints.svg", points)
    return EXIT_PASS if agrees else EXIT_PROPERTY_FAILURE


def cmd_weyl(cfg: ExperimentConfig, outdir: Path, svg: bool) -> int:
    gamma = cfg.weyl_gamma
    phase = character_phase(gamma, cfg.alpha)
    norm = phase.distance_to_int()
    rows = []
    plot_rows = []
    all_ok = True
    for n in cfg.checkpoints:
        s = abs(weyl_sum(gamma, cfg.alpha, n))
        bound = (norm * (2 * n)).inverse()
        ok = s <= bound.to_float()
        all_ok = all_ok and ok
        rows.append([str(n), repr(s), bound.decimal_str(),
                     bound.exact_str(), "pass" if ok else "fail"])
        plot_rows.append((n, s, bound.to_float()))
    write_csv(outdir / "weyl.csv",
              ["N", "abs_weyl_sum", "bound", "bound_exact", "status"], rows)
    write_verdict(outdir, {
        "command": "weyl", "seed": cfg.seed, "gamma": str(gamma),
        "phase_exact": phase.theta.exact_str(),
        "phase_decimal": phase.theta.decimal_str(),
        "pass": all_ok, "flags": {"bound_satisfied": all_ok},
    })
    if svg:
        _plot_weyl(outdir / "weyl.svg", plot_rows)
    return EXIT_PASS if all_ok else EXIT_PROPERTY_FAILURE


_COMMANDS = {
    "volumes": cmd_volumes,
    "construct": cmd_construct,
    "verify": cmd_verify,
    "cutproject": cmd_cutproject,
    "weyl": cmd_weyl,
}


def cmd_batch(data: dict, outdir: Path, svg: bool) -> int:
    experiments = data.get("experiments")
    if not isinstance(experiments, list) or not experiments:
        raise ConfigError("batch config needs a nonempty experiments list")
    results = {}
    worst = EXIT_PASS
    for i, entry in enumerate(experiments):
        if not isinstance(entry, dict):
            raise ConfigError(f"experiment {i} is not an object")
        name = entry.get("name", f"experiment_{i}")
        command = entry.get("command")
        if command not in _COMMANDS:
            raise ConfigError(f"experiment {name}: unknown command {command!r}")
        sub = entry.get("config")
        if not isinstance(sub, dict):
            raise ConfigError(f"experiment {name}: missing config object")
        code = _run_single(command, sub, outdir / str(name), svg)
        results[str(name)] = {"command": command, "exit_code": code,
                              "pass": code == EXIT_PASS}
        worst = max(worst, code)
    write_atomic(outdir / "batch_verdict.json",
                 json.dumps({"command": "batch", "experiments": results,
                             "pass": worst == EXIT_PASS},
                            indent=2, sort_keys=True) + "\n")
    return worst


def _run_single(command: str, data: dict, outdir: Path, svg: bool) -> int:
    try:
        cfg = load_config(data)
        return _COMMANDS[command](cfg, outdir, svg)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except _BROKEN as e:
        print(f"property failure: {e}", file=sys.stderr)
        return EXIT_PROPERTY_FAILURE
    except _INFEASIBLE as e:
        print(f"infeasible: {e}", file=sys.stderr)
        return EXIT_INFEASIBLE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="adelicbrs",
        description="Exact bounded remainder sets on p-adic solenoids")
    sub = parser.add_subparsers(dest="command", required=True)
    specs = {
        "volumes": "enumerate allowable volumes up to a bound",
        "construct": "build a BRS box set with exact witnesses",
        "verify": "run the exact discrepancy series at checkpoints",
        "cutproject": "cross-check lift counts against the cut-and-project "
                      "counter",
        "weyl": "evaluate Weyl character averages against the exact bound",
        "batch": "run a list of experiments from one config",
    }
    for name, help_text in specs.items():
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("--config", required=True, metavar="PATH",
                        help="JSON config file")
        sp.add_argument("--out", default=None, metavar="DIR",
                        help="output directory (default: config key 'out' "
                             "or ./out)")
        sp.add_argument("--checkpoints", default=None, metavar="CSV-LIST",
                        help="comma-separated checkpoint overrides")
        sp.add_argument("--seed", type=int, default=None,
                        help="seed recorded in the verdict")
        sp.add_argument("--svg", action="store_true",
                        help="also render diagnostic figures")
        if name == "volumes":
            sp.add_argument("--bound", type=int, default=None,
                            help="enumeration bound override")
        if name == "cutproject":
            sp.add_argument("--count", type=int, default=None,
                            help="number of gamma_1 candidates")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        with open(args.config, encoding="utf-8") as f:
            data = json.load(f)
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
    except (OSError, json.JSONDecodeError) as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG

    if args.checkpoints is not None:
        try:
            data["checkpoints"] = [int(tok) for tok in
                                   args.checkpoints.split(",") if tok]
        except ValueError:
            print("config error: bad --checkpoints", file=sys.stderr)
            return EXIT_CONFIG
    if args.seed is not None:
        data["seed"] = args.seed
    if getattr(args, "bound", None) is not None:
        data["bound"] = args.bound
    if getattr(args, "count", None) is not None:
        data["cutproject_n"] = args.count

    outdir = Path(args.out or data.get("out", "out"))
    outdir.mkdir(parents=True, exist_ok=True)

    if args.command == "batch":
        try:
            return cmd_batch(data, outdir, args.svg)
        except ConfigError as e:
            print(f"config error: {e}", file=sys.stderr)
            return EXIT_CONFIG
    return _run_single(args.command, data, outdir, args.svg)


if __name__ == "__main__":
    sys.exit(main())
