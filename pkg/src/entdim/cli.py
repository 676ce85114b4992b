"""Batch front end: JSON configs in, JSON/CSV results out.

Subcommands: entropy, greedy, dimension, verify.  Exit codes: 0 success,
1 malformed config, 2 precondition violated, 3 solver budget or grid
resolution exceeded, 4 verification suite failed.  Given the same config
and seed the JSON payload is reproducible byte for byte, except for the
``runtime_ms`` field.
"""

from __future__ import annotations

import argparse
import inspect
import io
import json
import math
import sys
import time

from .alphabet import (
    family_from_json,
    partition_entropy,
    partition_from_json,
    partition_to_json,
    shannon_fn,
)
from .dimension import box_dimension, covering_number, entropy_dimension, local_dimension
from .errors import BudgetError, PreconditionError, ResolutionError, SpaceMismatchError
from .measure import measure_from_json, mix, set_from_json
from .mixture import greedy_joint_alphabet
from .solvers import entropy_exact_finite, entropy_greedy, entropy_line_dp
from .verify import SUITES


def _load_config(path: str) -> dict:
    with open(path) as fh:
        return json.load(fh)


def _encode_value(v: float):
    return "infinite" if math.isinf(v) else v


def cmd_entropy(config: dict) -> dict:
    mu = measure_from_json(config["measure"])
    solver = config.get("solver", "exact")
    t0 = time.perf_counter()
    if solver == "exact":
        fam = family_from_json(config["family"])
        value, partition = entropy_exact_finite(mu, fam, budget=config.get("budget", 10_000_000))
    elif solver == "greedy":
        fam = family_from_json(config["family"])
        value, partition = entropy_greedy(mu, fam)
    elif solver == "dp":
        fam_obj = config.get("family", {})
        if fam_obj.get("kind") == "max_length":
            d = float(fam_obj["d"])
        elif fam_obj.get("kind") == "balls":
            d = 2.0 * float(fam_obj["delta"])
        else:
            d = float(config["d"])
        value, partition = entropy_line_dp(mu, d, int(config.get("grid_n", 1 << 14)))
    else:
        raise KeyError(f"unknown solver {solver!r}")
    runtime_ms = 1000.0 * (time.perf_counter() - t0)
    return {
        "solver": solver,
        "value": _encode_value(value),
        "partition": partition_to_json(partition) if partition is not None else None,
        "runtime_ms": runtime_ms,
    }


def cmd_greedy(config: dict) -> dict:
    sources = []
    for rec in config["sources"]:
        sources.append((
            float(rec["weight"]),
            measure_from_json(rec["measure"]),
            partition_from_json(rec["alphabet"]),
        ))
    t0 = time.perf_counter()
    joint = greedy_joint_alphabet(sources)
    mixture = mix([(a, mu) for a, mu, _ in sources])
    h_mix = partition_entropy(mixture, joint)
    weighted_sum = sum(a * partition_entropy(mu, p) for a, mu, p in sources)
    spread = sum(shannon_fn(a) for a, _, _ in sources)
    runtime_ms = 1000.0 * (time.perf_counter() - t0)
    return {
        "joint_alphabet": partition_to_json(joint),
        "mixture_alphabet_entropy": h_mix,
        "weighted_source_entropy": weighted_sum,
        "weight_spread": spread,
        "upper_bound": weighted_sum + spread,
        "bound_holds": h_mix <= weighted_sum + spread + 1e-9,
        "runtime_ms": runtime_ms,
    }


def cmd_dimension(config: dict) -> dict:
    estimator = config.get("estimator", "entropy")
    deltas = [float(d) for d in config["deltas"]]
    if estimator == "entropy":
        mu = measure_from_json(config["measure"])
        est = entropy_dimension(
            mu, deltas, int(config.get("grid_n", 1 << 14)),
            window=int(config.get("window", 3)),
            tail=config.get("tail", 2))
        return {
            "estimator": "entropy",
            "deltas": list(est.deltas),
            "entropies": list(est.entropies),
            "window_slopes": list(est.window_slopes),
            "upper": est.upper,
            "lower": est.lower,
            "slope": est.slope,
        }
    if estimator == "box":
        support = set_from_json(config["support"])
        return {
            "estimator": "box",
            "deltas": deltas,
            "counts": [covering_number(support, d) for d in deltas],
            "dimension": box_dimension(support, deltas),
        }
    if estimator == "local":
        mu = measure_from_json(config["measure"])
        loc = local_dimension(
            mu, float(config["x"]), deltas,
            window=int(config.get("window", 3)),
            tail=config.get("tail", 2))
        return {
            "estimator": "local",
            "x": float(config["x"]),
            "upper": _encode_value(loc.upper),
            "lower": _encode_value(loc.lower),
        }
    raise KeyError(f"unknown estimator {estimator!r}")


def _dimension_csv(result: dict) -> str:
    out = io.StringIO()
    out.write("delta,entropy_bits,window_slope\n")
    deltas = result["deltas"]
    entropies = result["entropies"]
    slopes = result["window_slopes"]
    lead = len(deltas) - len(slopes)
    for i, (d, h) in enumerate(zip(deltas, entropies)):
        slope = "" if i < lead else repr(slopes[i - lead])
        out.write(f"{d!r},{h!r},{slope}\n")
    return out.getvalue()


def cmd_verify(args) -> dict:
    suite = SUITES[args.suite]
    params = inspect.signature(suite).parameters
    kwargs = {}
    for name in ("instances", "assignments", "trials", "seed", "grid_n"):
        value = getattr(args, name, None)
        if value is not None and name in params:
            kwargs[name] = value
    return suite(**kwargs)


def _emit(payload: str, out_path: str | None, summary: str | None):
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(payload)
        if summary:
            print(summary)
    else:
        sys.stdout.write(payload)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="entdim")
    sub = parser.add_subparsers(dest="command", required=True)

    for name in ("entropy", "greedy", "dimension"):
        p = sub.add_parser(name)
        p.add_argument("--config", required=True)
        p.add_argument("--out")
        p.add_argument("--format", choices=["json", "csv"], default="json")
        p.add_argument("--seed", type=int, default=0)

    v = sub.add_parser("verify")
    v.add_argument("suite", choices=sorted(SUITES))
    v.add_argument("--instances", type=int)
    v.add_argument("--assignments", type=int)
    v.add_argument("--trials", type=int)
    v.add_argument("--grid-n", dest="grid_n", type=int)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--out")
    v.add_argument("--format", choices=["json"], default="json")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "entropy":
            result = cmd_entropy(_load_config(args.config))
            summary = f"entropy value: {_round4(result['value'])} ({result['solver']}, {result['runtime_ms']:.1f} ms)"
        elif args.command == "greedy":
            result = cmd_greedy(_load_config(args.config))
            summary = (
                f"joint alphabet of {len(result['joint_alphabet'])} cells: "
                f"h(mix) = {result['mixture_alphabet_entropy']:.4f}, "
                f"bound = {result['upper_bound']:.4f}, holds = {result['bound_holds']}")
        elif args.command == "dimension":
            result = cmd_dimension(_load_config(args.config))
            if args.format == "csv":
                if result["estimator"] != "entropy":
                    raise PreconditionError("csv output is for the entropy-sweep estimator")
                _emit(_dimension_csv(result), args.out,
                      f"dimension slope: {result['slope']:.4f}")
                return 0
            key = "slope" if result["estimator"] == "entropy" else (
                "dimension" if result["estimator"] == "box" else "upper")
            summary = f"{result['estimator']} dimension: {_round4(result[key])}"
        else:
            result = cmd_verify(args)
            summary = f"verify {result['suite']}: {'pass' if result['passed'] else 'FAIL'}"
    except (FileNotFoundError, json.JSONDecodeError, KeyError, TypeError) as e:
        _emit(json.dumps({"error": {"kind": "config", "message": str(e)}}, sort_keys=True) + "\n",
              None, None)
        return 1
    except (PreconditionError, SpaceMismatchError) as e:
        _emit(json.dumps({"error": {"kind": "precondition", "message": str(e)}}, sort_keys=True) + "\n",
              None, None)
        return 2
    except (BudgetError, ResolutionError) as e:
        _emit(json.dumps({"error": {"kind": "budget", "message": str(e)}}, sort_keys=True) + "\n",
              None, None)
        return 3

    _emit(json.dumps(result, sort_keys=True, indent=2) + "\n", args.out, summary)
    if args.command == "verify" and not result["passed"]:
        return 4
    return 0


def _round4(v):
    return v if isinstance(v, str) else round(v, 4)


if __name__ == "__main__":
    sys.exit(main())
