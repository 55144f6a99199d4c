"""Command-line interface.

Subcommands: ``gamma`` (bracketing certificates), ``bounds`` (threshold
constants), ``posterior`` (posterior means and brackets), ``experiment``
(verification suites).  All numeric output is emitted at full double
precision so reruns diff exactly.

Exit codes: 0 success, 2 configuration error, 3 precondition violation
(run again with --exploratory to execute anyway, tagged).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .bernstein import (
    RoughPriorError,
    gamma_for_epsilon,
    gamma_from_derivative_bound,
)
from .bounds import accuracy_threshold
from .experiments import (
    ExperimentSpecError,
    records_to_csv,
    records_to_jsonl,
    run_experiment,
)
from .posterior import (
    Counts,
    bracket,
    exp_boundary_mean_floor,
    mixture_bracket,
    posterior_mean,
)
from .priors import (
    DirichletMixturePrior,
    ExpBoundaryPrior,
    PriorConfigError,
    prior_from_config,
)
from .simulate import PreconditionError, comparison_constants_for

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_PRECONDITION = 3


def _load_config(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except FileNotFoundError as exc:
        raise PriorConfigError(f"config file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise PriorConfigError(f"config is not valid JSON: {exc}") from exc


def _emit(payload, out: str | None):
    text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _cmd_gamma(args) -> int:
    config = _load_config(args.config)
    prior = prior_from_config(config)
    if args.method == "derivative":
        if args.max_abs_slope is None or args.min_value is None:
            raise PriorConfigError(
                "--method derivative needs --max-abs-slope and --min-value"
            )
        cert = gamma_from_derivative_bound(prior, args.epsilon,
                                           args.max_abs_slope, args.min_value)
    else:
        cert = gamma_for_epsilon(prior, args.epsilon,
                                 grid_resolution=args.grid_resolution)
    _emit(cert.to_dict(), args.out)
    return EXIT_OK


def _cmd_bounds(args) -> int:
    config = _load_config(args.config)
    mode = config.get("mode")
    if mode == "accuracy":
        method = config.get("method", "remark3pp")
        prior = prior_from_config(config["prior"]) if "prior" in config else None
        threshold = accuracy_threshold(config["epsilon"], prior=prior,
                                       method=method)
        _emit(threshold.to_dict(), args.out)
        return EXIT_OK
    if mode == "comparison":
        prior_blue = prior_from_config(config["prior_blue"])
        prior_red = prior_from_config(config["prior_red"])
        constants = comparison_constants_for(
            prior_blue, prior_red, config["c"], config["delta"],
            config["eta"], config["epsilon"],
        )
        _emit(constants.to_dict(), args.out)
        return EXIT_OK
    raise PriorConfigError(
        f"bounds config needs mode 'accuracy' or 'comparison', got {mode!r}"
    )


def _cmd_posterior(args) -> int:
    config = _load_config(args.config)
    prior = prior_from_config(config["prior"])
    counts = Counts(config["counts"])
    k = int(config.get("k", 0))
    result = posterior_mean(prior, counts, k)
    payload = {
        "mean": result.mean,
        "method": result.method,
        "error_estimate": result.error_estimate,
        "flagged": result.flagged,
        "bracket": None,
    }
    if isinstance(prior, ExpBoundaryPrior):
        payload["mean_floor"] = exp_boundary_mean_floor(counts.n)
    elif isinstance(prior, DirichletMixturePrior):
        a, big_a = prior.support_box
        lower, upper = mixture_bracket(a, big_a, counts, k)
        payload["bracket"] = {"lower": lower, "upper": upper,
                              "box": [a, big_a], "k": k}
    elif "epsilon" in config:
        cert = gamma_for_epsilon(prior, config["epsilon"])
        payload["bracket"] = bracket(cert, counts, k).to_dict()
    _emit(payload, args.out)
    return EXIT_OK


def _cmd_experiment(args) -> int:
    spec = _load_config(args.config)
    records, resolved, digest = run_experiment(
        spec, seed=args.seed, jobs=args.jobs, exploratory=args.exploratory,
    )
    jsonl = records_to_jsonl(records)
    if args.out:
        out_path = Path(args.out)
        out_path.write_text(jsonl)
        manifest = {
            "subcommand": "experiment",
            "config_path": str(args.config),
            "seed": int(args.seed),
            "output_path": str(out_path),
            "spec_hash": digest,
        }
        manifest_path = Path(str(out_path) + ".manifest.json")
        manifest_path.write_text(json.dumps(manifest, sort_keys=True,
                                            indent=2) + "\n")
        if args.format == "csv":
            Path(str(out_path) + ".csv").write_text(records_to_csv(records))
        passed = [r.get("passed") for r in records if "passed" in r]
        sys.stderr.write(
            f"experiment {resolved['kind']}: {len(records)} records, "
            f"{sum(bool(p) for p in passed)}/{len(passed)} checks passed, "
            f"spec_hash {digest}\n"
        )
    else:
        sys.stdout.write(jsonl if args.format != "csv"
                         else records_to_csv(records))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rarebayes",
        description="Posterior means, bracketing certificates, sample-size "
                    "thresholds, and seeded verification suites for "
                    "multinomial rare-event estimation.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p_gamma = sub.add_parser("gamma", help="bracketing certificate for a prior")
    p_gamma.add_argument("--config", required=True, help="prior config JSON")
    p_gamma.add_argument("--epsilon", type=float, required=True)
    p_gamma.add_argument("--grid-resolution", type=int, default=2048)
    p_gamma.add_argument("--method", choices=["search", "derivative"],
                         default="search")
    p_gamma.add_argument("--max-abs-slope", type=float, default=None,
                         help="analytic bound on |d tilde_pi / d p_1| (K=2)")
    p_gamma.add_argument("--min-value", type=float, default=None,
                         help="analytic minimum of tilde_pi (K=2)")
    p_gamma.add_argument("--out", default=None)
    p_gamma.set_defaults(fn=_cmd_gamma)

    p_bounds = sub.add_parser("bounds", help="threshold constants")
    p_bounds.add_argument("--config", required=True)
    p_bounds.add_argument("--out", default=None)
    p_bounds.set_defaults(fn=_cmd_bounds)

    p_post = sub.add_parser("posterior", help="posterior mean and bracket")
    p_post.add_argument("--config", required=True)
    p_post.add_argument("--out", default=None)
    p_post.set_defaults(fn=_cmd_posterior)

    p_exp = sub.add_parser("experiment", help="run a verification suite")
    p_exp.add_argument("--config", required=True, help="experiment spec JSON")
    p_exp.add_argument("--seed", type=int, default=0)
    p_exp.add_argument("--jobs", type=int, default=1,
                       help="worker count; never affects results")
    p_exp.add_argument("--out", default=None,
                       help="results file (JSON lines); manifest written "
                            "alongside")
    p_exp.add_argument("--format", choices=["json", "csv"], default="json",
                       help="csv additionally writes a delimited summary")
    p_exp.add_argument("--exploratory", action="store_true",
                       help="run despite precondition violations, tagged")
    p_exp.set_defaults(fn=_cmd_experiment)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (PriorConfigError, ExperimentSpecError, RoughPriorError,
            KeyError, ValueError, MemoryError) as exc:
        detail = f"missing config key {exc}" if isinstance(exc, KeyError) \
            else str(exc)
        sys.stderr.write(f"error: {detail}\n")
        return EXIT_CONFIG
    except PreconditionError as exc:
        sys.stderr.write(
            f"precondition violation: {exc}\n"
            "rerun with --exploratory to execute anyway (tagged)\n"
        )
        return EXIT_PRECONDITION
    except ArithmeticError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
