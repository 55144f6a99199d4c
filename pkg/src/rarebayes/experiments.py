"""Declarative experiment specs: validation, dispatch, serialization.

An experiment spec is a JSON object with a ``kind`` selecting one of the
verification suites.  Specs are validated against a schema, resolved
(defaults filled in, thresholds computed), hashed, and dispatched; every
output record carries the master seed and the content hash of the
resolved spec, so a results file identifies the exact run that produced
it.  Rerunning a spec with the same seed reproduces the file byte for
byte, whatever the worker count.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math

import jsonschema

from . import simulate
from .bernstein import gamma_for_epsilon
from .bounds import accuracy_threshold
from .priors import SimplexPoint, prior_from_config

__all__ = [
    "ExperimentSpecError",
    "resolve_spec",
    "spec_hash",
    "run_experiment",
    "records_to_jsonl",
    "records_to_csv",
]


class ExperimentSpecError(ValueError):
    """The experiment spec does not validate against its schema."""


_PRIOR = {"type": "object", "required": ["type"]}
_ZETA_OF_N = {
    "type": "object",
    "properties": {
        "form": {"const": "power"},
        "coefficient": {"type": "number", "exclusiveMinimum": 0},
        "exponent": {"type": "number", "exclusiveMinimum": 0},
    },
    "required": ["form", "exponent"],
    "additionalProperties": False,
}
_ZETA_OF_P = {
    "type": "object",
    "properties": {
        "form": {"enum": ["sqrt", "power"]},
        "exponent": {"type": "number", "exclusiveMinimum": 0,
                     "exclusiveMaximum": 1},
    },
    "required": ["form"],
    "additionalProperties": False,
}
_UNIT = {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1}
_POS_INT = {"type": "integer", "minimum": 1}

SCHEMAS = {
    "accuracy": {
        "type": "object",
        "properties": {
            "kind": {"const": "accuracy"},
            "prior": _PRIOR,
            "epsilon": _UNIT,
            "threshold": {
                "type": "object",
                "properties": {
                    "method": {"enum": ["markov_uniform", "remark3pp",
                                        "explicit"]},
                    "N": _POS_INT,
                },
                "required": ["method"],
                "additionalProperties": False,
            },
            "grid": {
                "type": "object",
                "properties": {
                    "np": {"type": "array", "items": {"type": "number",
                                                      "exclusiveMinimum": 0},
                           "minItems": 1},
                    "p1": {"type": "array", "items": _UNIT, "minItems": 1},
                },
                "required": ["np", "p1"],
                "additionalProperties": False,
            },
            "k": {"type": "integer", "minimum": 0},
            "reps": _POS_INT,
        },
        "required": ["kind", "prior", "epsilon", "threshold", "grid"],
        "additionalProperties": False,
    },
    "comparison": {
        "type": "object",
        "properties": {
            "kind": {"const": "comparison"},
            "prior_blue": _PRIOR,
            "prior_red": _PRIOR,
            "c": {"type": "number", "exclusiveMinimum": 0},
            "delta": _UNIT,
            "eta": _UNIT,
            "epsilon": _UNIT,
            "p1": _UNIT,
            "q1": _UNIT,
            "kbar": {"type": "integer", "minimum": 0, "maximum": 1},
            "schedule": {
                "type": "object",
                "properties": {
                    "kind": {"enum": ["alternating", "sequence"]},
                    "sequence": {"type": "array",
                                 "items": {"enum": [0, 1]}},
                },
                "required": ["kind"],
                "additionalProperties": False,
            },
            "n": {"oneOf": [_POS_INT, {"const": "auto"}]},
            "reps": _POS_INT,
        },
        "required": ["kind", "prior_blue", "prior_red", "c", "delta", "eta",
                     "epsilon", "p1", "q1", "schedule", "n"],
        "additionalProperties": False,
    },
    "comparison_random": {
        "type": "object",
        "properties": {
            "kind": {"const": "comparison_random"},
            "prior_blue": _PRIOR,
            "prior_red": _PRIOR,
            "c": {"type": "number", "exclusiveMinimum": 0},
            "delta": _UNIT,
            "eta": _UNIT,
            "epsilon": _UNIT,
            "mu_b": _UNIT,
            "p1": _UNIT,
            "q1": _UNIT,
            "kbar": {"type": "integer", "minimum": 0, "maximum": 1},
            "n": {"oneOf": [_POS_INT, {"const": "auto"}]},
            "reps": _POS_INT,
        },
        "required": ["kind", "prior_blue", "prior_red", "c", "delta", "eta",
                     "epsilon", "mu_b", "p1", "q1", "n"],
        "additionalProperties": False,
    },
    "odds": {
        "type": "object",
        "properties": {
            "kind": {"const": "odds"},
            "prior_blue": _PRIOR,
            "prior_red": _PRIOR,
            "mu_b": _UNIT,
            "epsilon": _UNIT,
            "p1": _UNIT,
            "q1": _UNIT,
            "kbar": {"type": "integer", "minimum": 0, "maximum": 1},
            "n": _POS_INT,
            "N": _POS_INT,
            "reps": _POS_INT,
        },
        "required": ["kind", "prior_blue", "prior_red", "mu_b", "epsilon",
                     "p1", "q1", "n"],
        "additionalProperties": False,
    },
    "exp_boundary_witness": {
        "type": "object",
        "properties": {
            "kind": {"const": "exp_boundary_witness"},
            "N": _POS_INT,
            "delta": {"type": "number", "exclusiveMinimum": 0},
        },
        "required": ["kind", "N", "delta"],
        "additionalProperties": False,
    },
    "scaling_witness": {
        "type": "object",
        "properties": {
            "kind": {"const": "scaling_witness"},
            "prior": _PRIOR,
            "zeta": _ZETA_OF_N,
            "N": _POS_INT,
            "certificate_epsilon": _UNIT,
        },
        "required": ["kind", "prior", "zeta", "N"],
        "additionalProperties": False,
    },
    "exp_boundary_comparison": {
        "type": "object",
        "properties": {
            "kind": {"const": "exp_boundary_comparison"},
            "prior_blue": _PRIOR,
            "c": {"type": "number", "exclusiveMinimum": 0},
            "mu_b": _UNIT,
            "N": _POS_INT,
            "n_max": _POS_INT,
            "reps": _POS_INT,
        },
        "required": ["kind", "prior_blue", "c", "mu_b", "N", "n_max"],
        "additionalProperties": False,
    },
    "scaling_floor": {
        "type": "object",
        "properties": {
            "kind": {"const": "scaling_floor"},
            "prior_blue": _PRIOR,
            "prior_red": _PRIOR,
            "c": {"type": "number", "exclusiveMinimum": 0},
            "mu_b": _UNIT,
            "zeta": _ZETA_OF_P,
            "N": _POS_INT,
            "n_values": {"type": "array", "items": _POS_INT, "minItems": 1},
            "reps": _POS_INT,
        },
        "required": ["kind", "prior_blue", "prior_red", "c", "mu_b", "zeta",
                     "N", "n_values"],
        "additionalProperties": False,
    },
}

_DEFAULT_REPS = 10_000


def resolve_spec(spec: dict) -> dict:
    """Validate a spec and fill in defaults; returns a new dict."""
    if not isinstance(spec, dict):
        raise ExperimentSpecError("experiment spec must be a JSON object")
    kind = spec.get("kind")
    schema = SCHEMAS.get(kind)
    if schema is None:
        raise ExperimentSpecError(
            f"unknown experiment kind {kind!r}; expected one of "
            f"{sorted(SCHEMAS)}"
        )
    try:
        jsonschema.validate(spec, schema)
    except jsonschema.ValidationError as exc:
        raise ExperimentSpecError(f"spec does not validate: {exc.message}") \
            from exc
    resolved = json.loads(json.dumps(spec))    # deep copy, JSON-clean
    if kind in ("accuracy", "comparison", "comparison_random", "odds",
                "exp_boundary_comparison", "scaling_floor"):
        resolved.setdefault("reps", _DEFAULT_REPS)
    if kind == "accuracy":
        resolved.setdefault("k", 0)
    if kind in ("comparison", "comparison_random", "odds"):
        resolved.setdefault("kbar", 0)
    if kind == "scaling_witness":
        resolved.setdefault("certificate_epsilon", 0.5)
    return resolved


def spec_hash(resolved: dict) -> str:
    """Git-style content hash (sha1 blob) of the canonical resolved spec."""
    payload = json.dumps(resolved, sort_keys=True,
                         separators=(",", ":")).encode()
    return hashlib.sha1(b"blob %d\x00" % len(payload) + payload).hexdigest()


def _zeta_of_n(cfg: dict):
    coeff = float(cfg.get("coefficient", 1.0))
    expo = float(cfg["exponent"])
    return lambda n: coeff * float(n) ** expo


def _zeta_of_p(cfg: dict):
    if cfg["form"] == "sqrt":
        return math.sqrt
    expo = float(cfg["exponent"])
    return lambda t: float(t) ** expo


def run_experiment(spec: dict, seed: int = 0, jobs: int = 1,
                   exploratory: bool = False):
    """Run a validated spec; returns (records, resolved_spec, hash)."""
    resolved = resolve_spec(spec)
    digest = spec_hash(resolved)
    kind = resolved["kind"]
    records = _DISPATCH[kind](resolved, seed, jobs, exploratory)
    for rec in records:
        rec["seed"] = int(seed)
        rec["spec_hash"] = digest
    return records, resolved, digest


def _run_accuracy(spec, seed, jobs, exploratory):
    prior = prior_from_config(spec["prior"])
    epsilon = spec["epsilon"]
    tcfg = spec["threshold"]
    if tcfg["method"] == "explicit":
        n_threshold = tcfg["N"]
    elif tcfg["method"] == "markov_uniform":
        n_threshold = accuracy_threshold(epsilon,
                                         method="markov_uniform").N
    else:
        n_threshold = accuracy_threshold(epsilon, prior=prior,
                                         method="remark3pp").N
    if getattr(prior, "k", None) != 2:
        raise ExperimentSpecError("accuracy grids with p1 need a K=2 prior")
    grid = []
    for target in spec["grid"]["np"]:
        for p1 in spec["grid"]["p1"]:
            n = round(target / p1)
            grid.append((n, SimplexPoint([p1, 1.0 - p1])))
    return simulate.verify_accuracy(
        prior, epsilon, n_threshold, grid, k=spec["k"], reps=spec["reps"],
        seed=seed, jobs=jobs,
    )


def _two_dice(spec):
    p1, q1 = spec["p1"], spec["q1"]
    return simulate.TwoDiceParams(
        p=SimplexPoint([p1, 1.0 - p1]), q=SimplexPoint([q1, 1.0 - q1]),
        kbar=spec["kbar"], c=spec["c"],
    )


def _run_comparison(spec, seed, jobs, exploratory):
    prior_blue = prior_from_config(spec["prior_blue"])
    prior_red = prior_from_config(spec["prior_red"])
    constants = simulate.comparison_constants_for(
        prior_blue, prior_red, spec["c"], spec["delta"], spec["eta"],
        spec["epsilon"],
    )
    params = _two_dice(spec)
    scfg = spec["schedule"]
    schedule = simulate.DeterministicSchedule(
        pattern=scfg["kind"],
        sequence=tuple(scfg.get("sequence", ())),
    )
    n = spec["n"]
    if n == "auto":
        # smallest even n with (n/2) * p1 >= N under the alternating schedule
        n = 2 * math.ceil(constants.N / spec["p1"])
    records = simulate.verify_comparison(
        prior_blue, prior_red, params, schedule, spec["delta"],
        spec["epsilon"], spec["eta"], int(n), constants.N,
        reps=spec["reps"], seed=seed, jobs=jobs, exploratory=exploratory,
    )
    for rec in records:
        rec["constants"] = constants.to_dict()
    return records


def _run_comparison_random(spec, seed, jobs, exploratory):
    prior_blue = prior_from_config(spec["prior_blue"])
    prior_red = prior_from_config(spec["prior_red"])
    constants = simulate.comparison_constants_for(
        prior_blue, prior_red, spec["c"], spec["delta"], spec["eta"],
        spec["epsilon"],
    )
    params = _two_dice(spec)
    n = spec["n"]
    if n == "auto":
        n = math.ceil(constants.N / spec["p1"])
    records = simulate.verify_comparison_random(
        prior_blue, prior_red, params, spec["mu_b"], spec["delta"],
        spec["epsilon"], int(n), constants.N,
        reps=spec["reps"], seed=seed, jobs=jobs, exploratory=exploratory,
    )
    for rec in records:
        rec["constants"] = constants.to_dict()
    return records


def _run_odds(spec, seed, jobs, exploratory):
    prior_blue = prior_from_config(spec["prior_blue"])
    prior_red = prior_from_config(spec["prior_red"])
    return simulate.verify_posterior_odds(
        prior_blue, prior_red, spec["mu_b"], spec["epsilon"], spec["n"],
        SimplexPoint([spec["p1"], 1.0 - spec["p1"]]),
        SimplexPoint([spec["q1"], 1.0 - spec["q1"]]),
        kbar=spec["kbar"], n_threshold=spec.get("N"), reps=spec["reps"],
        seed=seed, jobs=jobs, exploratory=exploratory,
    )


def _run_exp_boundary_witness(spec, seed, jobs, exploratory):
    return [simulate.find_exp_boundary_witness(spec["N"], spec["delta"])]


def _run_scaling_witness(spec, seed, jobs, exploratory):
    prior = prior_from_config(spec["prior"])
    certificate = gamma_for_epsilon(prior, spec["certificate_epsilon"])
    return [simulate.find_scaling_witness(certificate,
                                          _zeta_of_n(spec["zeta"]),
                                          spec["N"])]


def _run_exp_boundary_comparison(spec, seed, jobs, exploratory):
    prior_blue = prior_from_config(spec["prior_blue"])
    return simulate.exp_boundary_comparison_scan(
        prior_blue, spec["c"], spec["mu_b"], spec["N"], spec["n_max"],
        reps=spec["reps"], seed=seed, jobs=jobs,
    )


def _run_scaling_floor(spec, seed, jobs, exploratory):
    prior_blue = prior_from_config(spec["prior_blue"])
    prior_red = prior_from_config(spec["prior_red"])
    return simulate.scaling_floor_demo(
        prior_blue, prior_red, spec["c"], spec["mu_b"],
        _zeta_of_p(spec["zeta"]), spec["N"], spec["n_values"],
        reps=spec["reps"], seed=seed, jobs=jobs,
    )


_DISPATCH = {
    "accuracy": _run_accuracy,
    "comparison": _run_comparison,
    "comparison_random": _run_comparison_random,
    "odds": _run_odds,
    "exp_boundary_witness": _run_exp_boundary_witness,
    "scaling_witness": _run_scaling_witness,
    "exp_boundary_comparison": _run_exp_boundary_comparison,
    "scaling_floor": _run_scaling_floor,
}


def records_to_jsonl(records) -> str:
    """Serialize records, one canonical JSON object per line."""
    return "".join(json.dumps(rec, sort_keys=True) + "\n" for rec in records)


def records_to_csv(records) -> str:
    """Flatten records to a delimited summary (nested values as JSON)."""
    keys = sorted({key for rec in records for key in rec})
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=keys, lineterminator="\n")
    writer.writeheader()
    for rec in records:
        row = {}
        for key in keys:
            value = rec.get(key, "")
            if isinstance(value, (list, dict)):
                value = json.dumps(value, sort_keys=True)
            elif isinstance(value, bool):
                value = "true" if value else "false"
            elif value is None:
                value = ""
            row[key] = value
        writer.writerow(row)
    return buf.getvalue()
