"""Experiment configuration: parsing, full validation, assignment factories.

Configs are plain JSON objects.  Parsing never stops at the first problem:
every violation is collected (with its field name) and reported at once via
ConfigError.  A parsed config resolves all defaults, serializes back to an
equal dict, and can build the assignment factory used by the simulator.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Mapping

import numpy as np

from .blocks import MODE_COMMUNICATION, MODE_COMPUTATION, ComputationAssignment, degree_vector_violations
from .latency import LatencyModel
from .schemes import (
    GroupPlan,
    build_gc,
    build_generalized_rcs,
    build_mcc,
    build_rcs,
    build_uc_mmc,
    hybrid_example,
)

DEFAULT_SEED = 1729
SCHEMES = ("rcs", "rcs-general", "mcc", "uc-mmc", "gc", "hybrid-example")

_ALIASES = {
    "d": "degrees",
    "m": "degrees",
    "r": "load",
    "n": "groups",
    "N": "groups",
    "k": "workers",
    "K": "workers",
    "Kbar": "kbar",
}
_MODE_ALIASES = {
    "coded-computation": MODE_COMPUTATION,
    "coded-communication": MODE_COMMUNICATION,
}
_CONSTRUCTION_TAG = 4294967295


class ConfigError(ValueError):
    """Carries every validation violation found in a config."""

    def __init__(self, violations: list[str]):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


@dataclass(frozen=True)
class TrainSettings:
    dim: int
    samples: int
    eta: float = 0.1
    iterations: int = 50
    noise_std: float = 0.01


@dataclass(frozen=True)
class ExperimentConfig:
    scheme: str
    workers: int
    mode: str = MODE_COMPUTATION
    degrees: tuple[int, ...] | None = None
    load: int | None = None
    kbar: int | None = None
    groups: int = 1
    z: tuple[int, ...] | None = None
    offsets: tuple[int, ...] | None = None
    eval_points: tuple[float, ...] | None = None
    q: float = 0.0
    mu: float = 10.0
    alpha: float = 0.01
    trials: int = 10000
    seed: int = DEFAULT_SEED
    redraw: bool = True
    train: TrainSettings | None = None

    @property
    def k_total(self) -> int:
        return self.workers * (self.groups if self.scheme == "rcs-general" else 1)

    def model(self) -> LatencyModel:
        return LatencyModel(mu=self.mu, alpha=self.alpha)

    def to_dict(self) -> dict[str, Any]:
        data: dict[str, Any] = {
            "scheme": self.scheme,
            "workers": self.workers,
            "mode": self.mode,
            "q": self.q,
            "mu": self.mu,
            "alpha": self.alpha,
            "trials": self.trials,
            "seed": self.seed,
            "redraw": self.redraw,
        }
        if self.degrees is not None:
            data["degrees"] = list(self.degrees)
        if self.load is not None:
            data["load"] = self.load
        if self.kbar is not None:
            data["kbar"] = self.kbar
        if self.scheme == "rcs-general":
            data["groups"] = self.groups
        if self.z is not None:
            data["z"] = list(self.z)
        if self.offsets is not None:
            data["offsets"] = list(self.offsets)
        if self.eval_points is not None:
            data["eval_points"] = list(self.eval_points)
        if self.train is not None:
            data["train"] = {
                "dim": self.train.dim,
                "samples": self.train.samples,
                "eta": self.train.eta,
                "iterations": self.train.iterations,
                "noise_std": self.train.noise_std,
            }
        return data


def _as_int(data, key, violations, minimum=None) -> int | None:
    value = data[key]
    if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
        if isinstance(value, float) and float(value).is_integer():
            value = int(value)
        else:
            violations.append(f"{key}: expected an integer, got {value!r}")
            return None
    value = int(value)
    if minimum is not None and value < minimum:
        violations.append(f"{key}: must be >= {minimum}, got {value}")
        return None
    return value


def _as_number(data, key, violations, positive=False) -> float | None:
    value = data[key]
    if isinstance(value, bool) or not isinstance(value, (int, float, np.floating)):
        violations.append(f"{key}: expected a number, got {value!r}")
        return None
    value = float(value)
    if positive and value <= 0:
        violations.append(f"{key}: must be positive, got {value}")
        return None
    return value


def _as_int_list(data, key, violations) -> tuple[int, ...] | None:
    value = data[key]
    if isinstance(value, str):
        try:
            value = [int(part) for part in value.split(",") if part.strip()]
        except ValueError:
            violations.append(f"{key}: could not parse integer list from {data[key]!r}")
            return None
    if not isinstance(value, (list, tuple)) or not all(
        isinstance(v, (int, np.integer)) and not isinstance(v, bool) for v in value
    ):
        violations.append(f"{key}: expected a list of integers, got {value!r}")
        return None
    return tuple(int(v) for v in value)


def parse_config(
    data: Mapping[str, Any] | str | Path,
    overrides: Mapping[str, Any] | None = None,
) -> ExperimentConfig:
    """Parse and fully validate an experiment config.

    Args:
        data: a mapping, or a path to a JSON file.
        overrides: values taking precedence over the file contents (CLI
            flags).

    Returns:
        A resolved ExperimentConfig.

    Raises:
        ConfigError: listing every violation found, each prefixed with the
            offending field.
    """
    if isinstance(data, (str, Path)):
        with open(data, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    if not isinstance(data, Mapping):
        raise ConfigError(["config: expected a JSON object"])
    merged: dict[str, Any] = {}
    for source in (data, overrides or {}):
        for key, value in source.items():
            if value is None:
                continue
            merged[_ALIASES.get(key, key)] = value

    violations: list[str] = []
    known = {
        "scheme", "workers", "mode", "degrees", "load", "kbar", "groups", "z",
        "offsets", "eval_points", "q", "mu", "alpha", "trials", "seed",
        "redraw", "train",
    }
    for key in merged:
        if key not in known:
            violations.append(f"{key}: unknown field")

    scheme = merged.get("scheme")
    if scheme is None:
        violations.append("scheme: required field is missing")
    elif scheme not in SCHEMES:
        violations.append(
            f"scheme: unknown value {scheme!r} (expected one of {', '.join(SCHEMES)})"
        )
        scheme = None

    workers = None
    if "workers" not in merged:
        violations.append("workers: required field is missing")
    else:
        workers = _as_int(merged, "workers", violations, minimum=1)

    mode = merged.get("mode")
    mode = _MODE_ALIASES.get(mode, mode)
    if mode is None:
        mode = MODE_COMMUNICATION if scheme == "gc" else MODE_COMPUTATION
    elif mode not in (MODE_COMPUTATION, MODE_COMMUNICATION):
        violations.append(
            f"mode: unknown value {mode!r} (expected {MODE_COMPUTATION} or {MODE_COMMUNICATION})"
        )
        mode = MODE_COMPUTATION

    degrees = _as_int_list(merged, "degrees", violations) if "degrees" in merged else None
    load = _as_int(merged, "load", violations, minimum=1) if "load" in merged else None
    kbar = _as_int(merged, "kbar", violations, minimum=1) if "kbar" in merged else None
    groups = _as_int(merged, "groups", violations, minimum=1) if "groups" in merged else 1
    z = _as_int_list(merged, "z", violations) if "z" in merged else None
    offsets = _as_int_list(merged, "offsets", violations) if "offsets" in merged else None

    eval_points = None
    if "eval_points" in merged:
        raw = merged["eval_points"]
        if isinstance(raw, str):
            raw = [p for p in raw.split(",") if p.strip()]
        try:
            eval_points = tuple(float(v) for v in raw)
        except (TypeError, ValueError):
            violations.append(f"eval_points: expected a list of numbers, got {merged['eval_points']!r}")

    q = _as_number(merged, "q", violations) if "q" in merged else 0.0
    if q is not None and not 0.0 <= q <= 1.0:
        violations.append(f"q: tolerance must lie in [0, 1], got {q}")
        q = 0.0
    mu = _as_number(merged, "mu", violations, positive=True) if "mu" in merged else 10.0
    alpha = _as_number(merged, "alpha", violations, positive=True) if "alpha" in merged else 0.01
    trials = _as_int(merged, "trials", violations, minimum=1) if "trials" in merged else 10000
    seed = _as_int(merged, "seed", violations) if "seed" in merged else DEFAULT_SEED
    redraw = merged.get("redraw", True)
    if isinstance(redraw, str):
        if redraw.lower() in ("true", "1", "yes"):
            redraw = True
        elif redraw.lower() in ("false", "0", "no"):
            redraw = False
    if not isinstance(redraw, bool):
        violations.append(f"redraw: expected true or false, got {merged.get('redraw')!r}")
        redraw = True

    if scheme is not None and workers is not None:
        _validate_scheme(
            scheme, workers, mode, degrees, load, kbar, groups, z, offsets,
            eval_points, violations,
        )

    train = None
    if "train" in merged:
        train = _parse_train(merged["train"], violations)

    if (
        train is not None
        and scheme is not None
        and workers is not None
        and not violations
    ):
        k_total = workers * (groups if scheme == "rcs-general" else 1)
        if scheme == "gc" or mode == MODE_COMMUNICATION:
            violations.append(
                "train: requires a matrix-vector scheme in computation mode "
                "(exact-sum coding recovers no coordinate blocks)"
            )
        elif train.dim % k_total:
            violations.append(
                f"train.dim: {train.dim} is not divisible into {k_total} blocks"
            )

    if violations:
        raise ConfigError(violations)
    cfg = ExperimentConfig(
        scheme=scheme,
        workers=workers,
        mode=mode,
        degrees=degrees,
        load=load,
        kbar=kbar,
        groups=groups if scheme == "rcs-general" else 1,
        z=z,
        offsets=offsets,
        eval_points=eval_points,
        q=q,
        mu=mu,
        alpha=alpha,
        trials=trials,
        seed=seed,
        redraw=redraw,
        train=train,
    )
    try:
        build_assignment(cfg, np.random.default_rng(0))
    except ValueError as exc:
        raise ConfigError([f"scheme: cannot construct assignment: {exc}"]) from exc
    return cfg


def _parse_train(raw, violations) -> TrainSettings | None:
    if not isinstance(raw, Mapping):
        violations.append(f"train: expected an object, got {raw!r}")
        return None
    sub: list[str] = []
    aliases = {"d": "dim", "n": "samples"}
    known = {"dim", "samples", "eta", "iterations", "noise_std"}
    values = {aliases.get(k, k): v for k, v in raw.items()}
    for key in values:
        if key not in known:
            sub.append(f"train.{key}: unknown field")
    dim = samples = None
    if "dim" not in values:
        sub.append("train.dim: required field is missing")
    else:
        dim = _as_int({"train.dim": values["dim"]}, "train.dim", sub, minimum=1)
    if "samples" not in values:
        sub.append("train.samples: required field is missing")
    else:
        samples = _as_int({"train.samples": values["samples"]}, "train.samples", sub, minimum=1)
    eta = (
        _as_number({"train.eta": values["eta"]}, "train.eta", sub, positive=True)
        if "eta" in values
        else 0.1
    )
    iterations = (
        _as_int({"train.iterations": values["iterations"]}, "train.iterations", sub, minimum=1)
        if "iterations" in values
        else 50
    )
    noise = (
        _as_number({"train.noise_std": values["noise_std"]}, "train.noise_std", sub)
        if "noise_std" in values
        else 0.01
    )
    violations.extend(sub)
    if sub or dim is None or samples is None or eta is None or iterations is None:
        return None
    return TrainSettings(dim=dim, samples=samples, eta=eta, iterations=iterations, noise_std=noise)


def _validate_scheme(
    scheme, workers, mode, degrees, load, kbar, groups, z, offsets, eval_points,
    violations,
) -> None:
    if scheme in ("rcs", "rcs-general"):
        if degrees is None:
            violations.append(f"degrees: required for scheme {scheme!r}")
        else:
            violations.extend(f"degrees: {v}" for v in degree_vector_violations(degrees))
            total = sum(degrees)
            if scheme == "rcs" and total > workers:
                violations.append(
                    f"degrees: sum {total} exceeds the {workers} available shifts"
                )
            if offsets is not None and len(offsets) != total:
                violations.append(
                    f"offsets: expected {total} entries (sum of degrees), got {len(offsets)}"
                )
    if scheme == "rcs-general":
        if z is None:
            violations.append("z: required for scheme 'rcs-general'")
        elif degrees is not None:
            if len(z) != sum(degrees):
                violations.append(
                    f"z: expected {sum(degrees)} entries (sum of degrees), got {len(z)}"
                )
            bad = [g for g in z if not 1 <= g <= groups]
            if bad:
                violations.append(f"z: entries {bad} outside [1, {groups}]")
            for g in range(1, groups + 1):
                used = sum(1 for x in z if x == g)
                if used > workers:
                    violations.append(
                        f"z: group {g} used {used} times but only {workers} shifts exist"
                    )
    if scheme == "mcc":
        if kbar is None:
            violations.append("kbar: required for scheme 'mcc'")
        elif kbar > workers:
            violations.append(f"kbar: must not exceed workers ({workers}), got {kbar}")
        if eval_points is not None:
            if len(eval_points) < workers:
                violations.append(
                    f"eval_points: need {workers} points, got {len(eval_points)}"
                )
            elif len(set(eval_points)) != len(eval_points):
                violations.append("eval_points: points must be distinct")
        if mode == MODE_COMMUNICATION:
            violations.append("mode: scheme 'mcc' codes before computation; use 'computation'")
    if scheme in ("uc-mmc", "gc"):
        if load is None:
            violations.append(f"load: required for scheme {scheme!r}")
        elif load > workers:
            violations.append(f"load: must not exceed workers ({workers}), got {load}")
    if scheme == "gc" and mode == MODE_COMPUTATION:
        violations.append("mode: scheme 'gc' codes after computation; use 'communication'")
    if scheme == "hybrid-example" and workers != 4:
        violations.append(f"workers: scheme 'hybrid-example' is fixed at 4 workers, got {workers}")


def build_assignment(
    cfg: ExperimentConfig, rng: np.random.Generator | None = None
) -> ComputationAssignment:
    """Construct the assignment described by the config (one draw)."""
    if cfg.scheme == "rcs":
        return build_rcs(cfg.workers, cfg.degrees, rng, cfg.offsets, cfg.mode)
    if cfg.scheme == "rcs-general":
        plan = GroupPlan(cfg.groups, cfg.z)
        return build_generalized_rcs(cfg.workers, plan, cfg.degrees, rng, cfg.offsets, cfg.mode)
    if cfg.scheme == "mcc":
        return build_mcc(cfg.workers, cfg.kbar, cfg.eval_points)
    if cfg.scheme == "uc-mmc":
        return build_uc_mmc(cfg.workers, cfg.load)
    if cfg.scheme == "gc":
        return build_gc(cfg.workers, cfg.load)
    if cfg.scheme == "hybrid-example":
        return hybrid_example()
    raise ValueError(f"unknown scheme {cfg.scheme!r}")


def assignment_source(cfg: ExperimentConfig):
    """Assignment source for the simulator.

    Randomized constructions with redraw enabled return a factory (fresh
    draw per trial); everything else returns one fixed assignment built from
    a dedicated construction stream.
    """
    randomized = cfg.scheme in ("rcs", "rcs-general") and cfg.offsets is None
    if randomized and cfg.redraw:
        return lambda rng: build_assignment(cfg, rng)
    return concrete_assignment(cfg)


def concrete_assignment(cfg: ExperimentConfig) -> ComputationAssignment:
    """One reproducible assignment drawn from the config's construction stream."""
    rng = np.random.default_rng(np.random.SeedSequence((cfg.seed, _CONSTRUCTION_TAG)))
    return build_assignment(cfg, rng)
