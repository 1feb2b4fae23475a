"""Parameter sweeps aggregating verification metrics into plot-ready tables.

Each sweep row reruns the gauge-equivalence experiment (and a dt
self-convergence study) at one value of a numeric config key and records
the final norm drift, the final equivalence gap and the observed order.
Failed rows carry the mapped exit code and message inline; a sweep never
aborts early.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from pathlib import Path

from .cli import (
    RampPeriodicityError,
    run_convergence,
    run_equivalence,
    write_csv,
)
from .config import ConfigError, RunConfig
from .solver import BlowUpError

__all__ = ["SweepRow", "SweepResult", "sweep", "write_sweep_csv", "run_sweep_command"]


@dataclass(frozen=True)
class SweepRow:
    value: float
    status: str  # "ok" or "failed"
    exit_code: int
    message: str
    norm_drift: float | None
    equivalence_gap: float | None
    observed_order: float | None


@dataclass(frozen=True)
class SweepResult:
    axis: str
    rows: list[SweepRow]


def _broadcast(value: float, template):
    """Fill every leaf of a (possibly nested) list with ``value``."""
    if isinstance(template, list):
        return [_broadcast(value, item) for item in template]
    return value


def _set_key(raw: dict, axis: str, value: float) -> None:
    parts = axis.split(".")
    node = raw
    for part in parts[:-1]:
        if isinstance(node, list):
            node = node[int(part)]
        elif isinstance(node, dict) and part in node:
            node = node[part]
        else:
            raise ConfigError(axis, "not a valid config key path")
    leaf = parts[-1]
    if isinstance(node, list):
        index = int(leaf)
        node[index] = _broadcast(value, node[index])
    elif isinstance(node, dict) and leaf in node:
        current = node[leaf]
        if isinstance(current, bool) or not isinstance(current, (int, float, list)):
            raise ConfigError(axis, "does not name a numeric config entry")
        node[leaf] = _broadcast(value, current)
    else:
        raise ConfigError(axis, "not a valid config key path")


def _metrics(cfg: RunConfig) -> tuple[float, float, float]:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        eq = run_equivalence(cfg)
        _, _, order = run_convergence(cfg)
    drift = float(abs(eq.final_norm_drift).max())
    return drift, eq.final_density_diff, order


def sweep(base_config: RunConfig, axis: str, values: list[float]) -> SweepResult:
    """Rerun the verification experiment for each value of a config key.

    Scalars are broadcast into list-valued keys (every leaf gets the
    value), which makes per-species tables sweepable with one number.
    Rows are reported in input order; failures become inline rows.
    """
    rows: list[SweepRow] = []
    for value in values:
        raw = base_config.to_dict()
        try:
            _set_key(raw, axis, float(value))
            cfg = RunConfig.from_dict(raw)
            drift, gap, order = _metrics(cfg)
            rows.append(
                SweepRow(
                    value=float(value),
                    status="ok",
                    exit_code=0,
                    message="",
                    norm_drift=drift,
                    equivalence_gap=gap,
                    observed_order=order,
                )
            )
        except (ConfigError, BlowUpError, RampPeriodicityError) as err:
            code = (
                1
                if isinstance(err, ConfigError)
                else 2 if isinstance(err, BlowUpError) else 3
            )
            rows.append(
                SweepRow(
                    value=float(value),
                    status="failed",
                    exit_code=code,
                    message=str(err),
                    norm_drift=None,
                    equivalence_gap=None,
                    observed_order=None,
                )
            )
    return SweepResult(axis=axis, rows=rows)


def write_sweep_csv(result: SweepResult, path: Path) -> None:
    header = [
        result.axis,
        "norm_drift",
        "equivalence_gap",
        "observed_order",
        "status",
        "exit_code",
        "message",
    ]
    rows = []
    for row in result.rows:
        rows.append(
            [
                row.value,
                "" if row.norm_drift is None else row.norm_drift,
                "" if row.equivalence_gap is None else row.equivalence_gap,
                "" if row.observed_order is None else row.observed_order,
                row.status,
                str(row.exit_code),
                row.message,
            ]
        )
    write_csv(path, header, rows)


def run_sweep_command(cfg: RunConfig, sweep_arg: str, out_dir: Path) -> int:
    """Back-end of ``verify --sweep KEY=V1,V2,...``."""
    key, _, tail = sweep_arg.partition("=")
    if not key or not tail:
        raise ConfigError("--sweep", "expected KEY=V1,V2,...")
    try:
        values = [float(v) for v in tail.split(",") if v.strip() != ""]
    except ValueError:
        raise ConfigError("--sweep", f"non-numeric sweep values in {tail!r}") from None
    if not values:
        raise ConfigError("--sweep", "no sweep values given")
    result = sweep(cfg, key, values)
    out_dir.mkdir(parents=True, exist_ok=True)
    write_sweep_csv(result, out_dir / "sweep.csv")
    return 0
