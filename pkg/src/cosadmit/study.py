"""Sweep orchestration: convergence and admissibility studies.

A study walks a grid of cells (L, N) or (L, p), computes each cell
independently on a thread pool, and assembles a self-contained report:
every pass/fail flag in the report can be recomputed from the stored raw
values.  Cells that fail numerically are marked failed without aborting
the sweep.

Determinism: cells are merged by grid index and every aggregate is
reduced in that fixed order, so reports are byte-identical at
parallelism 1 and value-identical at any worker count.  Wall-clock
timings are kept out of the canonical JSON for the same reason.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

from .admissibility import bound_report, brute_force_B, fit_rate
from .cos_engine import build_expansion, measure_error, prefix
from .densities import DensitySpec, parse_density
from .errors import CosAdmitError, DomainError

__all__ = [
    "StudyConfig",
    "StudyReport",
    "run_convergence_study",
    "run_admissibility_study",
    "run_study",
]

_CSV_COLUMNS = [
    "density", "L", "N", "p", "l2_error", "sup_error", "B_value",
    "k_tail_estimate", "quad_error", "main_bound", "tail_rate_bound",
    "uniform_bound", "corollary_bound", "dominance_ok", "chain_ok", "ok",
]


@dataclass(frozen=True)
class StudyConfig:
    """One study's schedule; mirrors the JSON config schema field for field."""

    density: str
    L_values: list[float]
    N_values: list[int] = field(default_factory=list)
    p_values: list[float] = field(default_factory=list)
    kind: str = "convergence"
    k_max: int = 2048
    grid_points: int = 401
    tolerances: dict[str, float] = field(default_factory=dict)
    output_path: str | None = None
    parallelism: int = 1

    @staticmethod
    def from_dict(data: dict) -> "StudyConfig":
        known = set(StudyConfig.__dataclass_fields__)
        unknown = set(data) - known
        if unknown:
            raise DomainError(f"unknown study config fields: {sorted(unknown)}")
        if "density" not in data:
            raise DomainError("study config is missing the field 'density'")
        if "L_values" not in data:
            raise DomainError("study config is missing the field 'L_values'")
        return StudyConfig(**data)

    def validated(self) -> "StudyConfig":
        f = parse_density(self.density)
        if self.kind not in ("convergence", "admissibility"):
            raise DomainError(
                f"study kind must be 'convergence' or 'admissibility', got {self.kind!r}")
        _check_grid("L_values", self.L_values, minimum=0.0)
        if self.kind == "convergence":
            _check_grid("N_values", self.N_values, minimum=0, integral=True)
        else:
            _check_grid("p_values", self.p_values, minimum=1.0)
            for p in self.p_values:
                if f.p_max is not None and p >= f.p_max:
                    raise DomainError(
                        f"p = {p:g} is outside the validity range of "
                        f"{f.label}: p must be < {f.p_max:g}")
            if self.k_max < 16:
                raise DomainError(f"k_max must be >= 16, got {self.k_max}")
        if self.grid_points < 2:
            raise DomainError(f"grid_points must be >= 2, got {self.grid_points}")
        if self.parallelism < 1:
            raise DomainError(f"parallelism must be >= 1, got {self.parallelism}")
        return self


def _check_grid(name: str, values, minimum, integral: bool = False) -> None:
    if not values:
        raise DomainError(f"{name} must be non-empty")
    for v in values:
        if integral and not isinstance(v, int):
            raise DomainError(f"{name} entries must be integers, got {v!r}")
        if not math.isfinite(v) or v <= minimum:
            raise DomainError(f"{name} entries must be > {minimum}, got {v!r}")
    if any(b <= a for a, b in zip(values, values[1:])):
        raise DomainError(f"{name} must be strictly increasing")


@dataclass
class StudyReport:
    """Config echo, per-cell raw values, aggregates, flags, timings."""

    kind: str
    config: dict
    cells: list[dict]
    aggregates: dict
    flags: list[dict]
    timings: dict

    @property
    def all_passed(self) -> bool:
        cells_ok = all(c.get("ok", False) for c in self.cells)
        flags_ok = all(fl["passed"] for fl in self.flags)
        return cells_ok and flags_ok

    def to_json(self, include_timings: bool = False) -> str:
        payload = {
            "kind": self.kind,
            "config": self.config,
            "cells": self.cells,
            "aggregates": self.aggregates,
            "flags": self.flags,
        }
        if include_timings:
            payload["timings"] = self.timings
        return json.dumps(payload, sort_keys=True, indent=1)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=_CSV_COLUMNS,
                                restval="", extrasaction="ignore")
        writer.writeheader()
        for cell in self.cells:
            row = {}
            for key in _CSV_COLUMNS:
                v = cell.get(key)
                if isinstance(v, float):
                    row[key] = f"{v:.17g}"
                elif v is not None:
                    row[key] = v
            writer.writerow(row)
        return buf.getvalue()


def _run_cells(tasks, parallelism: int):
    """Run cell thunks, preserving task order regardless of scheduling."""
    if parallelism <= 1:
        return [t() for t in tasks]
    with ThreadPoolExecutor(max_workers=parallelism) as pool:
        futures = [pool.submit(t) for t in tasks]
        return [f.result() for f in futures]


def run_convergence_study(cfg: StudyConfig) -> StudyReport:
    """Fill the (L, N) error grid and track per-L error floors.

    The floor over N at each L is the empirical stand-in for the
    large-N error limit; it must decrease as L grows.
    """
    cfg = cfg.validated()
    f = parse_density(cfg.density)
    t_start = time.perf_counter()
    n_max = max(cfg.N_values)

    expansions = dict(zip(
        cfg.L_values,
        _run_cells([lambda L=L: build_expansion(f, L, n_max)
                    for L in cfg.L_values], cfg.parallelism),
    ))

    def cell(L: float, N: int) -> dict:
        t0 = time.perf_counter()
        out = {"density": f.label, "L": L, "N": N}
        try:
            rep = measure_error(f, prefix(expansions[L], N), cfg.grid_points)
            out.update(l2_error=rep.l2_error, sup_error=rep.sup_error, ok=True)
        except CosAdmitError as exc:
            out.update(ok=False, error=str(exc))
        out["seconds"] = time.perf_counter() - t0
        return out

    grid = [(L, N) for L in cfg.L_values for N in cfg.N_values]
    cells = _run_cells([lambda L=L, N=N: cell(L, N) for L, N in grid],
                       cfg.parallelism)

    floors: dict[str, float] = {}
    for L in cfg.L_values:
        errs = [c["l2_error"] for c in cells
                if c["L"] == L and c.get("ok", False)]
        if errs:
            floors[repr(L)] = min(errs)

    flags = []
    ordered = [(L, floors[repr(L)]) for L in cfg.L_values if repr(L) in floors]
    for (L1, f1), (L2, f2) in zip(ordered, ordered[1:]):
        flags.append({
            "check": "error_floor_decreases",
            "from_L": L1, "to_L": L2,
            "floor_from": f1, "floor_to": f2,
            "passed": f2 < f1,
        })

    timings = {"total_seconds": time.perf_counter() - t_start,
               "cell_seconds": [c.pop("seconds") for c in cells]}
    return StudyReport(
        kind="convergence",
        config=asdict(cfg),
        cells=cells,
        aggregates={"error_floors": floors},
        flags=flags,
        timings=timings,
    )


def run_admissibility_study(cfg: StudyConfig) -> StudyReport:
    """Brute-force B per L, bounds per (L, p), dominance flags, rate fit."""
    cfg = cfg.validated()
    f = parse_density(cfg.density)
    t_start = time.perf_counter()

    energies = dict(zip(
        cfg.L_values,
        _run_cells([lambda L=L: brute_force_B(f, L, cfg.k_max)
                    for L in cfg.L_values], cfg.parallelism),
    ))

    def cell(L: float, p: float) -> dict:
        t0 = time.perf_counter()
        r = energies[L]
        out = {
            "density": f.label, "L": L, "p": p,
            "B_value": r.value, "k_tail_estimate": r.k_tail_estimate,
            "quad_error": r.quad_error, "blocks_used": r.blocks_used,
        }
        try:
            br = bound_report(f, L, p)
            slack = 10.0 * (r.quad_error + r.k_tail_estimate)
            out.update(
                main_bound=br.main_bound,
                tail_rate_bound=br.tail_rate_bound,
                uniform_bound=br.uniform_bound,
                corollary_bound=br.corollary_bound,
                slack=slack,
                dominance_ok=bool(r.value <= br.main_bound + slack),
                chain_ok=bool(br.main_bound <= br.tail_rate_bound
                              <= br.uniform_bound),
                ok=True,
            )
        except CosAdmitError as exc:
            out.update(ok=False, error=str(exc))
        out["seconds"] = time.perf_counter() - t0
        return out

    grid = [(L, p) for L in cfg.L_values for p in cfg.p_values]
    cells = _run_cells([lambda L=L, p=p: cell(L, p) for L, p in grid],
                       cfg.parallelism)

    flags = [{
        "check": "dominance", "L": c["L"], "p": c["p"],
        "passed": bool(c.get("dominance_ok", False) and c.get("chain_ok", False)),
    } for c in cells]

    aggregates: dict = {
        "B_values": {repr(L): energies[L].value for L in cfg.L_values},
    }
    if f.p_max is not None:
        aggregates["theoretical_decay_exponent"] = -f.p_max
    if len(cfg.L_values) >= 3 and all(energies[L].value > 0 for L in cfg.L_values):
        fit = fit_rate([(L, energies[L].value) for L in cfg.L_values])
        aggregates["rate_fit"] = {
            "slope": fit.slope, "intercept": fit.intercept,
            "r_squared": fit.r_squared,
        }
        for p in cfg.p_values:
            flags.append({
                "check": "decay_rate_at_least_p", "p": p,
                "slope": fit.slope,
                "passed": bool(fit.slope <= -p),
            })

    timings = {"total_seconds": time.perf_counter() - t_start,
               "cell_seconds": [c.pop("seconds") for c in cells]}
    return StudyReport(
        kind="admissibility",
        config=asdict(cfg),
        cells=cells,
        aggregates=aggregates,
        flags=flags,
        timings=timings,
    )


def run_study(cfg: StudyConfig) -> StudyReport:
    if cfg.kind == "admissibility":
        return run_admissibility_study(cfg)
    return run_convergence_study(cfg)


def write_report(report: StudyReport, output_path: str) -> tuple[str, str]:
    """Write the JSON report plus the flat CSV next to it."""
    base, ext = os.path.splitext(output_path)
    json_path = output_path if ext == ".json" else output_path + ".json"
    csv_path = base + ".csv" if ext == ".json" else output_path + ".csv"
    os.makedirs(os.path.dirname(os.path.abspath(json_path)), exist_ok=True)
    with open(json_path, "w", encoding="utf-8") as fh:
        fh.write(report.to_json())
    with open(csv_path, "w", encoding="utf-8") as fh:
        fh.write(report.to_csv())
    return json_path, csv_path
