"""Thermally-aware static placement: simulated annealing over pairwise swaps."""

from __future__ import annotations

import csv
import math
import random
from dataclasses import dataclass

from .errors import ConfigurationError
from .grid import Coord, GridSpec, Mapping, PowerProfile, identity_mapping, power_vector
from .thermal import ThermalNetwork, peak, steady_state


@dataclass(frozen=True)
class AnnealConfig:
    """Annealing schedule: geometric cooling from t_start down to t_end."""

    iterations: int = 20000
    t_start: float = 1.0
    t_end: float = 1e-3
    seed: int = 0

    def __post_init__(self) -> None:
        if self.iterations < 1:
            raise ConfigurationError(f"iterations must be >= 1, got {self.iterations}")
        if not self.t_start > self.t_end > 0:
            raise ConfigurationError("annealing temperatures need t_start > t_end > 0")


@dataclass(frozen=True)
class PlacementResult:
    """Best placement seen by the annealer and its objective value."""

    mapping: Mapping
    peak_c: float


def evaluate(mapping: Mapping, profile: PowerProfile, net: ThermalNetwork) -> float:
    """Steady-state peak temperature of a placement (the annealing objective)."""
    if net.grid != mapping.grid:
        raise ConfigurationError("thermal network was built for a different mesh")
    return peak(steady_state(net, power_vector(mapping, profile)))


def anneal(profile: PowerProfile, grid: GridSpec, net: ThermalNetwork,
           cfg: AnnealConfig) -> PlacementResult:
    """Anneal pairwise workload swaps starting from the identity placement."""
    rng = random.Random(cfg.seed)
    current = dict(identity_mapping(grid).assignment)
    ids = sorted(current)
    cur_obj = evaluate(Mapping(grid, dict(current)), profile, net)
    best = dict(current)
    best_obj = cur_obj
    if len(ids) >= 2:
        cooling = (cfg.t_end / cfg.t_start) ** (1.0 / max(cfg.iterations - 1, 1))
        temp = cfg.t_start
        for _ in range(cfg.iterations):
            a, b = rng.sample(ids, 2)
            current[a], current[b] = current[b], current[a]
            obj = evaluate(Mapping(grid, dict(current)), profile, net)
            delta = obj - cur_obj
            if delta <= 0 or rng.random() < math.exp(-delta / temp):
                cur_obj = obj
                if obj < best_obj:
                    best_obj = obj
                    best = dict(current)
            else:
                current[a], current[b] = current[b], current[a]
            temp *= cooling
    return PlacementResult(mapping=Mapping(grid, best), peak_c=best_obj)


def place(profile: PowerProfile, grid: GridSpec, net: ThermalNetwork,
          cfg: AnnealConfig) -> Mapping:
    """Placement minimizing steady-state peak temperature; never worse than identity."""
    return anneal(profile, grid, net, cfg).mapping


def write_mapping_csv(mapping: Mapping, path) -> None:
    """CSV rows: workload_id,x,y."""
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["workload_id", "x", "y"])
        for wid in sorted(mapping.assignment):
            c = mapping.assignment[wid]
            w.writerow([wid, c.x, c.y])


def read_mapping_csv(path, grid: GridSpec) -> Mapping:
    """Load a placement written by write_mapping_csv."""
    assignment = {}
    with open(path, newline="") as f:
        for row in csv.DictReader(f):
            assignment[int(row["workload_id"])] = Coord(int(row["x"]), int(row["y"]))
    return Mapping(grid, assignment)
