"""Compact RC thermal model of the die.

One node per PE block plus one lumped heat-sink node at index n. With
x = T - T_ambient the heat balance is

    steady state:   G x = P
    transient:      C dx/dt = P - G x        (backward Euler steps)

G is the mesh Laplacian of the lateral block-to-block conductances plus
each node's coupling to the sink or to ambient on the diagonal, so every
row sums to the node's ambient conductance. For square blocks the lateral
conductance reduces to k_si * die_thickness.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import lu_factor, lu_solve

from .errors import ConfigurationError, ModelError
from .grid import Coord, GridSpec


@dataclass(frozen=True)
class ThermalParams:
    """Material and package constants (SI units, temperatures in deg C)."""

    k_si: float = 150.0            # W/(m K), lateral silicon conductivity
    c_v: float = 1.75e6            # J/(m^3 K), volumetric heat capacity
    die_thickness: float = 0.5e-3  # m
    r_vertical: float = 2.0        # K/W, per-block path to the sink
    r_sink: float = 0.5            # K/W, sink to ambient
    c_sink: float = 10.0           # J/K
    ambient: float = 40.0          # deg C

    def __post_init__(self) -> None:
        for name in ("k_si", "c_v", "die_thickness", "r_vertical", "r_sink", "c_sink"):
            if getattr(self, name) <= 0:
                raise ConfigurationError(f"{name} must be positive, got {getattr(self, name)}")
        if not math.isfinite(self.ambient):
            raise ConfigurationError("ambient temperature must be finite")


@dataclass
class ThermalNetwork:
    """RC network over n block nodes plus the sink node at index n."""

    grid: GridSpec
    conductance: np.ndarray       # (n+1, n+1), W/K
    capacitance: np.ndarray       # (n+1,), J/K
    ambient_coupling: np.ndarray  # (n+1,), W/K
    ambient: float                # deg C

    @property
    def n_blocks(self) -> int:
        return self.grid.n_cells

    @property
    def n_nodes(self) -> int:
        return self.grid.n_cells + 1


@dataclass(frozen=True)
class ThermalState:
    """Node temperatures (deg C, blocks then sink) at one instant."""

    temps: np.ndarray
    time: float = 0.0


def build_network(grid: GridSpec, params: ThermalParams) -> ThermalNetwork:
    """4-neighbor lateral links, one vertical link per block, lumped sink."""
    n = grid.n_cells
    sink = n
    g = np.zeros((n + 1, n + 1))
    g_lat = params.k_si * params.die_thickness
    for c in grid.cells():
        i = grid.index(c)
        for nb in (Coord(c.x + 1, c.y), Coord(c.x, c.y + 1)):
            if grid.in_bounds(nb):
                j = grid.index(nb)
                g[i, j] -= g_lat
                g[j, i] -= g_lat
                g[i, i] += g_lat
                g[j, j] += g_lat
    g_vert = 1.0 / params.r_vertical
    for i in range(n):
        g[i, sink] -= g_vert
        g[sink, i] -= g_vert
        g[i, i] += g_vert
        g[sink, sink] += g_vert
    ambient_coupling = np.zeros(n + 1)
    ambient_coupling[sink] = 1.0 / params.r_sink
    g[sink, sink] += ambient_coupling[sink]

    cap = np.empty(n + 1)
    cap[:n] = params.c_v * (grid.cell_area * 1e-6) * params.die_thickness
    cap[sink] = params.c_sink
    for arr in (g, cap, ambient_coupling):
        arr.setflags(write=False)
    return ThermalNetwork(grid=grid, conductance=g, capacitance=cap,
                          ambient_coupling=ambient_coupling, ambient=params.ambient)


def _extended_power(net: ThermalNetwork, power) -> np.ndarray:
    power = np.asarray(power, dtype=float)
    if power.shape != (net.n_blocks,):
        raise ValueError(f"power vector must have shape ({net.n_blocks},), got {power.shape}")
    p = np.zeros(net.n_nodes)
    p[:net.n_blocks] = power
    return p


def steady_state(net: ThermalNetwork, power) -> ThermalState:
    """Equilibrium temperatures for a constant per-block power vector."""
    p = _extended_power(net, power)
    if not np.any(net.ambient_coupling > 0):
        raise ModelError("network has no coupling to ambient; steady state undefined")
    try:
        x = np.linalg.solve(net.conductance, p)
    except np.linalg.LinAlgError as exc:
        raise ModelError(f"thermal system is singular: {exc}") from None
    return ThermalState(temps=x + net.ambient, time=0.0)


def _be_step(net: ThermalNetwork, temps: np.ndarray, power, dt: float) -> np.ndarray:
    p = _extended_power(net, power)
    c_over_dt = net.capacitance / dt
    a = net.conductance + np.diag(c_over_dt)
    b = p + c_over_dt * (temps - net.ambient)
    return np.linalg.solve(a, b) + net.ambient


def step_transient(net: ThermalNetwork, state: ThermalState, power,
                   dt: float) -> ThermalState:
    """One backward-Euler step; unconditionally stable for any dt > 0."""
    if dt <= 0:
        raise ValueError(f"dt must be positive, got {dt}")
    return ThermalState(temps=_be_step(net, state.temps, power, dt),
                        time=state.time + dt)


class TransientSolver:
    """Backward-Euler stepper with the system matrix prefactored for one dt.

    Owns mutable LAPACK workspaces: give each concurrent run its own
    instance instead of sharing one.
    """

    def __init__(self, net: ThermalNetwork, dt: float):
        if dt <= 0:
            raise ValueError(f"dt must be positive, got {dt}")
        self.net = net
        self.dt = dt
        self._c_over_dt = net.capacitance / dt
        self._lu = lu_factor(net.conductance + np.diag(self._c_over_dt))

    def step(self, temps: np.ndarray, power, dt: float | None = None) -> np.ndarray:
        """Advance node temperatures by dt (defaults to the prefactored one)."""
        if dt is None or dt == self.dt:
            b = _extended_power(self.net, power) + self._c_over_dt * (temps - self.net.ambient)
            return lu_solve(self._lu, b, check_finite=False) + self.net.ambient
        return _be_step(self.net, temps, power, dt)


def peak(state: ThermalState) -> float:
    """Hottest block temperature; the sink node is excluded."""
    return float(np.max(state.temps[:-1]))


def spatial_spread(state: ThermalState) -> float:
    """Hottest minus coolest block temperature."""
    blocks = state.temps[:-1]
    return float(np.max(blocks) - np.min(blocks))


def write_trace_csv(times, temps, path) -> None:
    """Emit a trace as CSV with columns time_s, t_block_0.., t_sink."""
    temps = np.asarray(temps)
    n_blocks = temps.shape[1] - 1
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["time_s"] + [f"t_block_{i}" for i in range(n_blocks)] + ["t_sink"])
        for t, row in zip(times, temps):
            w.writerow([f"{t:.9f}"] + [f"{v:.6f}" for v in row])
