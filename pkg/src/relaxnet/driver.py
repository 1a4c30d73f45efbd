"""Time loop: kinetic speeds, time step, junction traces, conservative update."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .junction import solve_network_junctions
from .models import velocity
from .network import Network, total_mass
from .relaxation import SAFETY, kinetic_speeds, stable_dt, step

log = logging.getLogger(__name__)

CANAL_SPEEDS = "canal"
GLOBAL_SPEED = "global"


@dataclass
class Snapshot:
    t: float
    canals: dict  # canal id -> dict of arrays

    def field(self, cid, name):
        return self.canals[cid][name]


@dataclass
class RunReport:
    """Snapshots, per-step monitors and (for convergence runs) an error table."""

    scenario: str = ""
    snapshots: list = field(default_factory=list)
    monitor: list = field(default_factory=list)
    convergence: list = field(default_factory=list)
    steps: int = 0
    final_time: float = 0.0

    def final(self) -> Snapshot:
        return self.snapshots[-1]

    def monitor_array(self, key) -> np.ndarray:
        return np.array([row.get(key, np.nan) for row in self.monitor])


def snapshot(network: Network) -> Snapshot:
    """Copy of the per-canal fields ``x, u1, u2, v, Fr, ref``."""
    m = network.model
    data = {}
    for c in network.canals:
        data[c.id] = {
            "x": c.display_x(),
            "u1": c.u1.copy(),
            "u2": c.u2.copy(),
            "v": velocity(c.u1, c.u2),
            "Fr": np.where(c.u1 > 0, m.froude(np.maximum(c.u1, 1e-300), c.u2, c.ref), 0.0),
            "ref": c.ref.copy(),
        }
    return Snapshot(network.t, data)


def monitor_entropy(network: Network) -> float:
    """Width-weighted discrete entropy ``sum_canals width dx sum_i eta(U_i)``."""
    total = 0.0
    for c in network.canals:
        eta, _ = network.model.entropy_pair(c.u1, c.u2, c.ref)
        total += c.width * c.dx * float(np.sum(eta))
    return total


def entropy_production_rate(network: Network) -> float:
    """Viscous dissipation ``sum width dx sigma(U) v`` (zero without friction)."""
    m = network.model
    if not hasattr(m, "entropy_production"):
        return 0.0
    return float(sum(c.width * c.dx * np.sum(m.entropy_production(c.u1, c.u2, c.ref)) for c in network.canals))


def junction_mass_defect(network: Network, ghosts: dict, lambdas: dict) -> dict:
    """Per junction, ``sum_in width F1 - sum_out width F1`` of the actual end-face mass fluxes."""
    out = {}
    for j in network.junctions:
        total = 0.0
        for cid, incoming in j.ends:
            c = network.canal(cid)
            g = ghosts[(cid, "right" if incoming else "left")]
            i = -1 if incoming else 0
            if getattr(g, "direct", False):
                f1 = g[1]
            elif incoming:
                f1 = 0.5 * (c.u2[i] + g[1]) - 0.5 * lambdas[cid] * (g[0] - c.u1[i])
            else:
                f1 = 0.5 * (g[1] + c.u2[i]) - 0.5 * lambdas[cid] * (c.u1[i] - g[0])
            total += c.width * f1 if incoming else -c.width * f1
        out[j.id] = float(total)
    return out


def speeds(network: Network, mode: str = CANAL_SPEEDS, safety: float | None = None) -> dict:
    """Kinetic speed per canal; ``mode='global'`` uses the network maximum everywhere."""
    lam = kinetic_speeds(network, SAFETY if safety is None else safety)
    if mode == GLOBAL_SPEED:
        top = max(lam.values())
        return {k: top for k in lam}
    if mode != CANAL_SPEEDS:
        raise ValueError(f"unknown speed mode {mode!r}")
    return lam


def simulate(network: Network, T: float, cfl: float = 0.8, output_times=(), speed_mode: str = CANAL_SPEEDS,
             max_steps: int | None = None, record: bool = True, callback=None, scenario: str = "") -> RunReport:
    """Advance ``network`` in place to time ``T``.

    Parameters
    ----------
    output_times : sequence of float
        Snapshot times. The step size is clamped so these (and ``T``) are hit
        exactly; a snapshot at the initial time is always taken.
    max_steps : int, optional
        Stop after this many steps even if ``T`` is not reached.
    record : bool
        Keep per-step monitor rows (mass, entropy, junction residuals).
    callback : callable, optional
        ``callback(network, step_index, dt, traces)`` after every step.
    """
    report = RunReport(scenario=scenario)
    times = sorted({float(t) for t in output_times if 0 < t < T} | {float(T)})
    report.snapshots.append(snapshot(network))
    traces = dict(network.traces)
    n = 0
    produced = 0.0
    if record:
        report.monitor.append(_monitor_row(network, 0, 0.0, {}, {}, produced))
    k = 0
    while k < len(times) and (max_steps is None or n < max_steps):
        target = times[k]
        lam = speeds(network, speed_mode)
        dt = stable_dt(network, cfl, lam)
        last = network.t + dt >= target * (1 - 1e-14)
        if last:
            dt = target - network.t
        traces, ghosts = solve_network_junctions(network, lam, traces)
        defect = junction_mass_defect(network, ghosts, lam) if record else {}
        rate = entropy_production_rate(network) if record else 0.0
        step(network, dt, ghosts, lam, n)
        n += 1
        produced += rate * dt
        if last:
            network.t = target
        if record:
            report.monitor.append(_monitor_row(network, n, dt, traces, defect, produced))
        if callback is not None:
            callback(network, n, dt, traces)
        if last:
            report.snapshots.append(snapshot(network))
            k += 1
    network.traces = traces
    report.steps = n
    report.final_time = network.t
    log.info("%s: %d steps to t=%.6g", scenario or "run", n, network.t)
    return report


def _monitor_row(network, n, dt, traces, defect, produced):
    row = {"step": n, "t": network.t, "dt": dt, "mass": total_mass(network)}
    eta = monitor_entropy(network)
    row["entropy"] = eta
    row["entropy_adjusted"] = eta + produced
    for jid, tr in traces.items():
        row[f"j{jid}_residual"] = tr.residual
        row[f"j{jid}_iterations"] = tr.iterations
    for jid, d in defect.items():
        row[f"j{jid}_mass_defect"] = d
    return row
