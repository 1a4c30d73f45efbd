"""Error measures, convergence studies and oracle comparisons."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .driver import CANAL_SPEEDS, RunReport, simulate
from .junction import Branch
from .models import ConfigurationError
from .riemann import junction_riemann_solution
from .scenario import ScenarioConfig, build_network, evaluate_profile

FIELDS = ("u1", "u2")


def l1_error(numeric, reference, dx) -> float:
    """``dx * sum |numeric - reference|``."""
    numeric = np.asarray(numeric, dtype=float)
    reference = np.asarray(reference, dtype=float)
    if numeric.shape != reference.shape:
        raise ValueError(f"shape mismatch: {numeric.shape} vs {reference.shape}")
    return float(dx * np.sum(np.abs(numeric - reference)))


def orders(errors) -> list:
    """``log2(e_k / e_{k+1})`` for successive halvings (``None`` for the first entry)."""
    out = [None]
    for a, b in zip(errors[:-1], errors[1:]):
        out.append(math.log2(a / b) if a > 0 and b > 0 else float("nan"))
    return out


def constant_branches(scenario: ScenarioConfig, network) -> list:
    """Branch data of a junction Riemann problem; requires constant data and a flat reference."""
    if len(network.junctions) != 1:
        raise ConfigurationError("an exact solution needs exactly one junction")
    j = network.junctions[0]
    out = []
    for cid, incoming in j.ends:
        c = network.canal(cid)
        for arr in (c.u1, c.u2, c.ref):
            if np.ptp(arr) != 0.0:
                raise ConfigurationError(f"canal {cid}: exact solution needs constant initial data")
        out.append(Branch(cid, incoming, float(c.u1[0]), float(c.u2[0]), float(c.ref[0]), 1.0, c.width))
    return out


def exact_solution(scenario: ScenarioConfig, t: float, dx: float | None = None) -> dict:
    """Cell-centre samples of the exact junction Riemann solution at time ``t``.

    Returns ``{canal_id: (u1, u2)}``.
    """
    cfg = scenario if dx is None else scenario.with_overrides(dx=dx)
    net = build_network(cfg)
    branches = constant_branches(cfg, net)
    _, sample = junction_riemann_solution(net.model, branches, cfg.junctions[0].mode)
    out = {}
    for b in branches:
        c = net.canal(b.canal_id)
        s = c.centers()
        dist = s - c.length if b.incoming else s
        out[b.canal_id] = sample(b.canal_id, dist / t)
    return out


@dataclass
class ConvergenceRow:
    dx: float
    errors: dict  # (canal_id, field) -> error
    orders: dict
    steps: int


def convergence_study(scenario: ScenarioConfig, dx_list, T: float | None = None, cfl: float | None = None,
                      speed_mode: str = CANAL_SPEEDS) -> RunReport:
    """Run ``scenario`` for every ``dx`` and measure L1 errors against the exact solution.

    Orders are ``log2`` ratios of successive errors, so ``dx_list`` should
    halve from one entry to the next.
    """
    base = scenario.with_overrides(T=T, cfl=cfl)
    rows = []
    for dx in dx_list:
        cfg = base.with_overrides(dx=dx)
        net = build_network(cfg)
        rep = simulate(net, cfg.T, cfg.cfl, record=False, speed_mode=speed_mode, scenario=cfg.name)
        ref = exact_solution(cfg, cfg.T)
        errs = {}
        for c in net.canals:
            for k, name in enumerate(FIELDS):
                errs[(c.id, name)] = l1_error(getattr(c, name), ref[c.id][k], c.dx)
        rows.append(ConvergenceRow(dx, errs, {}, rep.steps))
    for key in rows[0].errors:
        for row, o in zip(rows, orders([r.errors[key] for r in rows])):
            row.orders[key] = o
    report = RunReport(scenario=scenario.name)
    report.convergence = rows
    return report


def self_difference(scenario: ScenarioConfig, dx: float, **run_kw) -> dict:
    """L1 difference between runs at ``dx`` and ``dx/2`` (fine solution averaged onto the coarse grid)."""
    coarse = build_network(scenario.with_overrides(dx=dx))
    fine = build_network(scenario.with_overrides(dx=dx / 2))
    for c, f in zip(coarse.canals, fine.canals):
        if f.n_cells != 2 * c.n_cells:
            raise ConfigurationError("self-difference needs the fine grid to halve every canal")
    simulate(coarse, scenario.T, scenario.cfl, record=False, **run_kw)
    simulate(fine, scenario.T, scenario.cfl, record=False, **run_kw)
    return {
        (c.id, name): l1_error(getattr(c, name), getattr(f, name).reshape(-1, 2).mean(axis=1), c.dx)
        for c, f in zip(coarse.canals, fine.canals) for name in FIELDS
    }


def network_difference(a, b) -> dict:
    """L1 difference of two networks on the same grid, per ``(canal_id, field)``."""
    return {(c.id, name): l1_error(getattr(c, name), getattr(b.canal(c.id), name), c.dx)
            for c in a.canals for name in FIELDS}


def profile_on(canal, profile):
    return evaluate_profile(profile, canal.display_x(), canal.centers())
