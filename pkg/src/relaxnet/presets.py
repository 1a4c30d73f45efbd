"""Built-in scenarios.

Display coordinates follow the plotting domains of the reference test
suite: an incoming canal ``[x_j - L, x_j]`` and outgoing canals
``[x_j, x_j + L]`` for a junction at ``x_j``. Where a final time or grid
size is not fixed by the test description a value is chosen here and noted
in the preset's ``notes``.
"""

from __future__ import annotations

from functools import partial

import numpy as np

from .network import REFLECTING, TRANSMISSIVE
from .scenario import CanalSpec, ConfigurationError, JunctionSpec, ScenarioConfig

G = 9.81


def _bottleneck(name, left, right, *, length_l, length_r, offset, T, dx, widths=(1.0, 1.0), description="",
                notes="", ref=(None, None), output_times=(), allow_dry=False, boundary=REFLECTING):
    (u1l, u2l), (u1r, u2r) = left, right
    bnd = (boundary, boundary)
    return ScenarioConfig(
        name=name, model="shallow_water", model_params={"g": G},
        canals=[CanalSpec(1, length_l, u1l, u2l, ref[0], widths[0], offset - length_l, boundary=bnd),
                CanalSpec(2, length_r, u1r, u2r, ref[1], widths[1], offset, boundary=bnd)],
        junctions=[JunctionSpec(1, [1], [2])], T=T, dx=dx, description=description, notes=notes,
        output_times=list(output_times), allow_dry=allow_dry)


def sanity_test1(boundary=TRANSMISSIVE):
    return _bottleneck(
        "Initial_Condition_Test1", (1.0, 0.1), (0.5, 0.0), length_l=4.0, length_r=4.0, offset=0.0,
        boundary=boundary, T=1.0, dx=0.0625, output_times=(0.5,),
        description="Riemann problem across a virtual junction at x = 0 on (-4, 4); convergence study data.")


def bottleneck_test1(boundary=TRANSMISSIVE):
    return _bottleneck(
        "Bottleneck_Test1", (1.0, 0.1), (0.5, 0.0), length_l=3.0, length_r=3.0, offset=1.0,
        boundary=boundary, T=0.5, dx=0.006, widths=(1.0, 0.5),
        description="Riemann data with widths 1 and 0.5 on (-2, 4), junction at x = 1.",
        notes="final time chosen: 0.5")


def bottleneck_test3():
    return _bottleneck(
        "Initial_Condition_Test3", ("1 + exp(-20*x**2)", "0.5*(1 + exp(-20*x**2))"), (1.0, 0.1),
        length_l=3.0, length_r=3.0, offset=1.0, T=0.12, dx=0.006, widths=(1.0, 0.5),
        description="Gaussian hump travelling into a bottleneck, junction at x = 1.",
        notes="widths 1 and 0.5 assumed (same bottleneck as Test1)")


def bottleneck_ft(boundary=TRANSMISSIVE):
    return _bottleneck(
        "SW_Bottleneck_FT", (0.25, 0.025), (2.5, 0.25), length_l=2.0, length_r=2.0, offset=0.0,
        boundary=boundary, T=0.15, dx=0.004,
        description="Subcritical data whose left rarefaction becomes supercritical; junction at x = 0.",
        notes="final time chosen: 0.15; widths 1")


def bottleneck_ft2(boundary=TRANSMISSIVE):
    return _bottleneck(
        "SW_Bottleneck_FT2", (0.2, 3.0), (1.8, 4.0), length_l=2.0, length_r=2.0, offset=0.0,
        boundary=boundary, T=0.15, dx=0.004,
        description="Supercritical left state, subcritical right state; junction at x = 0.",
        notes="widths 1")


def _bump(x):
    return np.where((x >= 1.2) & (x <= 1.4), 0.25 * (1.0 + np.cos(10.0 * np.pi * (x - 0.5))), 0.0)


def bottleneck_wb(delta_h: float = 0.001, T: float = 0.2):
    """Perturbed lake at rest over a cosine bump, virtual junction at x = 1 on (0, 2)."""
    def surface(x, s):
        return np.where((x >= 1.2) & (x <= 1.4), 1.0 + delta_h, 1.0)

    return _bottleneck(
        "SW_Bottleneck_WB", (lambda x, s: surface(x, s) - _bump(x), 0.0),
        (lambda x, s: surface(x, s) - _bump(x), 0.0), length_l=1.0, length_r=1.0, offset=1.0,
        T=T, dx=0.04, ref=(lambda x, s: _bump(x), lambda x, s: _bump(x)),
        description="Small free-surface perturbation of a lake at rest over a bump.",
        notes="free surface 1 (+dH on [1.2, 1.4]); height = surface - bottom on both canals; T chosen 0.2")


def lake_at_rest(T: float = 5.0):
    cfg = bottleneck_wb(0.0, T)
    cfg.name = "lake_at_rest"
    cfg.description = "Lake at rest (free surface 1) over the cosine bump, virtual junction at x = 1."
    return cfg


def discontinuous_step(T: float = 5.0, level: float = 5.0):
    return _bottleneck(
        "discontinuous_step", (level - 4.0, 0.0), (level, 0.0), length_l=1.0, length_r=1.0, offset=1.0,
        T=T, dx=0.04, ref=(4.0, 0.0),
        description="Constant free surface over a bottom step located at the junction x = 1.",
        notes=f"free surface level {level}")


def dam_break_dry(h_right: float = 1e-8, T: float = 0.5):
    """Single closed canal, dam break onto a (near-)dry bed."""
    return ScenarioConfig(
        name="dam_break_dry", model="shallow_water", model_params={"g": G},
        canals=[CanalSpec(1, 2.0, f"where(s < 1, 1.0, {h_right!r})", 0.0)],
        T=T, dx=0.01, allow_dry=h_right == 0.0,
        description="Dam break onto a near-dry bed in a closed canal.")


def dry_step(T: float = 0.5):
    """Water against a dry step: bottom 4 on the right half, height 0 there."""
    return ScenarioConfig(
        name="dry_step", model="shallow_water", model_params={"g": G},
        canals=[CanalSpec(1, 2.0, "where(s < 1, 1.0, 0.0)", "where(s < 1, 0.5, 0.0)",
                          "where(s < 1, 0.0, 4.0)")],
        T=T, dx=0.01, allow_dry=True,
        description="Moving water hitting a dry bottom step in a closed canal.")


def dam_break_network(T: float = 0.5):
    return _bottleneck(
        "dam_break_network", (1.0, 0.0), (0.5, 0.0), length_l=2.0, length_r=2.0, offset=0.0,
        T=T, dx=0.02, description="Closed flat-bottom dam break through a virtual junction.")


def _one_two(name, states, *, length, offset, T, dx, description, notes="", boundary=None, output_times=()):
    (a1, b1), (a2, b2), (a3, b3) = states
    bnd = boundary or (REFLECTING, REFLECTING)
    return ScenarioConfig(
        name=name, model="shallow_water", model_params={"g": G},
        canals=[CanalSpec(1, length, a1, b1, x_offset=offset - length, boundary=bnd),
                CanalSpec(2, length, a2, b2, x_offset=offset, boundary=bnd),
                CanalSpec(3, length, a3, b3, x_offset=offset, boundary=bnd)],
        junctions=[JunctionSpec(1, [1], [2, 3])], T=T, dx=dx, description=description, notes=notes,
        output_times=list(output_times))


def one_two_test0(boundary=TRANSMISSIVE):
    return _one_two("SW_1-2_Test0", [(0.5, 0.1), (0.5, 0.0), (1.0, 0.0)], length=3.0, offset=1.0, T=0.5,
                    boundary=(boundary, boundary),
                    dx=0.006, description="One incoming, two outgoing canals with constant data.",
                    notes="final time chosen: 0.5")


def one_two_test1():
    return _one_two("SW_1-2_Test1", [("1 + exp(-20*x**2)", "0.5*(1 + exp(-20*x**2))"), (1.0, 0.0), (0.5, 0.0)],
                    length=3.0, offset=1.0, T=0.3, dx=0.006,
                    description="Gaussian hump entering a 1-to-2 junction at x = 1 on (-2, 4).",
                    notes="final time chosen: 0.3")


def one_two_test7():
    return _one_two("SW_1-2_Test7", [(0.25, 0.5591), (0.15, 0.2795), (0.1, 0.1009)], length=0.5, offset=0.0,
                    T=0.1, dx=0.002, boundary=(TRANSMISSIVE, TRANSMISSIVE),
                    description="All-supercritical 1-to-2 junction on (-0.5, 0.5).",
                    notes="transmissive outer ends; final time chosen: 0.1")


def two_one_test1():
    bumps = "where(((s >= 0) & (s <= 0.2)) | ((s >= 0.4) & (s <= 0.8)), 1.5, 1.0)"
    return ScenarioConfig(
        name="SW_2-1_Test1", model="shallow_water", model_params={"g": G},
        canals=[CanalSpec(1, 1.0, bumps, f"0.5*{bumps}", x_offset=-1.0),
                CanalSpec(2, 1.0, bumps, f"0.5*{bumps}", x_offset=-1.0),
                CanalSpec(3, 1.0, 1.0, 0.0, x_offset=0.0)],
        junctions=[JunctionSpec(1, [1, 2], [3])], T=0.4, dx=0.005, output_times=[0.1],
        description="Two incoming canals with stepped data merging into one outgoing canal.",
        notes="step data given in canal-local coordinates; snapshots at 0.1 and 0.4")


# blood flow

R0, DR = 4e-3, 1e-3
X1, X2, X3, X4 = 1.0e-2, 3.05e-2, 4.95e-2, 7.0e-2
L_ART = 0.14


def artery_radius(x):
    """Radius profile of the man-at-eternal-rest test on ``[0, 0.14]`` (metres)."""
    x = np.asarray(x, dtype=float)
    r = np.full(x.shape, R0)
    rise = (x > X1) & (x < X2)
    r[rise] = R0 + 0.5 * DR * (np.sin((x[rise] - X1) / (X2 - X1) * np.pi - 0.5 * np.pi) + 1.0)
    r[(x >= X2) & (x <= X3)] = R0 + DR
    fall = (x > X3) & (x < X4)
    r[fall] = R0 + 0.5 * DR * (np.cos((x[fall] - X3) / (X4 - X3) * np.pi) + 1.0)
    return r


def _section(x, s, scale_x, scale_a):
    return np.pi * artery_radius(x * scale_x) ** 2 / scale_a


def man_at_rest(T: float = 5.0, units: str = "scaled", n_cells: int = 50):
    """Man at eternal rest: ``a = a0`` from the radius profile, zero discharge.

    ``units='scaled'`` measures lengths in units of the vessel length, sections
    in units of ``pi R0^2`` and uses ``beta = rho = 1``; ``units='physical'``
    keeps SI values (``beta = 1e8``, ``rho = 1060``), which needs roughly
    ``1e5`` steps per second of simulated time.
    """
    if units == "scaled":
        length, params = 1.0, {"beta": 1.0, "rho": 1.0}
        prof = partial(_section, scale_x=L_ART, scale_a=np.pi * R0 * R0)
    elif units == "physical":
        length, params = L_ART, {"beta": 1.0e8, "rho": 1060.0}
        prof = partial(_section, scale_x=1.0, scale_a=1.0)
    else:
        raise ConfigurationError(f"unknown unit system {units!r}")
    half = 0.5 * length
    return ScenarioConfig(
        name="BF_man_at_rest", model="blood_flow", model_params=params,
        canals=[CanalSpec(1, half, prof, 0.0, prof, n_cells=n_cells),
                CanalSpec(2, half, prof, 0.0, prof, x_offset=half, n_cells=n_cells)],
        junctions=[JunctionSpec(1, [1], [2])], T=T, dx=half / n_cells,
        description="Man at eternal rest with an aneurysm-like radius profile, junction at mid-length.",
        notes=f"units={units}; section = pi R^2")


def _bf_one_two(name, states):
    canals = []
    for k, (a, q) in enumerate(states, start=1):
        canals.append(CanalSpec(k, 8.5, a, q, a, x_offset=0.0 if k == 1 else 8.5))
    return ScenarioConfig(
        name=name, model="blood_flow", model_params={"beta": 1.0e8, "rho": 1060.0},
        canals=canals, junctions=[JunctionSpec(1, [1], [2, 3])], T=1.0, dx=0.085,
        description="Arterial bifurcation: one incoming, two outgoing arteries, junction at x = 8.5.",
        notes="reference section of each artery = its initial section; beta = 1e8, rho = 1060")


def bf_one_two_test1():
    return _bf_one_two("BloodFlow_1-2_Test1", [(1.8055, 0.36110), (0.94744, 0.18949), (0.94744, 0.18949)])


def bf_one_two_test2():
    return _bf_one_two("BloodFlow_1-2_Test2", [(1.8055, 0.36110), (1.13097, 0.22619), (0.63617, 0.12723)])


PRESETS = {
    "Initial_Condition_Test1": sanity_test1,
    "Bottleneck_Test1": bottleneck_test1,
    "Initial_Condition_Test3": bottleneck_test3,
    "SW_Bottleneck_FT": bottleneck_ft,
    "SW_Bottleneck_FT2": bottleneck_ft2,
    "SW_Bottleneck_WB": bottleneck_wb,
    "lake_at_rest": lake_at_rest,
    "discontinuous_step": discontinuous_step,
    "dam_break_dry": dam_break_dry,
    "dry_step": dry_step,
    "dam_break_network": dam_break_network,
    "SW_1-2_Test0": one_two_test0,
    "SW_1-2_Test1": one_two_test1,
    "SW_1-2_Test7": one_two_test7,
    "SW_2-1_Test1": two_one_test1,
    "BF_man_at_rest": man_at_rest,
    "BloodFlow_1-2_Test1": bf_one_two_test1,
    "BloodFlow_1-2_Test2": bf_one_two_test2,
}


def get_preset(name: str, **kwargs) -> ScenarioConfig:
    try:
        factory = PRESETS[name]
    except KeyError:
        raise ConfigurationError(f"unknown preset {name!r}; see `presets`") from None
    return factory(**kwargs)
