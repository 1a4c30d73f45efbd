"""Two-velocity relaxation (discrete BGK) scheme.

In the zero-relaxation-time limit the transport/projection steps collapse to
a conservative finite-volume update whose interface flux is the flux of the
exact kinetic Riemann solver evaluated at ``x/t = 0``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .network import REFLECTING, TRANSMISSIVE, Canal, Network
from .wellbalanced import reconstruct

SAFETY = 1.05
MIN_SPEED = 1e-10


class SolverAbort(RuntimeError):
    """Raised when the update produces a non-physical state."""

    def __init__(self, message, canal_id=None, cell=None, step=None):
        super().__init__(message)
        self.canal_id = canal_id
        self.cell = cell
        self.step = step


def maxwellians(u, f, lam):
    """Maxwellian pair for kinetic speeds ``-lam`` and ``+lam``.

    ``M1 = (lam u - F)/(2 lam)``, ``M2 = (lam u + F)/(2 lam)``; works on any
    array shape (component-wise).
    """
    if not lam > 0:
        raise ValueError("kinetic speed must be positive")
    u = np.asarray(u, dtype=float)
    f = np.asarray(f, dtype=float)
    return (lam * u - f) / (2.0 * lam), (lam * u + f) / (2.0 * lam)


def general_maxwellians(u, f, lam1, lam2):
    u = np.asarray(u, dtype=float)
    f = np.asarray(f, dtype=float)
    return (lam2 * u - f) / (lam2 - lam1), (f - lam1 * u) / (lam2 - lam1)


def kinetic_flux(u_minus, u_plus, f_minus, f_plus, lam1, lam2):
    """Interface flux of the two-velocity kinetic Riemann solver.

    ``lam1 < lam2`` are the kinetic speeds. In the usual case
    ``lam1 < 0 < lam2`` this is ``lam1 M1(u+) + lam2 M2(u-)``.
    """
    if lam1 >= 0:
        return np.asarray(f_minus, dtype=float)
    if lam2 <= 0:
        return np.asarray(f_plus, dtype=float)
    d = lam2 - lam1
    return (lam2 * np.asarray(f_minus) - lam1 * np.asarray(f_plus)
            + lam1 * lam2 * (np.asarray(u_plus) - np.asarray(u_minus))) / d


def kinetic_interface_flux(u_minus, u_plus, lam, model, ref_minus=0.0, ref_plus=None):
    """Symmetric-speed interface flux ``(F(u-)+F(u+))/2 - lam (u+ - u-)/2``.

    States are 2-sequences ``(u1, u2)`` (scalars or arrays).
    """
    if ref_plus is None:
        ref_plus = ref_minus
    fm = model.flux(u_minus[0], u_minus[1], ref_minus)
    fp = model.flux(u_plus[0], u_plus[1], ref_plus)
    f1 = 0.5 * (fm[0] + fp[0]) - 0.5 * lam * (u_plus[0] - u_minus[0])
    f2 = 0.5 * (fm[1] + fp[1]) - 0.5 * lam * (u_plus[1] - u_minus[1])
    return f1, f2


def kinetic_speed(model, canal: Canal, safety: float = SAFETY) -> float:
    """``safety * max_i |eigenvalue|`` over the canal cells."""
    s = float(np.max(model.max_speed(canal.u1, canal.u2, canal.ref)))
    if not np.isfinite(s):
        raise SolverAbort(f"non-finite wave speed in canal {canal.id}", canal_id=canal.id)
    return max(safety * s, MIN_SPEED)


def kinetic_speeds(network: Network, safety: float = SAFETY) -> dict[int, float]:
    return {c.id: kinetic_speed(network.model, c, safety) for c in network.canals}


def stable_dt(network: Network, cfl: float = 0.8, lambdas: dict | None = None) -> float:
    """``cfl * min_canals dx / lam``."""
    if not 0 < cfl <= 1:
        raise ValueError("cfl must lie in (0, 1]")
    if lambdas is None:
        lambdas = kinetic_speeds(network)
    return cfl * min(c.dx / lambdas[c.id] for c in network.canals)


@dataclass
class KineticPair:
    """Two-velocity distributions ``f1`` (speed ``-lam``) and ``f2`` (speed ``+lam``) per cell."""

    f1: np.ndarray
    f2: np.ndarray
    lam: float

    @classmethod
    def project(cls, model, u1, u2, ref, lam) -> "KineticPair":
        """Maxwellian projection of the cell states."""
        u = np.array([u1, u2], dtype=float)
        f = np.array(model.flux(u1, u2, ref), dtype=float)
        m1, m2 = maxwellians(u, f, lam)
        return cls(m1, m2, lam)

    def moments(self):
        """``(U, F) = (f1 + f2, lam (f2 - f1))``."""
        return self.f1 + self.f2, self.lam * (self.f2 - self.f1)


def reflecting_ghost(u1, u2):
    """Wall ghost: same height/section, opposite discharge."""
    return u1, -u2


def apply_reflecting_boundary(canal: Canal, side: str) -> tuple[float, float]:
    """Ghost state beyond the ``side`` (``"left"`` or ``"right"``) wall of ``canal``."""
    i = 0 if side == "left" else -1
    return reflecting_ghost(float(canal.u1[i]), float(canal.u2[i]))


def _ghost(canal: Canal, side: str, trace) -> tuple[float, float]:
    i = 0 if side == "left" else -1
    if trace is not None:
        return trace
    kind = canal.boundary[0 if side == "left" else 1]
    if kind == REFLECTING:
        return reflecting_ghost(canal.u1[i], canal.u2[i])
    if kind == TRANSMISSIVE:
        return canal.u1[i], canal.u2[i]
    raise ValueError(f"unknown boundary kind {kind!r}")


@dataclass
class FaceData:
    """Reconstructed interface quantities for the ``N + 1`` faces of a canal."""

    flux1: np.ndarray
    flux2: np.ndarray
    p_minus: np.ndarray
    p_plus: np.ndarray


def canal_faces(model, canal: Canal, lam: float, left=None, right=None) -> FaceData:
    """Fluxes on all faces of ``canal`` including the two end faces.

    ``left``/``right`` are junction trace states for that end, or ``None`` to
    use the external boundary condition. Ghost cells share the reference
    datum of their interior neighbour.
    """
    gl = _ghost(canal, "left", left)
    gr = _ghost(canal, "right", right)
    u1 = np.concatenate(([gl[0]], canal.u1, [gr[0]]))
    u2 = np.concatenate(([gl[1]], canal.u2, [gr[1]]))
    ref = np.concatenate(([canal.ref[0]], canal.ref, [canal.ref[-1]]))
    m1, m2, p1, p2, ref_face = reconstruct(model, u1[:-1], u2[:-1], ref[:-1], u1[1:], u2[1:], ref[1:])
    f1, f2 = kinetic_interface_flux((m1, m2), (p1, p2), lam, model, ref_face)
    # classical junction ends take the physical flux of the trace itself
    for end, g, i in ((left, gl, 0), (right, gr, -1)):
        if getattr(end, "direct", False):
            fd = model.flux(g[0], g[1], canal.ref[i])
            f1[i], f2[i] = fd[0], fd[1]
    return FaceData(f1, f2, model.pressure_flux(m1, ref_face), model.pressure_flux(p1, ref_face))


def advance_canal(model, canal: Canal, dt: float, lam: float, left=None, right=None):
    """New ``(u1, u2)`` after one conservative well-balanced update."""
    faces = canal_faces(model, canal, lam, left, right)
    r = dt / canal.dx
    u1 = canal.u1 - r * (faces.flux1[1:] - faces.flux1[:-1])
    # flux minus face pressure on each side: exact balance at rest
    u2 = canal.u2 - r * ((faces.flux2[1:] - faces.p_minus[1:]) - (faces.flux2[:-1] - faces.p_plus[:-1]))
    return u1, u2


def implicit_friction(model, u1, u2, dt):
    """Backward-Euler friction ``q <- q / (1 + dt k / a)`` for blood flow."""
    k = model.friction_coefficient() if hasattr(model, "friction_coefficient") else 0.0
    if k == 0.0:
        return u2
    return u2 / (1.0 + dt * k / u1)


def step(network: Network, dt: float, traces: dict, lambdas: dict, step_index: int | None = None) -> Network:
    """Advance every canal by ``dt`` in place and return the network.

    ``traces`` maps ``(canal_id, "left"|"right")`` to the junction ghost state.
    """
    model = network.model
    updates = []
    for canal in network.canals:
        u1, u2 = advance_canal(model, canal, dt, lambdas[canal.id],
                               traces.get((canal.id, "left")), traces.get((canal.id, "right")))
        u2 = implicit_friction(model, u1, u2, dt)
        bad = ~(np.isfinite(u1) & np.isfinite(u2)) | (u1 < 0)
        if np.any(bad):
            cell = int(np.argmax(bad))
            raise SolverAbort(
                f"non-physical state in canal {canal.id}, cell {cell}, step {step_index}: "
                f"u1={u1[cell]!r}, u2={u2[cell]!r}",
                canal_id=canal.id, cell=cell, step=step_index)
        updates.append((canal, u1, u2))
    for canal, u1, u2 in updates:
        canal.u1 = u1
        canal.u2 = u2
    network.t += dt
    return network
