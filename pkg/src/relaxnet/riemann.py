"""Exact Riemann solutions on a flat bottom, used as reference solutions.

Contains the Lax wave curves of both models, the two-wave Riemann solver,
self-similar sampling, and the classical junction strategy that couples the
Lax curves of every attached canal with the junction conditions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .models import BloodFlow, ShallowWater, velocity

LEFT = "left"
RIGHT = "right"


class VacuumError(ValueError):
    """The Riemann data create a dry (vacuum) intermediate state."""


class RegimeError(ValueError):
    """Data outside the subcritical regime handled by the classical strategy."""


def _sign(side):
    if side == LEFT:
        return -1.0
    if side == RIGHT:
        return 1.0
    raise ValueError(f"side must be 'left' or 'right', got {side!r}")


def lax_curve_sw(side, h0, v0, h, g=9.81):
    """Velocity of the state of height ``h`` joined to ``(h0, v0)`` by an admissible wave.

    ``side='left'`` gives the 1-wave curve through a left state (strictly
    decreasing in ``h``), ``side='right'`` the 2-wave curve through a right
    state (strictly increasing).
    """
    s = _sign(side)
    h = np.asarray(h, dtype=float)
    if np.any(h <= 0) or h0 <= 0:
        raise ValueError("Lax curves need positive heights")
    rare = v0 + s * 2.0 * (np.sqrt(g * h) - np.sqrt(g * h0))
    shock = v0 + s * (h - h0) * np.sqrt(g * (h + h0) / (2.0 * h * h0))
    out = np.where(h < h0, rare, shock)
    return out if out.ndim else float(out)


def lax_curve_sw_derivative(side, h0, v0, h, g=9.81):
    s = _sign(side)
    h = np.asarray(h, dtype=float)
    root = np.sqrt(g * (h + h0) / (2.0 * h * h0))
    rare = s * np.sqrt(g / h)
    shock = s * (root - (h - h0) * g / (4.0 * root * h * h))
    out = np.where(h < h0, rare, shock)
    return out if out.ndim else float(out)


def _bf_pi(a, beta, a0):
    return beta / 3.0 * (a * np.sqrt(a) / np.sqrt(a0) - a0)


def lax_curve_bf(side, a_base, v0, a, beta, rho, a0):
    """Blood-flow analogue of :func:`lax_curve_sw` (``alpha = 1``, no friction).

    The shock branch uses the Rankine-Hugoniot relation
    ``(v - v0)^2 = (a - a_base)(pi(a) - pi(a_base)) / (rho a a_base)``.
    """
    s = _sign(side)
    a = np.asarray(a, dtype=float)
    if np.any(a <= 0) or a_base <= 0:
        raise ValueError("Lax curves need positive sections")
    k = np.sqrt(beta / (2.0 * rho))
    rare = v0 + s * 4.0 * k * ((a / a0) ** 0.25 - (a_base / a0) ** 0.25)
    jump = (a - a_base) * (_bf_pi(a, beta, a0) - _bf_pi(a_base, beta, a0)) / (rho * a * a_base)
    shock = v0 + s * np.sqrt(np.maximum(jump, 0.0))
    out = np.where(a <= a_base, rare, shock)
    return out if out.ndim else float(out)


def lax_curve_bf_derivative(side, a_base, v0, a, beta, rho, a0):
    s = _sign(side)
    a = np.asarray(a, dtype=float)
    k = np.sqrt(beta / (2.0 * rho))
    rare = s * k * a0 ** -0.25 * a ** -0.75
    dpi = _bf_pi(a, beta, a0) - _bf_pi(a_base, beta, a0)
    jump = (a - a_base) * dpi / (rho * a * a_base)
    djump = ((dpi + (a - a_base) * 0.5 * beta * np.sqrt(a / a0)) / (rho * a * a_base)
             - jump / a)
    safe = np.where(jump > 0, jump, 1.0)
    shock = s * djump / (2.0 * np.sqrt(safe))
    out = np.where(a <= a_base, rare, shock)
    return out if out.ndim else float(out)


def lax_curve(model, side, base_u1, base_v, u1, ref=None):
    """Dispatch to the wave curve of ``model``; ``ref`` is ``a0`` for blood flow."""
    if isinstance(model, ShallowWater):
        return lax_curve_sw(side, base_u1, base_v, u1, model.g)
    _check_bf(model)
    return lax_curve_bf(side, base_u1, base_v, u1, model.beta, model.rho, ref)


def lax_curve_derivative(model, side, base_u1, base_v, u1, ref=None):
    if isinstance(model, ShallowWater):
        return lax_curve_sw_derivative(side, base_u1, base_v, u1, model.g)
    return lax_curve_bf_derivative(side, base_u1, base_v, u1, model.beta, model.rho, ref)


def _check_bf(model):
    if isinstance(model, BloodFlow) and (model.alpha != 1 or model.nu != 0):
        raise ValueError("exact blood-flow Riemann solutions need alpha = 1 and nu = 0")


def transitional_curves(h, g=9.81):
    """Critical velocities ``(C+, C-) = (sqrt(g h), -sqrt(g h))``."""
    c = np.sqrt(g * np.asarray(h, dtype=float))
    return c, -c


def _vacuum_limit(model, side, u1, v, ref):
    """Limit of the wave curve as ``u1 -> 0``."""
    c = float(model.wave_speed(u1, ref))
    factor = 2.0 if isinstance(model, ShallowWater) else 4.0
    return v - _sign(side) * factor * c


@dataclass
class RiemannSolution:
    """Two-wave solution of a flat-bottom Riemann problem."""

    model: object
    left: tuple[float, float]
    right: tuple[float, float]
    u1_star: float
    v_star: float
    left_wave: str
    right_wave: str
    ref: float | None = None
    iterations: int = 0

    @property
    def star(self) -> tuple[float, float]:
        return self.u1_star, self.u1_star * self.v_star

    def wave_speeds(self) -> dict:
        """Shock speeds or fan edges of both waves."""
        m, ref = self.model, self.ref
        (u1l, q_l), (u1r, q_r) = self.left, self.right
        vl, vr = float(velocity(u1l, q_l)), float(velocity(u1r, q_r))
        cs = float(m.wave_speed(self.u1_star, ref))
        out = {}
        if self.left_wave == "rarefaction":
            out["left"] = (vl - float(m.wave_speed(u1l, ref)), self.v_star - cs)
        else:
            s = (self.u1_star * self.v_star - q_l) / (self.u1_star - u1l) if self.u1_star != u1l else vl - cs
            out["left"] = (s, s)
        if self.right_wave == "rarefaction":
            out["right"] = (self.v_star + cs, vr + float(m.wave_speed(u1r, ref)))
        else:
            s = (self.u1_star * self.v_star - q_r) / (self.u1_star - u1r) if self.u1_star != u1r else vr + cs
            out["right"] = (s, s)
        return out


def solve_riemann(model, left, right, ref=None, tol=1e-13, max_iter=200) -> RiemannSolution:
    """Exact intermediate state of the Riemann problem ``left | right``.

    The intermediate height solves ``Phi_l(h) = Phi_r(h)``; the difference is
    strictly decreasing, so a bracket ``[1e-14, 10 max(h)]`` is bisected down
    to width ``1e-3`` and then polished with safeguarded Newton iterations.
    """
    _check_bf(model)
    (u1l, ql), (u1r, qr) = left, right
    if u1l <= 0 or u1r <= 0:
        raise VacuumError("dry initial states are not supported")
    vl, vr = float(velocity(u1l, ql)), float(velocity(u1r, qr))
    if _vacuum_limit(model, LEFT, u1l, vl, ref) <= _vacuum_limit(model, RIGHT, u1r, vr, ref):
        raise VacuumError("Riemann data generate a vacuum")

    def diff(h):
        return (lax_curve(model, LEFT, u1l, vl, h, ref) - lax_curve(model, RIGHT, u1r, vr, h, ref))

    def ddiff(h):
        return (lax_curve_derivative(model, LEFT, u1l, vl, h, ref)
                - lax_curve_derivative(model, RIGHT, u1r, vr, h, ref))

    lo, hi = 1e-14, 10.0 * max(u1l, u1r)
    while diff(hi) > 0:
        lo, hi = hi, 2.0 * hi
    it = 0
    while hi - lo > 1e-3 and it < max_iter:
        mid = 0.5 * (lo + hi)
        if diff(mid) > 0:
            lo = mid
        else:
            hi = mid
        it += 1
    h = 0.5 * (lo + hi)
    while it < max_iter:
        it += 1
        d = diff(h)
        if d == 0:
            break
        if d > 0:
            lo = h
        else:
            hi = h
        step = d / ddiff(h)
        new = h - step
        if not lo < new < hi:
            new = 0.5 * (lo + hi)
        if abs(new - h) <= tol * max(1.0, h):
            h = new
            break
        h = new
    u1s = h
    vs = float(lax_curve(model, LEFT, u1l, vl, u1s, ref))
    return RiemannSolution(model, (float(u1l), float(ql)), (float(u1r), float(qr)), u1s, vs,
                           "rarefaction" if u1s <= u1l else "shock",
                           "rarefaction" if u1s <= u1r else "shock", ref, it)


def _fan(model, side, u1b, vb, xi, ref):
    """State inside a rarefaction fan at similarity coordinate ``xi``."""
    cb = model.wave_speed(u1b, ref)
    if isinstance(model, ShallowWater):
        if side == LEFT:
            c = (vb + 2.0 * cb - xi) / 3.0
            v = xi + c
        else:
            c = (xi - vb + 2.0 * cb) / 3.0
            v = xi - c
        u1 = c * c / model.g
    else:
        k = np.sqrt(model.beta / (2.0 * model.rho))
        if side == LEFT:
            c = (vb + 4.0 * cb - xi) / 5.0
            v = xi + c
        else:
            c = (xi - vb + 4.0 * cb) / 5.0
            v = xi - c
        u1 = ref * (c / k) ** 4
    return u1, u1 * v


def sample_solution(sol: RiemannSolution, xi):
    """Self-similar state ``(u1, u2)`` at ``xi = x / t`` (array or scalar)."""
    xi = np.asarray(xi, dtype=float)
    m, ref = sol.model, sol.ref
    (u1l, ql), (u1r, qr) = sol.left, sol.right
    vl, vr = float(velocity(u1l, ql)), float(velocity(u1r, qr))
    u1 = np.full(xi.shape, sol.u1_star)
    u2 = np.full(xi.shape, sol.u1_star * sol.v_star)
    speeds = sol.wave_speeds()
    l_head, l_tail = speeds["left"]
    r_tail, r_head = speeds["right"]

    mask = xi < l_head
    u1[mask], u2[mask] = u1l, ql
    if sol.left_wave == "rarefaction":
        fan = (xi >= l_head) & (xi < l_tail)
        if np.any(fan):
            u1[fan], u2[fan] = _fan(m, LEFT, u1l, vl, xi[fan], ref)
    mask = xi > r_head
    u1[mask], u2[mask] = u1r, qr
    if sol.right_wave == "rarefaction":
        fan = (xi > r_tail) & (xi <= r_head)
        if np.any(fan):
            u1[fan], u2[fan] = _fan(m, RIGHT, u1r, vr, xi[fan], ref)
    if u1.ndim == 0:
        return float(u1), float(u2)
    return u1, u2


def classical_junction_solve(model, branches, mode="pressure", initial_guess=None, **newton_kw):
    """Junction traces from Lax-curve admissibility instead of kinetic conditions.

    Every incoming trace lies on the 1-wave curve of its neighbour state, every
    outgoing trace on the 2-wave curve; mass balance and pressure (or energy)
    continuity close the system. Only subcritical neighbour states are
    accepted.
    """
    from .junction import CLASSICAL, assemble_system, solve_junction

    for b in branches:
        if np.any(model.froude(b.u1, b.u2, b.ref) >= 1.0):
            raise RegimeError(f"canal {b.canal_id}: supercritical state at the junction")
    system = assemble_system(model, branches, mode, CLASSICAL)
    return solve_junction(system, initial_guess, **newton_kw)


def junction_riemann_solution(model, branches, mode="pressure"):
    """Exact self-similar solution of a junction Riemann problem with constant data.

    ``branches`` carry the constant initial state of every canal (``lam`` is
    ignored). Returns the trace solution and a function
    ``sample(canal_id, xi)`` where ``xi`` is the signed distance from the
    junction divided by time, measured along the canal (negative inside
    incoming canals, positive inside outgoing canals).
    """
    trace = classical_junction_solve(model, branches, mode)
    by_id = {b.canal_id: b for b in branches}

    def sample(canal_id, xi):
        b = by_id[canal_id]
        star = trace.states[canal_id]
        if b.incoming:
            sol = solve_riemann(model, (b.u1, b.u2), star, b.ref)
        else:
            sol = solve_riemann(model, star, (b.u1, b.u2), b.ref)
        return sample_solution(sol, xi)

    return trace, sample
