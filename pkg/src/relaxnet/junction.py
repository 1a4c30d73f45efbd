"""Junction traces: the algebraic coupling system solved at every time step.

Unknowns are the starred ghost states ``(u1*, u2*)`` of every canal end
attached to a junction, ordered incoming canals first. The equations are

* mass balance ``sum_in width q* = sum_out width q*``,
* ``n + m - 1`` chained continuity conditions (pressure level or energy head),
* one admissibility condition per canal end: the kinetic condition that keeps
  the characteristic distribution entering the junction (relaxation
  strategy) or a Lax-curve condition (classical strategy).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .models import ShallowWater, velocity
from .network import CLASSICAL, ENERGY, PRESSURE, RELAXATION, Junction, Network
from .riemann import LEFT, RIGHT, lax_curve

NEWTON_TOL = 1e-12
MAX_ITER = 50
MAX_HALVINGS = 20
FD_STEP = 1e-7


class JunctionError(RuntimeError):
    """The junction system could not be solved."""

    def __init__(self, message, junction_id=None, residual=None):
        super().__init__(message)
        self.junction_id = junction_id
        self.residual = residual


@dataclass
class Branch:
    """One canal end at a junction with its interior neighbour state."""

    canal_id: int
    incoming: bool
    u1: float
    u2: float
    ref: float
    lam: float
    width: float = 1.0


@dataclass
class TraceSolution:
    junction_id: int | None
    states: dict
    residual: float = 0.0
    iterations: int = 0
    strategy: str = RELAXATION
    history: list = field(default_factory=list)

    def as_vector(self, branches) -> np.ndarray:
        return np.array([v for b in branches for v in self.states[b.canal_id]], dtype=float)

    def copy(self):
        return TraceSolution(self.junction_id, dict(self.states), self.residual, self.iterations, self.strategy)


def phi_incoming(u1s, u2s, nb, lam):
    """Kinetic condition of an incoming canal: ``u1 + u2/lam`` is preserved."""
    return (u1s + u2s / lam) - (nb[0] + nb[1] / lam)


def phi_outgoing(u1s, u2s, nb, lam):
    """Kinetic condition of an outgoing canal: ``u1 - u2/lam`` is preserved."""
    return (u1s - u2s / lam) - (nb[0] - nb[1] / lam)


class JunctionSystem:
    """Residual function of dimension ``2 (n + m)`` for one junction."""

    def __init__(self, model, branches, mode=PRESSURE, strategy=RELAXATION, junction_id=None):
        if len(branches) < 2:
            raise ValueError("a junction needs at least two canal ends")
        if mode not in (PRESSURE, ENERGY):
            raise ValueError(f"unknown condition mode {mode!r}")
        if strategy not in (RELAXATION, CLASSICAL):
            raise ValueError(f"unknown junction strategy {strategy!r}")
        # incoming first keeps row/unknown ordering stable
        self.branches = sorted(branches, key=lambda b: not b.incoming)
        self.model = model
        self.mode = mode
        self.strategy = strategy
        self.junction_id = junction_id
        self._scales()

    @property
    def size(self) -> int:
        return 2 * len(self.branches)

    def _scales(self):
        m, bs = self.model, self.branches
        u1 = np.array([b.u1 for b in bs])
        c = np.array([float(m.wave_speed(b.u1, b.ref)) for b in bs])
        level = np.array([abs(float(self._coupling(b, b.u1, b.u2))) for b in bs])
        self.mass_scale = sum(b.width * (abs(b.u2) + b.lam * b.u1) for b in bs) or 1.0
        self.coupling_scale = float(np.max(c * c) + np.max(level)) or 1.0
        self.u1_scale = float(np.max(u1)) or 1.0
        self.u2_scale = float(np.max(np.abs([b.u2 for b in bs])) + np.max(u1 * c)) or 1.0
        self.x_scale = np.array([s for _ in bs for s in (self.u1_scale, self.u2_scale)])

    def _coupling(self, b, u1, u2):
        if self.mode == PRESSURE:
            return self.model.junction_level(u1, b.ref)
        return self.model.energy_head(u1, u2, b.ref)

    def _admissibility(self, b, u1, u2):
        if self.strategy == RELAXATION:
            if b.incoming:
                return phi_incoming(u1, u2, (b.u1, b.u2), b.lam) / self.u1_scale
            return phi_outgoing(u1, u2, (b.u1, b.u2), b.lam) / self.u1_scale
        side = LEFT if b.incoming else RIGHT
        v = lax_curve(self.model, side, b.u1, float(velocity(b.u1, b.u2)), u1, b.ref)
        return (u2 - u1 * v) / self.u2_scale

    def residual(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        u1, u2 = x[0::2], x[1::2]
        bs = self.branches
        out = np.empty(self.size)
        mass = 0.0
        for k, b in enumerate(bs):
            mass += b.width * u2[k] if b.incoming else -b.width * u2[k]
        out[0] = mass / self.mass_scale
        levels = [float(self._coupling(b, u1[k], u2[k])) for k, b in enumerate(bs)]
        for k in range(len(bs) - 1):
            out[1 + k] = (levels[k] - levels[k + 1]) / self.coupling_scale
        base = len(bs)
        for k, b in enumerate(bs):
            out[base + k] = self._admissibility(b, u1[k], u2[k])
        return out

    __call__ = residual

    def neighbour_vector(self) -> np.ndarray:
        return np.array([v for b in self.branches for v in (b.u1, b.u2)], dtype=float)

    def to_solution(self, x, residual, iterations) -> TraceSolution:
        states = {b.canal_id: (float(x[2 * k]), float(x[2 * k + 1])) for k, b in enumerate(self.branches)}
        return TraceSolution(self.junction_id, states, residual, iterations, self.strategy)


def assemble_system(model, branches, mode=PRESSURE, strategy=RELAXATION, junction_id=None) -> JunctionSystem:
    return JunctionSystem(model, branches, mode, strategy, junction_id)


def fd_jacobian(fun, x, scale, step=FD_STEP):
    """Forward-difference Jacobian with relative step ``step``."""
    f0 = fun(x)
    jac = np.empty((f0.size, x.size))
    for j in range(x.size):
        h = step * max(abs(x[j]), scale[j])
        xp = x.copy()
        xp[j] += h
        jac[:, j] = (fun(xp) - f0) / h
    return jac


def newton(system: JunctionSystem, x0, tol=NEWTON_TOL, max_iter=MAX_ITER, max_halvings=MAX_HALVINGS):
    """Damped Newton iteration; returns ``(x, residual_norm, iterations)``.

    Steps are halved until every ``u1*`` stays positive and the residual
    max-norm decreases (the decrease requirement is dropped after
    ``max_halvings`` halvings as long as positivity holds).
    """
    x = np.array(x0, dtype=float)
    if np.any(x[0::2] <= 0):
        raise JunctionError("initial guess must have positive u1", system.junction_id)
    r = system(x)
    norm = float(np.max(np.abs(r)))
    it = 0
    while norm > tol:
        if it >= max_iter:
            raise JunctionError(f"junction {system.junction_id}: Newton did not converge "
                                f"(residual {norm:.3e})", system.junction_id, norm)
        it += 1
        jac = fd_jacobian(system, x, system.x_scale)
        try:
            dx = np.linalg.solve(jac, -r)
        except np.linalg.LinAlgError as exc:
            raise JunctionError(f"junction {system.junction_id}: singular Jacobian",
                                system.junction_id, norm) from exc
        t = 1.0
        accepted = None
        for _ in range(max_halvings + 1):
            trial = x + t * dx
            if np.all(trial[0::2] > 0):
                rt = system(trial)
                nt = float(np.max(np.abs(rt)))
                if np.isfinite(nt) and nt < norm:
                    accepted = (trial, rt, nt)
                    break
                if accepted is None and np.isfinite(nt):
                    accepted = (trial, rt, nt)
            t *= 0.5
        if accepted is None:
            raise JunctionError(f"junction {system.junction_id}: damping could not keep u1* > 0",
                                system.junction_id, norm)
        x, r, norm = accepted
    return x, norm, it


def closed_form_pressure(system: JunctionSystem) -> np.ndarray:
    """Direct solution of the relaxation system in pressure mode.

    Pressure continuity makes every trace a function of one scalar (the common
    free-surface level for shallow water, ``sqrt(a*/a0)`` for blood flow);
    the kinetic conditions give the discharges linearly and mass balance then
    fixes the scalar explicitly.
    """
    bs = system.branches
    lam = np.array([b.lam for b in bs])
    w = np.array([b.width for b in bs]) * lam
    sign = np.array([1.0 if b.incoming else -1.0 for b in bs])
    # preserved kinetic invariant: u1 + u2/lam (incoming), u1 - u2/lam (outgoing)
    inv = np.array([b.u1 + s * b.u2 / b.lam for b, s in zip(bs, sign)])
    if isinstance(system.model, ShallowWater):
        ref = np.array([b.ref for b in bs])
        own = inv + ref
        level = own[0] + np.sum(w * (own - own[0])) / np.sum(w)
        u1 = inv + (level - own)
    else:
        a0 = np.array([b.ref for b in bs])
        ratio = np.sum(w * inv) / np.sum(w * a0)
        if not ratio > 0:
            raise JunctionError("junction state collapses to zero section", system.junction_id)
        u1 = a0 * ratio
    u2 = sign * lam * (inv - u1)
    if np.any(u1 <= 0):
        raise JunctionError(f"junction {system.junction_id}: trace height not positive", system.junction_id)
    x = np.empty(system.size)
    x[0::2], x[1::2] = u1, u2
    return x


def solve_junction(system: JunctionSystem, initial_guess=None, tol=NEWTON_TOL, force_newton=False,
                   **kw) -> TraceSolution:
    """Solve one junction system.

    Relaxation + pressure mode uses :func:`closed_form_pressure`; every other
    combination (energy mode, classical strategy) runs :func:`newton`.
    """
    if system.strategy == RELAXATION and system.mode == PRESSURE and not force_newton:
        x = closed_form_pressure(system)
        return system.to_solution(x, float(np.max(np.abs(system(x)))), 0)
    if initial_guess is not None:
        x0 = np.asarray(initial_guess, dtype=float)
    elif system.strategy == RELAXATION and system.mode == ENERGY:
        # the pressure-mode traces lie close to the energy-mode root
        x0 = closed_form_pressure(JunctionSystem(system.model, system.branches, PRESSURE, RELAXATION,
                                                 system.junction_id))
    else:
        x0 = system.neighbour_vector()
    x, norm, it = newton(system, x0, tol=tol, **kw)
    return system.to_solution(x, norm, it)


def junction_branches(network: Network, junction: Junction, lambdas: dict) -> list[Branch]:
    """Interior neighbour data for every end of ``junction``."""
    out = []
    for cid, incoming in junction.ends:
        c = network.canal(cid)
        i = -1 if incoming else 0
        out.append(Branch(cid, incoming, float(c.u1[i]), float(c.u2[i]), float(c.ref[i]),
                          float(lambdas[cid]), float(c.width)))
    return out


def trace_to_ghost(trace: TraceSolution, canal_id: int, incoming: bool):
    """Ghost-cell key and state for the junction end of ``canal_id``."""
    return (canal_id, "right" if incoming else "left"), trace.states[canal_id]


def solve_network_junctions(network: Network, lambdas: dict, previous: dict | None = None,
                            strategy: str | None = None, mode: str | None = None):
    """Traces of all junctions of ``network``.

    Returns ``(traces, ghosts)``: ``traces`` maps junction id to
    :class:`TraceSolution` and ``ghosts`` maps ``(canal_id, side)`` to an
    :class:`EndState` consumed by the scheme.
    """
    previous = previous or {}
    traces, ghosts = {}, {}
    for j in network.junctions:
        strat = strategy or j.strategy
        md = mode or j.mode
        branches = junction_branches(network, j, lambdas)
        system = assemble_system(network.model, branches, md, strat, j.id)
        guess = None
        if j.id in previous and set(previous[j.id].states) == {b.canal_id for b in system.branches}:
            guess = previous[j.id].as_vector(system.branches)
        if strat == CLASSICAL:
            from .riemann import classical_junction_solve
            sol = classical_junction_solve(network.model, system.branches, md, guess)
        else:
            sol = solve_junction(system, guess)
        sol.junction_id = j.id
        traces[j.id] = sol
        for cid, incoming in j.ends:
            key, state = trace_to_ghost(sol, cid, incoming)
            ghosts[key] = EndState(state[0], state[1], strat == CLASSICAL)
    return traces, ghosts


@dataclass(frozen=True)
class EndState:
    """Ghost state at a junction end.

    With ``direct`` set the physical flux of the ghost state is used on the
    end face (exact junction Riemann flux of the classical strategy);
    otherwise the kinetic interface flux between interior cell and ghost.
    """

    u1: float
    u2: float
    direct: bool = False

    def __iter__(self):
        yield self.u1
        yield self.u2

    def __getitem__(self, i):
        return (self.u1, self.u2)[i]
