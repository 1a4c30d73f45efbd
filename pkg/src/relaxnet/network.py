"""Network graph, canal discretisation and per-cell state storage."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

PRESSURE = "pressure"
ENERGY = "energy"
RELAXATION = "relaxation"
CLASSICAL = "classical"

REFLECTING = "reflecting"
TRANSMISSIVE = "transmissive"


class TopologyError(ValueError):
    """Malformed network description."""


@dataclass
class Canal:
    """One edge of the network discretised into ``n_cells`` finite volumes.

    The canal is parametrised on ``[0, length]``. An incoming canal meets its
    junction at ``x = length``, an outgoing canal at ``x = 0``.
    """

    id: int
    length: float
    n_cells: int
    width: float = 1.0
    ref: np.ndarray | None = None
    u1: np.ndarray | None = None
    u2: np.ndarray | None = None
    x_offset: float = 0.0
    boundary: tuple[str, str] = (REFLECTING, REFLECTING)

    def __post_init__(self):
        if self.n_cells < 2:
            raise TopologyError(f"canal {self.id}: need at least 2 cells")
        if not self.length > 0:
            raise TopologyError(f"canal {self.id}: length must be positive")
        if not self.width > 0:
            raise TopologyError(f"canal {self.id}: width must be positive")
        n = self.n_cells
        self.ref = np.zeros(n) if self.ref is None else np.asarray(self.ref, dtype=float).copy()
        self.u1 = np.zeros(n) if self.u1 is None else np.asarray(self.u1, dtype=float).copy()
        self.u2 = np.zeros(n) if self.u2 is None else np.asarray(self.u2, dtype=float).copy()
        for name in ("ref", "u1", "u2"):
            if getattr(self, name).shape != (n,):
                raise TopologyError(f"canal {self.id}: {name} must have {n} entries")
        if not np.all(np.isfinite(self.ref)):
            raise TopologyError(f"canal {self.id}: reference datum must be finite")

    @property
    def dx(self) -> float:
        return self.length / self.n_cells

    def centers(self) -> np.ndarray:
        return cell_centers(self)

    def display_x(self) -> np.ndarray:
        return cell_centers(self) + self.x_offset

    def copy(self) -> "Canal":
        return Canal(self.id, self.length, self.n_cells, self.width, self.ref, self.u1,
                     self.u2, self.x_offset, tuple(self.boundary))


@dataclass
class Junction:
    id: int
    incoming: list[int]
    outgoing: list[int]
    mode: str = PRESSURE
    strategy: str = RELAXATION

    def __post_init__(self):
        self.incoming = list(self.incoming)
        self.outgoing = list(self.outgoing)
        if set(self.incoming) & set(self.outgoing):
            raise TopologyError(f"junction {self.id}: a canal cannot be both incoming and outgoing")
        if len(self.incoming) + len(self.outgoing) < 2:
            raise TopologyError(f"junction {self.id}: needs at least two canal ends")
        if self.mode not in (PRESSURE, ENERGY):
            raise TopologyError(f"junction {self.id}: unknown condition mode {self.mode!r}")
        if self.strategy not in (RELAXATION, CLASSICAL):
            raise TopologyError(f"junction {self.id}: unknown strategy {self.strategy!r}")

    @property
    def ends(self) -> list[tuple[int, bool]]:
        """``(canal_id, is_incoming)`` for every attached canal end, incoming first."""
        return [(c, True) for c in self.incoming] + [(c, False) for c in self.outgoing]


@dataclass
class Network:
    canals: list[Canal]
    junctions: list[Junction]
    model: object
    t: float = 0.0
    traces: dict = field(default_factory=dict)

    def __post_init__(self):
        ids = [c.id for c in self.canals]
        if len(set(ids)) != len(ids):
            raise TopologyError("duplicate canal ids")
        self._by_id = {c.id: c for c in self.canals}
        used = set()
        for j in self.junctions:
            for cid, incoming in j.ends:
                if cid not in self._by_id:
                    raise TopologyError(f"junction {j.id} references unknown canal {cid}")
                end = (cid, "right" if incoming else "left")
                if end in used:
                    raise TopologyError(f"canal {cid} end attached to more than one junction")
                used.add(end)

    def canal(self, cid: int) -> Canal:
        return self._by_id[cid]

    def junction_side(self, canal: Canal) -> tuple[Junction | None, Junction | None]:
        """Junctions attached at the left (x=0) and right (x=L) ends of ``canal``."""
        left = right = None
        for j in self.junctions:
            if canal.id in j.outgoing:
                left = j
            if canal.id in j.incoming:
                right = j
        return left, right

    @property
    def n_cells(self) -> int:
        return sum(c.n_cells for c in self.canals)

    def copy(self) -> "Network":
        net = Network([c.copy() for c in self.canals],
                      [Junction(j.id, j.incoming, j.outgoing, j.mode, j.strategy) for j in self.junctions],
                      self.model, self.t)
        net.traces = {k: v.copy() for k, v in self.traces.items()}
        return net


def cell_centers(canal: Canal) -> np.ndarray:
    """Cell centres ``(i - 1/2) dx`` for ``i = 1..N`` in canal-local coordinates."""
    return (np.arange(canal.n_cells) + 0.5) * canal.dx


def total_mass(network: Network) -> float:
    """Width-weighted mass ``sum_canals width * dx * sum_i u1_i``."""
    return float(sum(c.width * c.dx * np.sum(c.u1) for c in network.canals))
