"""Attainable-coverage polytopes and the maximin coverage oracle.

Every coverage set exposes its polytope as a :class:`PolytopeBlock`: linear
constraints over the variables ``[v | aux]`` where ``v`` is the coverage
vector and ``aux`` are backend-specific (schedule weights or edge flows).
The maximin, membership and deviation LPs are built on top of that block, so
they work unchanged for every backend.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

import numpy as np
import scipy.sparse as sp
from scipy.optimize import linprog

from .exceptions import GameValidationError, OracleError, PathCapExceeded

SSAS = "ssas"
CLEARANCE = "clearance"
MODES = (SSAS, CLEARANCE)

DEFAULT_PATH_CAP = 10**5

_HIGHS_OPTIONS = {
    "primal_feasibility_tolerance": 1e-10,
    "dual_feasibility_tolerance": 1e-10,
}


@dataclass(frozen=True)
class PolytopeBlock:
    num_targets: int
    num_aux: int
    A_ub: sp.csr_matrix
    b_ub: np.ndarray
    A_eq: sp.csr_matrix
    b_eq: np.ndarray
    aux_bounds: tuple

    @property
    def width(self):
        return self.num_targets + self.num_aux


LP_INFEASIBLE = 2


def solve_lp(c, A_ub, b_ub, A_eq, b_eq, bounds, allow_infeasible=False):
    """Thin wrapper over HiGHS that raises :class:`OracleError` on failure.

    With ``allow_infeasible`` an infeasible problem returns ``None`` instead.
    """
    res = linprog(
        c,
        A_ub=A_ub if A_ub.shape[0] else None,
        b_ub=b_ub if A_ub.shape[0] else None,
        A_eq=A_eq if A_eq.shape[0] else None,
        b_eq=b_eq if A_eq.shape[0] else None,
        bounds=bounds,
        method="highs",
        options=_HIGHS_OPTIONS,
    )
    if allow_infeasible and res.status == LP_INFEASIBLE:
        return None
    if res.status != 0:
        raise OracleError(f"LP solver failed: {res.message}", status=res.status)
    return res


def pad(A, cols):
    """Append ``cols`` zero columns to a sparse matrix."""
    if cols == 0:
        return A
    return sp.hstack([A, sp.csr_matrix((A.shape[0], cols))], format="csr")


class CoverageSet:
    """Base class; subclasses define the polytope through :meth:`block`."""

    #: True when any coverage below an attainable one is attainable too.
    downward_closed = True

    @property
    def num_targets(self) -> int:
        raise NotImplementedError

    def block(self) -> PolytopeBlock:
        raise NotImplementedError

    def to_dict(self) -> dict:
        raise NotImplementedError


class ExplicitSchedules(CoverageSet):
    """Mixtures of a finite list of schedules.

    In ``ssas`` mode any coverage dominated by a mixture is attainable; in
    ``clearance`` mode only the exact mixtures are.
    """

    def __init__(self, schedules, mode=SSAS):
        arr = np.array(schedules, dtype=float)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise GameValidationError("schedules must be a non-empty list of equal-length vectors")
        if not np.all(np.isfinite(arr)) or np.any(arr < 0):
            raise GameValidationError("schedule entries must be finite and non-negative")
        if mode not in MODES:
            raise GameValidationError(f"unknown mode {mode!r}; expected one of {MODES}")
        arr.setflags(write=False)
        self.schedules = arr
        self.mode = mode

    def __repr__(self):
        return f"ExplicitSchedules({self.schedules.shape[0]} schedules x {self.num_targets} targets, mode={self.mode!r})"

    @property
    def downward_closed(self):
        return self.mode == SSAS

    @property
    def num_targets(self):
        return self.schedules.shape[1]

    @property
    def num_schedules(self):
        return self.schedules.shape[0]

    @cached_property
    def _block(self):
        T, S = self.num_targets, self.num_schedules
        # v(t) - sum_z x_z s_z(t)  (<= 0 under SSAS, == 0 under clearance)
        link = sp.hstack([sp.identity(T, format="csr"), sp.csr_matrix(-self.schedules.T)], format="csr")
        simplex = sp.csr_matrix(np.concatenate([np.zeros(T), np.ones(S)])[None, :])
        if self.mode == SSAS:
            A_ub, b_ub = link, np.zeros(T)
            A_eq, b_eq = simplex, np.ones(1)
        else:
            A_ub, b_ub = sp.csr_matrix((0, T + S)), np.zeros(0)
            A_eq = sp.vstack([link, simplex], format="csr")
            b_eq = np.concatenate([np.zeros(T), np.ones(1)])
        return PolytopeBlock(T, S, A_ub, b_ub, A_eq, b_eq, ((0, None),) * S)

    def block(self):
        return self._block

    def to_dict(self):
        return {"type": "schedules", "mode": self.mode, "schedules": self.schedules.tolist()}


@dataclass(frozen=True)
class LayeredNetwork:
    """Source, ``layers x width`` grid of targets, sink.

    Patrols move one layer forward per step and change level by at most one.
    Intermediate vertex ``(layer, level)`` is target ``layer * width + level``.
    """

    layers: int
    width: int

    def __post_init__(self):
        if self.layers < 1 or self.width < 1:
            raise GameValidationError("layered networks need at least one layer of width one")

    @property
    def num_targets(self):
        return self.layers * self.width

    def target_of(self, layer: int, level: int) -> int:
        return layer * self.width + level

    @cached_property
    def edges(self) -> tuple[tuple, ...]:
        """Edges as ``(tail, head)`` with ``"source"``, ``"sink"`` or a target index."""
        L, w = self.layers, self.width
        out = [("source", self.target_of(0, b)) for b in range(w)]
        for layer in range(L - 1):
            for a in range(w):
                for b in range(max(0, a - 1), min(w, a + 2)):
                    out.append((self.target_of(layer, a), self.target_of(layer + 1, b)))
        out += [(self.target_of(L - 1, a), "sink") for a in range(w)]
        return tuple(out)

    def num_paths(self) -> int:
        counts = [1] * self.width
        for _ in range(self.layers - 1):
            counts = [sum(counts[max(0, b - 1):b + 2]) for b in range(self.width)]
        return sum(counts)


def enumerate_paths(network: LayeredNetwork, cap: int = DEFAULT_PATH_CAP) -> np.ndarray:
    """Indicator coverage vector of every source-sink path, one row per path."""
    count = network.num_paths()
    if count > cap:
        raise PathCapExceeded(count, cap)
    succ: dict = {}
    for tail, head in network.edges:
        succ.setdefault(tail, []).append(head)
    rows = []
    stack = [("source", ())]
    while stack:
        node, visited = stack.pop()
        if node == "sink":
            row = np.zeros(network.num_targets)
            row[list(visited)] = 1.0
            rows.append(row)
            continue
        for nxt in reversed(succ[node]):
            stack.append((nxt, visited if nxt == "sink" else visited + (nxt,)))
    return np.array(rows)


class FlowPolytope(CoverageSet):
    """Throughputs of unit source-sink flows on a layered network, closed downward."""

    def __init__(self, network: LayeredNetwork):
        self.network = network

    def __repr__(self):
        return f"FlowPolytope({self.network!r})"

    @property
    def num_targets(self):
        return self.network.num_targets

    @cached_property
    def _block(self):
        T = self.num_targets
        edges = self.network.edges
        E = len(edges)
        inflow = sp.lil_matrix((T, E))
        outflow = sp.lil_matrix((T, E))
        source = np.zeros(E)
        for e, (tail, head) in enumerate(edges):
            if tail == "source":
                source[e] = 1.0
            else:
                outflow[tail, e] = 1.0
            if head != "sink":
                inflow[head, e] = 1.0
        inflow = inflow.tocsr()
        # v(t) <= flow through t
        A_ub = sp.hstack([sp.identity(T, format="csr"), -inflow], format="csr")
        conservation = sp.hstack([sp.csr_matrix((T, T)), inflow - outflow.tocsr()], format="csr")
        unit = sp.csr_matrix(np.concatenate([np.zeros(T), source])[None, :])
        A_eq = sp.vstack([conservation, unit], format="csr")
        b_eq = np.concatenate([np.zeros(T), np.ones(1)])
        return PolytopeBlock(T, E, A_ub, np.zeros(T), A_eq, b_eq, ((0, None),) * E)

    def block(self):
        return self._block

    def to_dict(self):
        return {"type": "layered_network", "layers": self.network.layers, "width": self.network.width}


def coverage_set_from_dict(data: dict) -> CoverageSet:
    kind = data.get("type")
    if kind == "schedules":
        return ExplicitSchedules(data["schedules"], data.get("mode", SSAS))
    if kind == "layered_network":
        return FlowPolytope(LayeredNetwork(int(data["layers"]), int(data["width"])))
    raise GameValidationError(f"unknown coverage_set type {kind!r}")


def maximin_cov(V: CoverageSet, subset: Iterable[int]) -> tuple[float, np.ndarray | None]:
    """Largest ``h`` such that some ``v`` in ``V`` covers every target of ``subset`` with ``h``.

    Returns ``(math.inf, None)`` for an empty subset, otherwise the value and
    a witness coverage vector attaining it.
    """
    subset = sorted(set(subset))
    if not subset:
        return math.inf, None
    T = V.num_targets
    if subset[0] < 0 or subset[-1] >= T:
        raise GameValidationError(f"subset {subset} out of range for {T} targets")
    blk = V.block()
    k = len(subset)
    # h - v(j) <= 0 for j in subset; h is the last column
    rows = sp.csr_matrix((np.full(k, -1.0), (np.arange(k), subset)), shape=(k, blk.width))
    A_ub = sp.vstack([pad(blk.A_ub, 1), sp.hstack([rows, sp.csr_matrix(np.ones((k, 1)))])], format="csr")
    b_ub = np.concatenate([blk.b_ub, np.zeros(k)])
    c = np.zeros(blk.width + 1)
    c[-1] = -1.0
    bounds = ((0, None),) * T + blk.aux_bounds + ((None, None),)
    res = solve_lp(c, A_ub, b_ub, pad(blk.A_eq, 1), blk.b_eq, bounds)
    witness = np.clip(res.x[:T], 0.0, None)
    return float(res.x[-1]), witness


def membership_gap(V: CoverageSet, v) -> float:
    """Smallest uniform slack ``r >= 0`` under which ``v`` is attainable.

    Downward-closed sets need ``v <= w + r`` for some ``w`` in ``V``;
    clearance sets need ``|v - w| <= r``.
    """
    v = np.asarray(v, dtype=float)
    T = V.num_targets
    if v.shape != (T,):
        raise GameValidationError(f"coverage vector has shape {v.shape}, expected ({T},)")
    blk = V.block()
    eye = sp.identity(T, format="csr")
    r_col = sp.csr_matrix(-np.ones((T, 1)))
    # -w(t) - r <= -v(t)
    lower = sp.hstack([-eye, sp.csr_matrix((T, blk.num_aux)), r_col], format="csr")
    A_rows, b_rows = [pad(blk.A_ub, 1), lower], [blk.b_ub, -v]
    if not V.downward_closed:
        upper = sp.hstack([eye, sp.csr_matrix((T, blk.num_aux)), r_col], format="csr")
        A_rows.append(upper)
        b_rows.append(v)
    c = np.zeros(blk.width + 1)
    c[-1] = 1.0
    bounds = ((0, None),) * T + blk.aux_bounds + ((0, None),)
    res = solve_lp(c, sp.vstack(A_rows, format="csr"), np.concatenate(b_rows), pad(blk.A_eq, 1), blk.b_eq, bounds)
    return float(res.x[-1])


def membership(V: CoverageSet, v, tol: float = 1e-7) -> bool:
    """Whether coverage ``v`` is attainable in ``V`` up to ``tol``."""
    v = np.asarray(v, dtype=float)
    if np.any(v < -tol):
        return False
    return membership_gap(V, np.clip(v, 0.0, None)) <= tol
