"""Force-directed 2-D layout with interactive stepping and pinning.

Repulsion acts between every pair of visible nodes and attraction along
every visible edge; per-step movement is capped by a cooling temperature.
All randomness (initial placement, coincident-pair separation, expansion
jitter) is derived by hashing node ids with the configured seed, so layouts
are reproducible bit-for-bit regardless of call order.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping

import numpy as np

from .errors import MissingPosition
from .graph import Graph, NodeId

Position = tuple[float, float]

# rows of the pairwise force matrix processed per block; bounds memory at
# roughly _CHUNK * n floats per temporary
_CHUNK = 1024


@dataclass(frozen=True)
class LayoutParams:
    area_width: float = 1000.0
    area_height: float = 1000.0
    c_constant: float = 1.0
    initial_temperature: float | None = None  # defaults to area_width / 10
    cooling: float = 0.95
    min_separation: float = 1e-4
    temperature_floor: float = 0.5
    seed: int = 0

    def __post_init__(self) -> None:
        if self.initial_temperature is None:
            object.__setattr__(self, "initial_temperature", self.area_width / 10.0)
        for name in ("area_width", "area_height", "c_constant",
                     "initial_temperature", "min_separation"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if not 0 < self.cooling < 1:
            raise ValueError("cooling must lie in (0, 1)")
        if self.temperature_floor < 0:
            raise ValueError("temperature_floor must be nonnegative")

    def ideal_edge_length(self, visible_count: int) -> float:
        area = self.area_width * self.area_height
        return self.c_constant * math.sqrt(area / max(visible_count, 1))


@dataclass(eq=True)
class LayoutState:
    positions: dict[NodeId, Position] = field(default_factory=dict)
    pinned: set[NodeId] = field(default_factory=set)
    temperature: float = 0.0
    iteration: int = 0


def _hash_unit_floats(salt: str, seed: int, key: str) -> tuple[float, float]:
    """Two floats in [0, 1) derived stably from (salt, seed, key)."""
    digest = hashlib.blake2b(
        f"{salt}\x1f{seed}\x1f{key}".encode(), digest_size=16
    ).digest()
    a = int.from_bytes(digest[:8], "big") / 2**64
    b = int.from_bytes(digest[8:], "big") / 2**64
    return a, b


def position_for(node_id: NodeId, params: LayoutParams) -> Position:
    """Deterministic uniform position within the layout area."""
    u, v = _hash_unit_floats("pos", params.seed, node_id)
    return (u * params.area_width, v * params.area_height)


def jitter_near(anchor: Position, node_id: NodeId, params: LayoutParams) -> Position:
    """Deterministic small offset from an anchor, clamped to the area.

    Used when expansion reveals a node next to the one it was expanded from.
    """
    u, v = _hash_unit_floats("jitter", params.seed, node_id)
    radius = (0.5 + v) * min(params.area_width, params.area_height) / 50.0
    angle = 2.0 * math.pi * u
    x = min(max(anchor[0] + radius * math.cos(angle), 0.0), params.area_width)
    y = min(max(anchor[1] + radius * math.sin(angle), 0.0), params.area_height)
    return (x, y)


def _pair_separation_direction(
    id_low: NodeId, id_high: NodeId, seed: int
) -> tuple[float, float]:
    """Unit vector pushing ``id_high`` away from ``id_low`` when coincident."""
    u, _ = _hash_unit_floats("pair", seed, f"{id_low}\x1f{id_high}")
    angle = 2.0 * math.pi * u
    return (math.cos(angle), math.sin(angle))


def _schedule_temperature(params: LayoutParams, iteration: int) -> float:
    assert params.initial_temperature is not None
    return max(
        params.initial_temperature * params.cooling**iteration,
        params.temperature_floor,
    )


def seed_positions(
    node_ids: Iterable[NodeId], params: LayoutParams | None = None
) -> LayoutState:
    """Fresh state with a deterministic position for every given id."""
    params = params or LayoutParams()
    positions = {node_id: position_for(node_id, params) for node_id in node_ids}
    return LayoutState(
        positions=positions,
        pinned=set(),
        temperature=_schedule_temperature(params, 0),
        iteration=0,
    )


def with_positions(state: LayoutState, extra: Mapping[NodeId, Position]) -> LayoutState:
    """Copy of ``state`` with extra positions merged in."""
    positions = dict(state.positions)
    positions.update(extra)
    return LayoutState(
        positions=positions,
        pinned=set(state.pinned),
        temperature=state.temperature,
        iteration=state.iteration,
    )


def pin(state: LayoutState, node_id: NodeId) -> LayoutState:
    if node_id not in state.positions:
        raise MissingPosition(node_id)
    return LayoutState(
        positions=dict(state.positions),
        pinned=state.pinned | {node_id},
        temperature=state.temperature,
        iteration=state.iteration,
    )


def unpin(state: LayoutState, node_id: NodeId) -> LayoutState:
    if node_id not in state.positions:
        raise MissingPosition(node_id)
    return LayoutState(
        positions=dict(state.positions),
        pinned=state.pinned - {node_id},
        temperature=state.temperature,
        iteration=state.iteration,
    )


def step(
    graph: Graph,
    visible: Iterable[NodeId],
    state: LayoutState,
    params: LayoutParams | None = None,
) -> LayoutState:
    """One force iteration over the visible nodes.

    Unpinned nodes move along their net force by at most the entry
    temperature; positions are clamped to the layout area and the
    temperature cools geometrically (with the configured floor).
    Coincident pairs are separated along a hash-derived direction instead
    of dividing by a near-zero distance.
    """
    params = params or LayoutParams()
    ids = sorted(set(visible))
    for node_id in ids:
        if node_id not in state.positions:
            raise MissingPosition(node_id)

    next_temperature = _schedule_temperature(params, state.iteration + 1)
    positions = dict(state.positions)
    n = len(ids)
    if n > 0:
        cap = state.temperature
        k = params.ideal_edge_length(n)
        pos = np.array([positions[i] for i in ids], dtype=np.float64)
        disp = np.zeros_like(pos)
        min_sep = params.min_separation

        # repulsion: k^2 / d along the separating direction, all pairs
        coincident: list[tuple[int, int]] = []
        for start in range(0, n, _CHUNK):
            stop = min(start + _CHUNK, n)
            delta = pos[start:stop, None, :] - pos[None, :, :]
            dist2 = np.einsum("ijk,ijk->ij", delta, delta)
            close = dist2 < min_sep * min_sep
            for i_local, j in np.argwhere(close):
                i = start + int(i_local)
                j = int(j)
                if i < j:
                    coincident.append((i, j))
            scale = np.where(close, 0.0, k * k / np.where(close, 1.0, dist2))
            disp[start:stop] += np.einsum("ij,ijk->ik", scale, delta)

        # attraction: d^2 / k along each visible edge (weights ignored)
        index = {node_id: i for i, node_id in enumerate(ids)}
        edges = [
            (index[e.source], index[e.target])
            for e in graph.induced_edges(ids)
            if not e.is_self_loop
        ]
        if edges:
            src = np.array([e[0] for e in edges])
            dst = np.array([e[1] for e in edges])
            delta = pos[src] - pos[dst]
            dist = np.sqrt(np.einsum("ij,ij->i", delta, delta))
            ok = dist >= min_sep
            pull = np.where(ok, dist / k, 0.0)[:, None] * delta
            np.add.at(disp, src, -pull)
            np.add.at(disp, dst, pull)

        # coincident pairs: deterministic unit-vector separation, as if the
        # pair sat min_separation apart
        magnitude = k * k / min_sep
        for i, j in coincident:
            dx, dy = _pair_separation_direction(ids[i], ids[j], params.seed)
            disp[i, 0] -= magnitude * dx
            disp[i, 1] -= magnitude * dy
            disp[j, 0] += magnitude * dx
            disp[j, 1] += magnitude * dy

        length = np.sqrt(np.einsum("ij,ij->i", disp, disp))
        move = np.minimum(length, cap)
        nonzero = length > 0.0
        factor = np.zeros(n)
        factor[nonzero] = move[nonzero] / length[nonzero]
        new_pos = pos + disp * factor[:, None]
        new_pos[:, 0] = np.clip(new_pos[:, 0], 0.0, params.area_width)
        new_pos[:, 1] = np.clip(new_pos[:, 1], 0.0, params.area_height)

        for i, node_id in enumerate(ids):
            if node_id not in state.pinned:
                positions[node_id] = (float(new_pos[i, 0]), float(new_pos[i, 1]))

    return LayoutState(
        positions=positions,
        pinned=set(state.pinned),
        temperature=next_temperature,
        iteration=state.iteration + 1,
    )


def run(
    graph: Graph,
    visible: Iterable[NodeId],
    state: LayoutState,
    params: LayoutParams | None = None,
    iterations: int = 1,
    observer: Callable[[LayoutState], bool | None] | None = None,
) -> LayoutState:
    """Apply ``iterations`` sequential steps.

    ``observer`` is called with each intermediate state; returning False
    cancels the remaining iterations (the last produced state is returned).
    """
    if iterations < 0:
        raise ValueError("iterations must be nonnegative")
    ids = list(visible)
    for _ in range(iterations):
        state = step(graph, ids, state, params)
        if observer is not None and observer(state) is False:
            break
    return state
