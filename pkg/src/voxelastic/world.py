"""Voxel lattice, structure discovery, and neighbor search.

A world is a sparse map of integer lattice coordinates to block kinds
(1 lattice unit = 1 m).  Structure discovery flood-fills face-adjacent
material blocks from the nearest structural block to a seed, restricted
to a Chebyshev ball; load blocks are not particles, they attach their
force to the structural block that carries them.  Kernel neighbor lists
use a separate, larger cutoff radius.
"""
from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import DanglingLoad, EmptyStructure, NoStructureFound, WorldFormatError

Coord = tuple[int, int, int]

FACE_OFFSETS: tuple[Coord, ...] = (
    (1, 0, 0),
    (-1, 0, 0),
    (0, 1, 0),
    (0, -1, 0),
    (0, 0, 1),
    (0, 0, -1),
)


class BlockKind(str, Enum):
    STRUCTURAL = "structural"
    LOAD = "load"
    FIXED = "fixed"


# Block kinds that become simulated particles (loads are pure force sources).
MATERIAL_KINDS = (BlockKind.STRUCTURAL, BlockKind.FIXED)


@dataclass(frozen=True)
class World:
    """Sparse voxel world: coordinate -> block kind, plus the ground plane."""

    blocks: dict[Coord, BlockKind]
    ground_level: int = 0

    @classmethod
    def from_dict(cls, doc: dict) -> "World":
        if not isinstance(doc, dict):
            raise WorldFormatError("world document must be a JSON object")
        try:
            ground = doc["ground_level"]
            raw_blocks = doc["blocks"]
        except KeyError as exc:
            raise WorldFormatError(f"world document missing field {exc.args[0]!r}") from None
        if not isinstance(ground, int) or isinstance(ground, bool):
            raise WorldFormatError("'ground_level' must be an integer")
        if not isinstance(raw_blocks, list):
            raise WorldFormatError("'blocks' must be a list")
        blocks: dict[Coord, BlockKind] = {}
        for idx, entry in enumerate(raw_blocks):
            if not isinstance(entry, dict):
                raise WorldFormatError(f"blocks[{idx}] must be an object")
            try:
                coord = (entry["x"], entry["y"], entry["z"])
                kind_str = entry["kind"]
            except KeyError as exc:
                raise WorldFormatError(f"blocks[{idx}] missing field {exc.args[0]!r}") from None
            for axis, v in zip("xyz", coord):
                if not isinstance(v, int) or isinstance(v, bool):
                    raise WorldFormatError(f"blocks[{idx}].{axis} must be an integer")
            try:
                kind = BlockKind(kind_str)
            except ValueError:
                raise WorldFormatError(f"blocks[{idx}].kind: unknown kind {kind_str!r}") from None
            if coord in blocks:
                raise WorldFormatError(f"blocks[{idx}]: duplicate coordinate {coord}")
            if coord[1] < ground:
                raise WorldFormatError(f"blocks[{idx}]: y={coord[1]} is below ground level {ground}")
            blocks[coord] = kind
        return cls(blocks=blocks, ground_level=ground)

    def to_dict(self) -> dict:
        """Canonical document: blocks sorted by coordinate."""
        return {
            "ground_level": self.ground_level,
            "blocks": [
                {"x": c[0], "y": c[1], "z": c[2], "kind": kind.value}
                for c, kind in sorted(self.blocks.items())
            ],
        }


@dataclass
class Structure:
    """Discovered particle set: coordinates, kinds, constraints, adjacency."""

    coords: np.ndarray  # (N, 3) int lattice coordinates, sorted
    kinds: list[BlockKind]
    fixed: np.ndarray  # (N,) bool
    rest_positions: np.ndarray  # (N, 3) float, meters
    neighbors: list[np.ndarray]  # per particle, ascending neighbor indices
    load_attachments: dict[int, list[Coord]] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.kinds)

    def index_of(self, coord: Coord) -> int | None:
        key = tuple(int(v) for v in coord)
        return self._index.get(key)

    def __post_init__(self):
        self._index = {tuple(c): i for i, c in enumerate(map(tuple, self.coords.tolist()))}

    def neighbor_offsets(self) -> list[np.ndarray]:
        """Rest offsets X_j - X_i per particle, aligned with ``neighbors``."""
        return [self.rest_positions[idx] - self.rest_positions[i] for i, idx in enumerate(self.neighbors)]

    def load_counts(self) -> np.ndarray:
        counts = np.zeros(len(self), dtype=int)
        for i, coords in self.load_attachments.items():
            counts[i] = len(coords)
        return counts


def brute_force_neighbors(positions: np.ndarray, h: float) -> list[np.ndarray]:
    """All-pairs neighbor search: {j != i : |X_j - X_i| < h}, ascending."""
    positions = np.asarray(positions, dtype=float)
    n = len(positions)
    if n == 0:
        return []
    diff = positions[:, None, :] - positions[None, :, :]
    dist2 = np.einsum("ija,ija->ij", diff, diff)
    mask = dist2 < h * h
    np.fill_diagonal(mask, False)
    return [np.nonzero(mask[i])[0] for i in range(n)]


def hashed_neighbors(positions: np.ndarray, h: float) -> list[np.ndarray]:
    """Spatial-hash neighbor search; identical sets to the brute-force scan."""
    positions = np.asarray(positions, dtype=float)
    n = len(positions)
    if n == 0:
        return []
    cells: dict[Coord, list[int]] = defaultdict(list)
    keys = np.floor(positions / h).astype(int)
    for i, key in enumerate(map(tuple, keys.tolist())):
        cells[key].append(i)
    h2 = h * h
    out: list[np.ndarray] = []
    for i in range(n):
        cx, cy, cz = keys[i]
        candidates = []
        for dx in (-1, 0, 1):
            for dy in (-1, 0, 1):
                for dz in (-1, 0, 1):
                    candidates.extend(cells.get((cx + dx, cy + dy, cz + dz), ()))
        cand = np.array(sorted(candidates), dtype=int)
        d = positions[cand] - positions[i]
        close = np.einsum("ka,ka->k", d, d) < h2
        close &= cand != i
        out.append(cand[close])
    return out


def _chebyshev(a: Coord, b: Coord) -> int:
    return max(abs(a[0] - b[0]), abs(a[1] - b[1]), abs(a[2] - b[2]))


def discover_structure(world: World, seed: Coord, radius: int, h: float = 2.0) -> Structure:
    """Flood-fill the connected material component around ``seed``.

    The fill starts at the structural block nearest to the seed (Chebyshev
    metric, lexicographic tie-break), walks 6-face adjacency over
    structural and fixed-anchor blocks, and never leaves the Chebyshev
    ball of the given radius.  Kernel neighbor lists use the cutoff ``h``.
    Load blocks resting on an included structural block are attached to
    it; a touching load block with nothing structural to rest on raises
    DanglingLoad.
    """
    if radius < 1:
        raise ValueError("scan radius must be at least 1")
    seed = tuple(int(v) for v in seed)
    structural = [c for c, kind in world.blocks.items() if kind is BlockKind.STRUCTURAL]
    if not structural:
        raise EmptyStructure("world contains no structural blocks")
    in_range = [c for c in structural if _chebyshev(c, seed) <= radius]
    if not in_range:
        raise NoStructureFound(f"no structural block within radius {radius} of {seed}")
    start = min(in_range, key=lambda c: (_chebyshev(c, seed), c))

    visited: set[Coord] = set()
    queue = deque([start])
    visited.add(start)
    while queue:
        c = queue.popleft()
        for dx, dy, dz in FACE_OFFSETS:
            nb = (c[0] + dx, c[1] + dy, c[2] + dz)
            if nb in visited or _chebyshev(nb, seed) > radius:
                continue
            kind = world.blocks.get(nb)
            if kind in MATERIAL_KINDS:
                visited.add(nb)
                queue.append(nb)
    if not visited:
        raise EmptyStructure("flood fill produced no particles")

    ordered = sorted(visited)
    coords = np.array(ordered, dtype=int)
    kinds = [world.blocks[c] for c in ordered]
    fixed = np.array(
        [kind is BlockKind.FIXED or c[1] == world.ground_level for c, kind in zip(ordered, kinds)],
        dtype=bool,
    )
    rest = coords.astype(float)
    neighbors = hashed_neighbors(rest, h)

    structure = Structure(
        coords=coords,
        kinds=kinds,
        fixed=fixed,
        rest_positions=rest,
        neighbors=neighbors,
    )
    _attach_loads(world, structure)
    return structure


def _attach_loads(world: World, structure: Structure) -> None:
    """Attach each load block touching the structure to its carrier.

    Preference order: the structural particle directly beneath, then the
    lowest-index face-adjacent structural particle.  A load block whose
    only material contacts are fixed anchors has nothing to rest on.
    """
    included = {tuple(c) for c in structure.coords.tolist()}
    attachments: dict[int, list[Coord]] = defaultdict(list)
    for c, kind in sorted(world.blocks.items()):
        if kind is not BlockKind.LOAD:
            continue
        touching = [
            (c[0] + dx, c[1] + dy, c[2] + dz)
            for dx, dy, dz in FACE_OFFSETS
            if (c[0] + dx, c[1] + dy, c[2] + dz) in included
        ]
        if not touching:
            continue  # load belongs to some other structure (or none)
        structural = [
            structure.index_of(t)
            for t in touching
            if world.blocks[t] is BlockKind.STRUCTURAL
        ]
        below = (c[0], c[1] - 1, c[2])
        if below in included and world.blocks[below] is BlockKind.STRUCTURAL:
            carrier = structure.index_of(below)
        elif structural:
            carrier = min(structural)
        else:
            raise DanglingLoad(f"load block at {c} has no structural block to rest on")
        attachments[carrier].append(c)
    structure.load_attachments = dict(attachments)
