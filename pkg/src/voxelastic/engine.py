"""Explicit elastodynamics on a discovered structure.

Each step performs the half-kick / drift / force / half-kick sequence:

    v_half = v + dt/2 a
    x      = x + dt v_half
    a_new  = (F_int(x, v_half) + F_ext) / m
    v      = v_half + dt/2 a_new

with fixed particles pinned to their rest pose after every step.  All
kernel gradients and correction tensors live in the rest configuration,
so the per-pair corrected gradients are precomputed once and the step
reduces to a handful of vectorized gathers and segment sums (always
accumulated in ascending particle order, which keeps reruns bit-identical).

The deformation gradient is assembled from displacement differences,
F = I + sum_j (u_j - u_i) (x) grad~W(R_ij), which is algebraically the
same as summing current offsets but returns the identity exactly at rest
instead of up to linear-solve round-off.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Optional

import numpy as np
from scipy.sparse import csr_matrix

from . import _stepkernel, mechanics
from .errors import InvertedElement, NonFinite, SpecialBlockNotFound
from .kernel import KernelParams, batch_corrections, weight_gradient
from .mechanics import MaterialParams
from .world import BlockKind, Coord, Structure, World, discover_structure

STANDARD_GRAVITY = 9.81  # m/s^2, converts block weight to mass


@dataclass(frozen=True)
class SimConfig:
    """Run parameters: step size, loading, recording, and tracking."""

    dt: float
    num_steps: int = 5000
    gravity_force_per_block: tuple[float, float, float] = (0.0, -900.0, 0.0)
    load_force: tuple[float, float, float] = (0.0, -900.0, 0.0)
    record_every: int = 10
    special_block: Optional[Coord] = None
    self_weight_enabled: bool = True
    mass: float = 900.0 / STANDARD_GRAVITY
    ke_tolerance: Optional[float] = None  # early exit when set (off by default)

    def __post_init__(self):
        if self.dt <= 0:
            raise ValueError("dt must be positive")
        if self.num_steps < 1:
            raise ValueError("num_steps must be at least 1")
        if not 1 <= self.record_every <= self.num_steps:
            raise ValueError("record_every must lie in [1, num_steps]")
        if self.mass <= 0:
            raise ValueError("mass must be positive")


class Sample(NamedTuple):
    step: int
    time: float
    u: np.ndarray  # tracked displacement, (3,)
    von_mises: float


@dataclass
class SimulationResult:
    """Final fields plus the sampled time series of the tracked particle."""

    structure: Structure
    config: SimConfig
    displacements: np.ndarray  # (N, 3)
    von_mises: np.ndarray  # (N,)
    max_von_mises: float
    tracked_deflection: np.ndarray  # (3,)
    time_series: list[Sample]
    kinetic_energy: list[float]  # per sample, same length as time_series
    diagnostics: list[str] = field(default_factory=list)


@dataclass
class PairTables:
    """Precomputed per-pair corrected gradients (rest configuration).

    Pairs are stored flat, sorted by owner index i then neighbor j.
    ``grad_own[k]`` applies particle i's correction to grad W(R_ij);
    ``grad_nbr[k]`` applies particle j's.  Singular particles have zero
    rows in both, so they drop out of every sum.  The per-component
    sparse matrices carry the same pair data for fast per-step products
    (CSR rows accumulate in ascending neighbor order, keeping the
    deterministic reduction contract).
    """

    n: int
    pair_i: np.ndarray  # (M,)
    pair_j: np.ndarray  # (M,)
    grad_own: np.ndarray  # (M, 3)
    grad_nbr: np.ndarray  # (M, 3)
    grad_own_total: np.ndarray  # (N, 3) sum of grad_own per owner
    singular: np.ndarray  # (N,) bool
    isolated: np.ndarray  # (N,) bool
    own_stack: csr_matrix  # (3N, N): rows b*N+i carry grad_own[k][b] at column j
    nbr_wide: csr_matrix  # (N, 3N): row i carries grad_nbr[k][b] at column b*N+j

    @classmethod
    def from_pairs(
        cls,
        n: int,
        pair_i: np.ndarray,
        pair_j: np.ndarray,
        grad_own: np.ndarray,
        grad_nbr: np.ndarray,
        singular: Optional[np.ndarray] = None,
        isolated: Optional[np.ndarray] = None,
    ) -> "PairTables":
        m = len(pair_i)
        comps = np.arange(3)
        rows = (comps[:, None] * n + pair_i[None, :]).ravel()
        cols = np.tile(pair_j, 3)
        own_stack = csr_matrix((grad_own.T.ravel(), (rows, cols)), shape=(3 * n, n))
        wide_rows = np.tile(pair_i, 3)
        wide_cols = (comps[:, None] * n + pair_j[None, :]).ravel()
        nbr_wide = csr_matrix((grad_nbr.T.ravel(), (wide_rows, wide_cols)), shape=(n, 3 * n))
        counts = np.bincount(pair_i, minlength=n) if m else np.zeros(n, dtype=int)
        grad_own_total = (own_stack @ np.ones(n)).reshape(3, n).T.copy()
        return cls(
            n=n,
            pair_i=pair_i,
            pair_j=pair_j,
            grad_own=grad_own,
            grad_nbr=grad_nbr,
            grad_own_total=grad_own_total,
            singular=singular if singular is not None else np.zeros(n, dtype=bool),
            isolated=isolated if isolated is not None else counts == 0,
            own_stack=own_stack,
            nbr_wide=nbr_wide,
        )


def build_tables(
    structure: Structure, params: KernelParams, neighbors: Optional[list[np.ndarray]] = None
) -> PairTables:
    """Precompute pair lists and corrected gradients for a structure."""
    if neighbors is None:
        neighbors = structure.neighbors
    X = structure.rest_positions
    n = len(structure)

    counts = np.array([len(nb) for nb in neighbors], dtype=int)
    isolated = counts == 0
    if counts.sum() == 0:
        pair_i = np.zeros(0, dtype=int)
        pair_j = np.zeros(0, dtype=int)
        grad_own = np.zeros((0, 3))
        grad_nbr = np.zeros((0, 3))
        singular = np.zeros(n, dtype=bool)
    else:
        pair_i = np.repeat(np.arange(n), counts)
        pair_j = np.concatenate([nb for nb in neighbors if len(nb)])
        offsets = X[pair_j] - X[pair_i]
        per_particle_offsets = [
            X[nb] - X[i] if len(nb) else np.zeros((0, 3)) for i, nb in enumerate(neighbors)
        ]
        _, A_inv, singular = batch_corrections(X, per_particle_offsets, params)
        raw = weight_gradient(offsets, params)
        grad_own = np.einsum("kc,kcb->kb", raw, A_inv[pair_i])
        grad_nbr = np.einsum("kc,kcb->kb", raw, A_inv[pair_j])

    return PairTables.from_pairs(
        n, pair_i, pair_j, grad_own, grad_nbr, singular=singular, isolated=isolated
    )


def field_gradients(values: np.ndarray, tables: PairTables, extra: Optional[np.ndarray] = None):
    """sum_j (q_j - q_i) (x) grad~_i W(R_ij) for per-particle vector field(s) q.

    The field is shifted by particle 0's value first; the pairwise
    differences are unchanged and a uniform field then sums to exactly
    zero instead of accumulating round-off against its absolute size.
    Passing ``extra`` evaluates a second field in the same sparse product
    (used for the velocity gradient alongside the displacement gradient).
    """
    n = tables.n
    if extra is None:
        shifted = values - values[0] if n else values
        prod = (tables.own_stack @ shifted).reshape(3, n, 3)
        return np.ascontiguousarray(prod.transpose(1, 2, 0)) - np.einsum(
            "na,nb->nab", shifted, tables.grad_own_total
        )
    both = np.concatenate([values - values[0], extra - extra[0]], axis=1)
    prod = (tables.own_stack @ both).reshape(3, n, 2, 3)
    grads = np.ascontiguousarray(prod.transpose(2, 1, 3, 0))
    grads[0] -= np.einsum("na,nb->nab", both[:, :3], tables.grad_own_total)
    grads[1] -= np.einsum("na,nb->nab", both[:, 3:], tables.grad_own_total)
    return grads[0], grads[1]


def internal_forces(P: np.ndarray, tables: PairTables) -> np.ndarray:
    """Pairwise assembly sum_j (P_i grad~_i W + P_j grad~_j W) over neighbors.

    Each side of the pair uses its own correction tensor; particles with a
    singular correction exert no internal force and receive none.
    """
    f = np.einsum("nab,nb->na", P, tables.grad_own_total)
    f += tables.nbr_wide @ np.ascontiguousarray(P.transpose(2, 0, 1)).reshape(3 * tables.n, 3)
    f[tables.singular] = 0.0
    f[tables.isolated] = 0.0
    return f


def external_forces(structure: Structure, config: SimConfig) -> np.ndarray:
    """Constant per-particle loading: self weight plus attached load blocks.

    Only free structural particles are loaded; pinned particles absorb
    any force without moving, so they carry none.
    """
    n = len(structure)
    f = np.zeros((n, 3))
    structural = np.array([k is BlockKind.STRUCTURAL for k in structure.kinds], dtype=bool)
    eligible = structural & ~structure.fixed
    if config.self_weight_enabled:
        f[eligible] += np.asarray(config.gravity_force_per_block, dtype=float)
    load = np.asarray(config.load_force, dtype=float)
    for i, attached in structure.load_attachments.items():
        if eligible[i]:
            f[i] += len(attached) * load
    return f


class Simulation:
    """Owns the mutable state of one run; not shared between threads."""

    def __init__(
        self,
        structure: Structure,
        material: MaterialParams,
        kernel_params: KernelParams,
        config: SimConfig,
    ):
        self.structure = structure
        self.material = material
        self.config = config
        self.tables = build_tables(structure, kernel_params)
        n = len(structure)

        self.u = np.zeros((n, 3))  # displacement from rest
        self.v = np.zeros((n, 3))
        self.mass = np.full(n, config.mass)
        self.fixed = structure.fixed
        self.f_ext = external_forces(structure, config)
        self.step_count = 0

        self.diagnostics: list[str] = []
        for i in np.nonzero(self.tables.isolated)[0]:
            self.diagnostics.append(
                f"particle {tuple(structure.coords[i])} has no kernel neighbors; it carries no internal force"
            )
        for i in np.nonzero(self.tables.singular & ~self.tables.isolated)[0]:
            self.diagnostics.append(
                f"particle {tuple(structure.coords[i])} has a singular correction tensor; treated as force-free"
            )

        self._degenerate = self.tables.singular | self.tables.isolated
        self._indptr = np.concatenate(
            ([0], np.cumsum(np.bincount(self.tables.pair_i, minlength=n)))
        ).astype(np.int64)
        self._indices = self.tables.pair_j.astype(np.int64)
        self._F = np.broadcast_to(np.eye(3), (n, 3, 3)).copy()
        self._S = np.zeros((n, 3, 3))
        self._P = np.zeros((n, 3, 3))
        self.a = np.zeros((n, 3))
        self._check(*self._kernel_forces(self.u, self.v))

    def _kernel_args(self):
        t = self.tables
        m = self.material
        return (
            self._indptr,
            self._indices,
            t.grad_own,
            t.grad_nbr,
            t.grad_own_total,
            self._degenerate,
            self.fixed,
            self.f_ext,
            self.mass,
            m.lam,
            m.mu,
            m.eta,
            m.viscous_literal_f_inv,
            self._F,
            self._S,
            self._P,
        )

    def _kernel_forces(self, u, v):
        return _stepkernel.compute_forces(u, v, *self._kernel_args(), self.a)

    def _check(self, status: int, bad: int) -> None:
        if status == _stepkernel.OK:
            return
        coord = tuple(self.structure.coords[bad])
        if status == _stepkernel.INVERTED:
            raise InvertedElement(
                f"particle {coord} inverted at step {self.step_count}; reduce the time step"
            )
        raise NonFinite(f"non-finite state for particle {coord} at step {self.step_count}")

    # -- force evaluation --------------------------------------------------
    def _accelerations(self, u: np.ndarray, v: np.ndarray) -> np.ndarray:
        """Accelerations for an arbitrary state (also refreshes F, S)."""
        self._check(*self._kernel_forces(np.ascontiguousarray(u), np.ascontiguousarray(v)))
        return self.a.copy()

    # -- stepping ----------------------------------------------------------
    def step(self) -> None:
        """Advance one time step and re-enforce boundary conditions."""
        status, bad = _stepkernel.leapfrog_step(
            self.u, self.v, self.a, self.config.dt, *self._kernel_args()
        )
        self.step_count += 1
        self._check(status, bad)

    # -- observables ---------------------------------------------------------
    @property
    def positions(self) -> np.ndarray:
        return self.structure.rest_positions + self.u

    def displacements(self) -> np.ndarray:
        return self.u.copy()

    def von_mises_field(self) -> np.ndarray:
        return mechanics.von_mises(self._F, self._S)

    def kinetic_energy(self) -> float:
        return float(0.5 * np.sum(self.mass * np.einsum("na,na->n", self.v, self.v)))


SampleHook = Callable[[int, float, np.ndarray, np.ndarray], None]


def run(
    world: World,
    seed: Coord,
    radius: int,
    material: MaterialParams,
    kernel_params: KernelParams,
    config: SimConfig,
    sample_hook: Optional[SampleHook] = None,
) -> SimulationResult:
    """Discover the structure around ``seed`` and integrate it in time.

    The tracked deflection is the mean particle displacement unless
    ``config.special_block`` names a particle, in which case that block's
    displacement (and its stress in the time series) is reported instead.
    ``sample_hook(step, time, displacements, von_mises)`` fires at every
    recorded sample, e.g. to collect animation frames.
    """
    structure = discover_structure(world, seed, radius, h=kernel_params.h)
    tracked = None
    if config.special_block is not None:
        tracked = structure.index_of(config.special_block)
        if tracked is None:
            raise SpecialBlockNotFound(
                f"special block {tuple(config.special_block)} is not part of the structure"
            )

    sim = Simulation(structure, material, kernel_params, config)

    def tracked_u() -> np.ndarray:
        if tracked is not None:
            return sim.u[tracked].copy()
        return sim.u.mean(axis=0)

    samples: list[Sample] = []
    energies: list[float] = []

    def record(step: int) -> None:
        vm = sim.von_mises_field()
        vm_value = float(vm[tracked]) if tracked is not None else float(vm.max()) if len(vm) else 0.0
        samples.append(Sample(step=step, time=step * config.dt, u=tracked_u(), von_mises=vm_value))
        energies.append(sim.kinetic_energy())
        if sample_hook is not None:
            sample_hook(step, step * config.dt, sim.displacements(), vm.copy())

    record(0)
    early_exit = False
    for step in range(1, config.num_steps + 1):
        sim.step()
        if step % config.record_every == 0:
            record(step)
            if config.ke_tolerance is not None and sim.kinetic_energy() < config.ke_tolerance:
                early_exit = True
                break

    diagnostics = list(sim.diagnostics)
    if early_exit:
        diagnostics.append(
            f"early exit at step {sim.step_count}: kinetic energy below {config.ke_tolerance:g} J"
        )

    vm_field = sim.von_mises_field()
    return SimulationResult(
        structure=structure,
        config=config,
        displacements=sim.displacements(),
        von_mises=vm_field,
        max_von_mises=float(vm_field.max()) if len(vm_field) else 0.0,
        tracked_deflection=tracked_u(),
        time_series=samples,
        kinetic_energy=energies,
        diagnostics=diagnostics,
    )
