"""Lattice interactions, finite-volume Gibbs measures, and their QoI bounds.

An interaction is a finite list of translation-invariant cluster templates,
one per translation-equivalence class, each carrying the offsets of a finite
set containing the origin and a bounded coupling function on the spin
configurations of that set.  Hamiltonians use free boundary conditions:
cluster translates that cross the volume boundary are dropped.

Exact computation is by configuration enumeration (capped at 2e6
configurations) or, for one-dimensional nearest-neighbor interactions, by a
transfer-matrix product with log-domain scaling.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .divergences import DiscreteDistribution
from .errors import (
    DimensionError,
    EnumerationLimitError,
    ParameterError,
)
from .goal_oriented import AnalyticCgf, GoalBound, xi_bounds

_ENUMERATION_CAP = 2_000_000


@dataclass(frozen=True, eq=False)
class SpinCluster:
    """One cluster template: offsets (each a d-vector, origin included) plus
    a coupling function mapping the spins on those offsets to an energy."""

    offsets: tuple[tuple[int, ...], ...]
    coupling: Callable[[np.ndarray], float]

    def __post_init__(self):
        if len(self.offsets) == 0:
            raise ParameterError("a cluster needs at least one offset")
        dims = {len(o) for o in self.offsets}
        if len(dims) != 1:
            raise DimensionError("cluster offsets have inconsistent dimensions")
        d = dims.pop()
        if (0,) * d not in self.offsets:
            raise ParameterError("every cluster must contain the origin offset")
        if len(set(self.offsets)) != len(self.offsets):
            raise ParameterError("cluster offsets must be distinct")

    @property
    def size(self) -> int:
        return len(self.offsets)

    def sup_norm(self, spin_states: Sequence[float]) -> float:
        worst = 0.0
        for combo in itertools.product(spin_states, repeat=self.size):
            worst = max(worst, abs(float(self.coupling(np.array(combo)))))
        return worst

    def value_table(self, spin_states: Sequence[float]) -> np.ndarray:
        """Coupling values indexed by the base-|S| digits of the local pattern."""
        values = [
            float(self.coupling(np.array(combo)))
            for combo in itertools.product(spin_states, repeat=self.size)
        ]
        return np.array(values)


def spin_product_cluster(offsets, coeff: float) -> SpinCluster:
    """Cluster whose coupling is ``coeff`` times the product of its spins."""
    offs = tuple(tuple(int(v) for v in o) for o in offsets)
    return SpinCluster(offsets=offs, coupling=lambda spins: coeff * float(np.prod(spins)))


@dataclass(frozen=True, eq=False)
class Interaction:
    """A translation-invariant interaction given by cluster templates.

    ``clusters`` must contain one template per translation-equivalence class;
    listing both {0, e} and {-e, 0} would double-count their bonds.
    Coupling coefficients are understood to include the inverse temperature.
    """

    dimension: int
    clusters: tuple[SpinCluster, ...]
    spin_states: tuple[float, ...] = (-1.0, 1.0)

    def __post_init__(self):
        for cluster in self.clusters:
            if any(len(o) != self.dimension for o in cluster.offsets):
                raise DimensionError(
                    f"cluster offsets must be {self.dimension}-vectors"
                )
        if len(self.spin_states) < 2:
            raise ParameterError("need at least two spin states")

    @property
    def num_states(self) -> int:
        return len(self.spin_states)


def ising_interaction(beta: float, coupling_j: float, field_h: float, dimension: int) -> Interaction:
    """Nearest-neighbor Ising interaction: pair terms ``-beta J s s'`` along
    each axis and a single-site field term ``-beta h s``."""
    if beta <= 0:
        raise ParameterError("inverse temperature must be positive")
    clusters = []
    origin = (0,) * dimension
    for axis in range(dimension):
        step = tuple(1 if i == axis else 0 for i in range(dimension))
        clusters.append(spin_product_cluster((origin, step), -beta * coupling_j))
    if field_h != 0.0:
        clusters.append(spin_product_cluster((origin,), -beta * field_h))
    return Interaction(dimension=dimension, clusters=tuple(clusters))


def triple_norm(interaction: Interaction) -> float:
    """Interaction norm ``sum_{X contains 0} |X|^-1 sup|Phi_X|``.

    A template with k offsets has exactly k translates containing the origin,
    each contributing |X|^-1 times the same sup norm, so per template the
    contributions telescope to sup|coupling| itself.
    """
    return sum(c.sup_norm(interaction.spin_states) for c in interaction.clusters)


def interaction_difference(phi: Interaction, psi: Interaction) -> Interaction:
    """The interaction Phi - Psi, merging templates on identical offset sets."""
    if phi.dimension != psi.dimension:
        raise DimensionError("interactions live on lattices of different dimension")
    if phi.spin_states != psi.spin_states:
        raise DimensionError("interactions have different spin state sets")

    merged: dict[tuple, list] = {}
    for interaction, sign in ((phi, 1.0), (psi, -1.0)):
        for cluster in interaction.clusters:
            key = tuple(sorted(cluster.offsets))
            merged.setdefault(key, []).append((sign, cluster))

    def combined(entries):
        def coupling(spins: np.ndarray) -> float:
            total = 0.0
            for sign, cluster in entries:
                # spins arrive in sorted-offset order; restore each cluster's own order.
                key = tuple(sorted(cluster.offsets))
                perm = [key.index(o) for o in cluster.offsets]
                total += sign * float(cluster.coupling(spins[perm]))
            return total

        return coupling

    clusters = tuple(
        SpinCluster(offsets=key, coupling=combined(entries))
        for key, entries in sorted(merged.items())
    )
    return Interaction(
        dimension=phi.dimension, clusters=clusters, spin_states=phi.spin_states
    )


def tilted_interaction(
    phi: Interaction, g_values: np.ndarray, c: float
) -> Interaction:
    """The interaction of ``H - c * sum_x g(s_x)``: Phi plus one single-site
    template with coupling ``-c g``."""
    g_values = np.asarray(g_values, dtype=float)
    if g_values.size != phi.num_states:
        raise DimensionError("g must assign one value per spin state")
    lookup = {s: -c * float(g) for s, g in zip(phi.spin_states, g_values)}
    tilt = SpinCluster(
        offsets=((0,) * phi.dimension,),
        coupling=lambda spins: lookup[float(spins[0])],
    )
    return Interaction(
        dimension=phi.dimension,
        clusters=phi.clusters + (tilt,),
        spin_states=phi.spin_states,
    )


@dataclass(frozen=True, eq=False)
class LatticeVolume:
    """A finite set of lattice sites in fixed lexicographic order."""

    dimension: int
    sites: tuple[tuple[int, ...], ...]

    @classmethod
    def centered(cls, dimension: int, half_width: int) -> "LatticeVolume":
        """The box {-n..n}^d with N = (2n+1)^d sites."""
        if half_width < 0:
            raise ParameterError("half_width must be nonnegative")
        axis = range(-half_width, half_width + 1)
        sites = tuple(itertools.product(axis, repeat=dimension))
        return cls(dimension=dimension, sites=sites)

    @classmethod
    def chain(cls, length: int) -> "LatticeVolume":
        """A one-dimensional segment of ``length`` sites (supports even N)."""
        if length < 1:
            raise ParameterError("chain length must be positive")
        return cls(dimension=1, sites=tuple((i,) for i in range(length)))

    @property
    def num_sites(self) -> int:
        return len(self.sites)

    def site_index(self) -> dict:
        return {site: i for i, site in enumerate(self.sites)}

    def is_contiguous_chain(self) -> bool:
        if self.dimension != 1:
            return False
        coords = [s[0] for s in self.sites]
        return coords == list(range(coords[0], coords[0] + len(coords)))


def _cluster_instances(
    interaction: Interaction, volume: LatticeVolume
) -> list[tuple[SpinCluster, np.ndarray]]:
    """Site-index arrays (instances x cluster size) for every template,
    with boundary-crossing translates dropped (free boundary conditions)."""
    index = volume.site_index()
    result = []
    for cluster in interaction.clusters:
        rows = []
        for shift in volume.sites:
            try:
                rows.append(
                    [
                        index[tuple(o + a for o, a in zip(offset, shift))]
                        for offset in cluster.offsets
                    ]
                )
            except KeyError:
                continue
        if rows:
            result.append((cluster, np.array(rows, dtype=np.int64)))
    return result


def hamiltonian(interaction: Interaction, volume: LatticeVolume, config) -> float:
    """Energy of one configuration, ``sum_{X in volume} Phi_X(s_X)``."""
    config = np.asarray(config, dtype=float)
    if config.size != volume.num_sites:
        raise DimensionError(
            f"configuration has {config.size} spins for {volume.num_sites} sites"
        )
    total = 0.0
    for cluster, instances in _cluster_instances(interaction, volume):
        for row in instances:
            total += float(cluster.coupling(config[row]))
    return total


def _enumerated_state_indices(num_sites: int, num_states: int) -> np.ndarray:
    count = num_states**num_sites
    if count > _ENUMERATION_CAP:
        raise EnumerationLimitError(
            f"{count} configurations exceed the enumeration cap {_ENUMERATION_CAP}"
        )
    idx = np.arange(count, dtype=np.int64)
    powers = num_states ** np.arange(num_sites - 1, -1, -1, dtype=np.int64)
    return ((idx[:, None] // powers[None, :]) % num_states).astype(np.uint8)


def _energy_vector(
    interaction: Interaction, volume: LatticeVolume, state_indices: np.ndarray
) -> np.ndarray:
    """Hamiltonian of every enumerated configuration, vectorized per template
    through a local-pattern value table."""
    s = interaction.num_states
    energies = np.zeros(state_indices.shape[0])
    for cluster, instances in _cluster_instances(interaction, volume):
        table = cluster.value_table(interaction.spin_states)
        k = cluster.size
        digit_weights = s ** np.arange(k - 1, -1, -1, dtype=np.int64)
        for row in instances:
            pattern = state_indices[:, row] @ digit_weights
            energies += table[pattern]
    return energies


def _logsumexp(values: np.ndarray) -> float:
    m = float(np.max(values))
    return m + math.log(float(np.sum(np.exp(values - m))))


def log_partition(
    interaction: Interaction, volume: LatticeVolume, method: str = "auto"
) -> float:
    """``log sum_config exp(-H(config))``.

    ``method='enumerate'`` sums over all configurations with a max-exponent
    shift; ``method='transfer'`` multiplies nearest-neighbor transfer
    matrices with log-domain rescaling (d = 1 only); ``'auto'`` prefers the
    transfer matrix whenever the interaction supports it.
    """
    if method == "auto":
        method = "transfer" if _transfer_applicable(interaction, volume) else "enumerate"
    if method == "transfer":
        return _log_partition_transfer(interaction, volume)
    if method == "enumerate":
        state_indices = _enumerated_state_indices(
            volume.num_sites, interaction.num_states
        )
        return _logsumexp(-_energy_vector(interaction, volume, state_indices))
    raise ParameterError(f"unknown log-partition method {method!r}")


def _transfer_applicable(interaction: Interaction, volume: LatticeVolume) -> bool:
    if interaction.dimension != 1 or not volume.is_contiguous_chain():
        return False
    allowed = {((0,),), ((0,), (1,)), ((1,), (0,))}
    return all(c.offsets in allowed or set(c.offsets) == {(0,), (1,)} for c in interaction.clusters)


def _log_partition_transfer(interaction: Interaction, volume: LatticeVolume) -> float:
    if not _transfer_applicable(interaction, volume):
        raise ParameterError(
            "transfer-matrix method needs a 1-D chain with nearest-neighbor clusters"
        )
    states = np.array(interaction.spin_states)
    s = states.size
    field = np.zeros(s)
    bond = np.zeros((s, s))
    for cluster in interaction.clusters:
        if cluster.size == 1:
            for i, v in enumerate(states):
                field[i] += float(cluster.coupling(np.array([v])))
        else:
            for i, a in enumerate(states):
                for j, b in enumerate(states):
                    spins = {(0,): a, (1,): b}
                    args = np.array([spins[o] for o in cluster.offsets])
                    bond[i, j] += float(cluster.coupling(args))
    # Z = u . T^(L-1) . 1 with u(s) = e^{-field(s)}, T(s,s') = e^{-bond - field(s')}.
    transfer = np.exp(-bond - field[None, :])
    vec = np.ones(s)
    log_scale = 0.0
    for _ in range(volume.num_sites - 1):
        vec = transfer @ vec
        norm = float(vec.max())
        vec /= norm
        log_scale += math.log(norm)
    return log_scale + math.log(float(np.dot(np.exp(-field), vec)))


@dataclass(frozen=True, eq=False)
class GibbsMeasure:
    """A finite-volume Gibbs measure realized by exact enumeration.

    Probabilities are proportional to ``exp(-H)`` over the configurations of
    the volume, enumerated in lexicographic site order with spin states in
    their declared order (so for the default states, -1 maps to digit 0).
    """

    interaction: Interaction
    volume: LatticeVolume
    log_partition: float
    state_indices: np.ndarray
    energies: np.ndarray
    weights: np.ndarray

    def __init__(self, interaction: Interaction, volume: LatticeVolume):
        if interaction.dimension != volume.dimension:
            raise DimensionError("interaction and volume dimensions differ")
        state_indices = _enumerated_state_indices(
            volume.num_sites, interaction.num_states
        )
        energies = _energy_vector(interaction, volume, state_indices)
        log_z = _logsumexp(-energies)
        weights = np.exp(-energies - log_z)
        weights /= weights.sum()
        for name, value in (
            ("interaction", interaction),
            ("volume", volume),
            ("log_partition", log_z),
            ("state_indices", state_indices),
            ("energies", energies),
            ("weights", weights),
        ):
            object.__setattr__(self, name, value)

    @property
    def num_sites(self) -> int:
        return self.volume.num_sites

    def distribution(self) -> DiscreteDistribution:
        return DiscreteDistribution(self.weights, renormalize=True)

    def site_total(self, g_values) -> np.ndarray:
        """Per-configuration value of ``sum_x g(s_x)`` for a single-site g."""
        g_values = np.asarray(g_values, dtype=float)
        if g_values.size != self.interaction.num_states:
            raise DimensionError("g must assign one value per spin state")
        return g_values[self.state_indices].sum(axis=1)

    def expectation(self, per_config: np.ndarray) -> float:
        return float(self.weights @ per_config)


def _check_compatible(a: GibbsMeasure, b: GibbsMeasure) -> None:
    if a.volume.sites != b.volume.sites:
        raise DimensionError("Gibbs measures live on different volumes")
    if a.interaction.spin_states != b.interaction.spin_states:
        raise DimensionError("Gibbs measures have different spin state sets")


def gibbs_relative_entropy(psi_measure: GibbsMeasure, phi_measure: GibbsMeasure) -> float:
    """``R(mu^Psi || mu^Phi) = log Z^Phi - log Z^Psi + E_Psi(H^Phi - H^Psi)``."""
    _check_compatible(psi_measure, phi_measure)
    value = (
        phi_measure.log_partition
        - psi_measure.log_partition
        + psi_measure.expectation(phi_measure.energies - psi_measure.energies)
    )
    return max(value, 0.0)


def _tilted_cgf_source(phi_measure: GibbsMeasure, g_values) -> tuple[AnalyticCgf, float, float]:
    """Centered CGF of ``sum_x g(s_x)`` under mu^Phi via tilted partition sums.

    ``K(c) = log Z^{Phi - c Gamma^g} - log Z^Phi - c E(sum g)``; adding
    ``c g`` as a single-site term only shifts the per-configuration energy by
    ``-c G(config)``, so the tilted log-partition is a reweighted sum over
    the already-enumerated configurations.
    """
    totals = phi_measure.site_total(g_values)
    mean = phi_measure.expectation(totals)
    variance = phi_measure.expectation((totals - mean) ** 2)
    neg_energy = -phi_measure.energies
    log_z = phi_measure.log_partition

    def centered(c: float) -> float:
        return _logsumexp(neg_energy + c * totals) - log_z - c * mean

    return AnalyticCgf(fn=centered, check_contract=False), mean, variance


def finite_volume_xi(
    psi_measure: GibbsMeasure, phi_measure: GibbsMeasure, g_values
) -> GoalBound:
    """Per-site goal-oriented bound on ``E_Psi(f_N) - E_Phi(f_N)`` for the
    site-averaged observable ``f_N = N^-1 sum_x g(s_x)``.

    Optimizes the tilted-partition-function form of the extensive bound and
    divides by N; the returned optimizers refer to the extensive problem.
    """
    _check_compatible(psi_measure, phi_measure)
    source, _, variance = _tilted_cgf_source(phi_measure, g_values)
    r = gibbs_relative_entropy(psi_measure, phi_measure)
    bound = xi_bounds(source, r, variance=variance)
    return bound.scaled(1.0 / phi_measure.num_sites)


def triple_norm_xi(
    phi_measure: GibbsMeasure, psi_interaction: Interaction, g_values
) -> GoalBound:
    """Per-site bound with the relative entropy replaced by its interaction
    surrogate ``2 N |||Phi - Psi|||`` — looser, but it needs no partition
    function for Psi."""
    surrogate = 2.0 * phi_measure.num_sites * triple_norm(
        interaction_difference(phi_measure.interaction, psi_interaction)
    )
    source, _, variance = _tilted_cgf_source(phi_measure, g_values)
    bound = xi_bounds(source, surrogate, variance=variance)
    return bound.scaled(1.0 / phi_measure.num_sites)


def linearized_gibbs_bound(
    phi_measure: GibbsMeasure,
    g_values,
    *,
    relative_entropy: float | None = None,
    triple_norm_gap: float | None = None,
) -> float:
    """Leading-order per-site half width.

    With a relative entropy R: ``sqrt(Var(sum g)/N) * sqrt(2 R / N)``; with a
    triple-norm gap the substitution ``R/N <= 2 |||Phi - Psi|||`` gives
    ``2 sqrt(Var(sum g)/N) * sqrt(gap)``.  Exactly one of the two arguments
    must be provided.
    """
    if (relative_entropy is None) == (triple_norm_gap is None):
        raise ParameterError(
            "provide exactly one of relative_entropy or triple_norm_gap"
        )
    totals = phi_measure.site_total(g_values)
    mean = phi_measure.expectation(totals)
    var_per_site = phi_measure.expectation((totals - mean) ** 2) / phi_measure.num_sites
    if relative_entropy is not None:
        if relative_entropy < 0:
            raise ParameterError("relative entropy must be nonnegative")
        return math.sqrt(var_per_site) * math.sqrt(
            2.0 * relative_entropy / phi_measure.num_sites
        )
    if triple_norm_gap < 0:
        raise ParameterError("triple-norm gap must be nonnegative")
    return 2.0 * math.sqrt(var_per_site) * math.sqrt(triple_norm_gap)


def spin_observable(interaction: Interaction) -> np.ndarray:
    """The magnetization observable g(s) = s, aligned with the spin states."""
    return np.array(interaction.spin_states, dtype=float)
