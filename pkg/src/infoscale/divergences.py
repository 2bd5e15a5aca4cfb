"""Finite-support distributions, information divergences, and classical QoI bounds.

Conventions
-----------
All divergences take the approximating / perturbed measure ``q`` first and the
reference measure ``p`` second, i.e. ``relative_entropy(q, p)`` is the KL
divergence of ``q`` from ``p`` (``sum q log(q/p)``).  Entropic sums use the
convention ``0 * log(0/p) = 0``.  Absolute-continuity violations raise
:class:`~infoscale.errors.AbsoluteContinuityError` by default; the KL and
chi-squared divergences accept ``extended=True`` to return ``+inf`` instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    AbsoluteContinuityError,
    DimensionError,
    NormalizationError,
    NumericsError,
    ParameterError,
)

_NORMALIZATION_TOL = 1e-12
_CHAIN_TOL = 1e-10
# Below this distance from 1, the Renyi order is evaluated by its KL limit
# to avoid catastrophic cancellation in the 1/(alpha-1) prefactor.
_RENYI_KL_WINDOW = 1e-6


def _as_readonly_array(values, name: str) -> np.ndarray:
    arr = np.array(values, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise DimensionError(f"{name} must be a nonempty 1-D array")
    if not np.all(np.isfinite(arr)):
        raise NormalizationError(f"{name} contains non-finite entries")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class DiscreteDistribution:
    """A probability vector on a finite support.

    Weights must be nonnegative and sum to one within 1e-12.  Pass
    ``renormalize=True`` to accept arbitrary positive weight vectors and
    rescale them; by default nothing is rescaled so results are reproducible
    bit-for-bit from the input.
    """

    weights: np.ndarray

    def __init__(self, weights, *, renormalize: bool = False):
        arr = np.array(weights, dtype=float)
        if arr.ndim != 1 or arr.size == 0:
            raise DimensionError("weights must be a nonempty 1-D array")
        if not np.all(np.isfinite(arr)):
            raise NormalizationError("weights contain non-finite entries")
        if np.any(arr < 0):
            raise NormalizationError("weights must be nonnegative")
        total = float(arr.sum())
        if renormalize:
            if total <= 0:
                raise NormalizationError("cannot renormalize a zero weight vector")
            arr = arr / total
        elif abs(total - 1.0) > _NORMALIZATION_TOL:
            raise NormalizationError(
                f"weights sum to {total!r}, outside tolerance {_NORMALIZATION_TOL}"
            )
        arr.setflags(write=False)
        object.__setattr__(self, "weights", arr)

    @property
    def support_size(self) -> int:
        return int(self.weights.size)

    def absolutely_continuous_wrt(self, other: "DiscreteDistribution") -> bool:
        """True if every atom of self is charged by ``other``."""
        _check_same_support(self, other)
        return not np.any((self.weights > 0) & (other.weights == 0))

    def mutually_absolutely_continuous_with(self, other: "DiscreteDistribution") -> bool:
        _check_same_support(self, other)
        return bool(np.all((self.weights > 0) == (other.weights > 0)))


@dataclass(frozen=True, eq=False)
class Observable:
    """A real-valued function on a finite support, aligned index-by-index."""

    values: np.ndarray

    def __init__(self, values):
        object.__setattr__(self, "values", _as_readonly_array(values, "values"))

    @property
    def sup_norm(self) -> float:
        return float(np.max(np.abs(self.values)))

    def expectation(self, dist: DiscreteDistribution) -> float:
        self._check_aligned(dist)
        return float(np.dot(dist.weights, self.values))

    def variance(self, dist: DiscreteDistribution) -> float:
        mean = self.expectation(dist)
        return float(np.dot(dist.weights, (self.values - mean) ** 2))

    def second_moment(self, dist: DiscreteDistribution) -> float:
        self._check_aligned(dist)
        return float(np.dot(dist.weights, self.values**2))

    def _check_aligned(self, dist: DiscreteDistribution) -> None:
        if self.values.size != dist.support_size:
            raise DimensionError(
                f"observable has {self.values.size} values but the "
                f"distribution support size is {dist.support_size}"
            )


def _check_same_support(p: DiscreteDistribution, q: DiscreteDistribution) -> None:
    if p.support_size != q.support_size:
        raise DimensionError(
            f"support sizes differ: {p.support_size} vs {q.support_size}"
        )


def _require_ac(q: DiscreteDistribution, p: DiscreteDistribution, what: str) -> None:
    if np.any((q.weights > 0) & (p.weights == 0)):
        raise AbsoluteContinuityError(
            f"{what} undefined: the first argument is not absolutely "
            "continuous with respect to the second"
        )


def _require_mutual_ac(q: DiscreteDistribution, p: DiscreteDistribution, what: str) -> None:
    if not q.mutually_absolutely_continuous_with(p):
        raise AbsoluteContinuityError(
            f"{what} requires mutually absolutely continuous measures"
        )


def _clamp_nonneg(value: float, what: str) -> float:
    # Rounding can push an exact zero slightly negative; anything worse is a bug.
    if value < -1e-12:
        raise NumericsError(f"{what} evaluated to {value!r} < 0")
    return max(value, 0.0)


def _logsumexp(exponents: np.ndarray) -> float:
    m = float(np.max(exponents))
    if not math.isfinite(m):
        return m
    return m + math.log(float(np.sum(np.exp(exponents - m))))


def total_variation(p: DiscreteDistribution, q: DiscreteDistribution) -> float:
    """Total variation distance, ``0.5 * sum |q - p|``; symmetric, in [0, 1]."""
    _check_same_support(p, q)
    return 0.5 * float(np.sum(np.abs(q.weights - p.weights)))


def relative_entropy(
    q: DiscreteDistribution, p: DiscreteDistribution, *, extended: bool = False
) -> float:
    """Kullback-Leibler divergence ``R(q || p) = sum q log(q / p)`` in nats.

    Requires q absolutely continuous w.r.t. p; with ``extended=True`` an
    absolute-continuity violation returns ``+inf`` instead of raising.
    """
    _check_same_support(q, p)
    bad = (q.weights > 0) & (p.weights == 0)
    if np.any(bad):
        if extended:
            return math.inf
        raise AbsoluteContinuityError(
            "relative entropy undefined: q is not absolutely continuous w.r.t. p"
        )
    mask = q.weights > 0
    qm, pm = q.weights[mask], p.weights[mask]
    return _clamp_nonneg(float(np.sum(qm * (np.log(qm) - np.log(pm)))), "relative entropy")


def chi_squared(
    q: DiscreteDistribution, p: DiscreteDistribution, *, extended: bool = False
) -> float:
    """Chi-squared divergence ``sum p (q/p - 1)^2 = sum q^2/p - 1``."""
    _check_same_support(q, p)
    if np.array_equal(q.weights, p.weights):
        return 0.0
    bad = (q.weights > 0) & (p.weights == 0)
    if np.any(bad):
        if extended:
            return math.inf
        raise AbsoluteContinuityError(
            "chi-squared divergence undefined: q is not absolutely continuous w.r.t. p"
        )
    mask = p.weights > 0
    value = float(np.sum(q.weights[mask] ** 2 / p.weights[mask])) - 1.0
    return _clamp_nonneg(value, "chi-squared divergence")


def hellinger(q: DiscreteDistribution, p: DiscreteDistribution) -> float:
    """Hellinger distance ``sqrt(sum (sqrt(q) - sqrt(p))^2)``, in [0, sqrt(2)]."""
    _check_same_support(q, p)
    return float(np.sqrt(np.sum((np.sqrt(q.weights) - np.sqrt(p.weights)) ** 2)))


def renyi_divergence(
    q: DiscreteDistribution, p: DiscreteDistribution, alpha: float
) -> float:
    """Renyi divergence of order alpha, ``(alpha-1)^-1 log sum q^a p^(1-a)``.

    Nondecreasing in alpha.  Orders within 1e-6 of 1 are evaluated by the KL
    limit.  Requires mutual absolute continuity and ``alpha > 0``.
    """
    if not (alpha > 0):
        raise ParameterError(f"Renyi order must be positive, got {alpha!r}")
    if abs(alpha - 1.0) < _RENYI_KL_WINDOW:
        if alpha == 1.0:
            raise ParameterError("Renyi order 1 is the KL divergence; use relative_entropy")
        return relative_entropy(q, p)
    _check_same_support(q, p)
    if np.array_equal(q.weights, p.weights):
        return 0.0
    _require_mutual_ac(q, p, "Renyi divergence")
    mask = q.weights > 0
    logq = np.log(q.weights[mask])
    logp = np.log(p.weights[mask])
    value = _logsumexp(alpha * logq + (1.0 - alpha) * logp) / (alpha - 1.0)
    return _clamp_nonneg(value, "Renyi divergence")


@dataclass(frozen=True)
class DivergenceReport:
    """The five divergences for one ordered pair of measures.

    ``tv`` is None for product-measure reports produced by
    :func:`iid_scaled_divergences`, which has no closed form for total
    variation.  The chain ordering
    ``H^2 <= D_{1/2} <= KL <= D_2 <= chi^2`` is validated on construction via
    the Hellinger / chi-squared representations of the order-1/2 and order-2
    Renyi divergences.
    """

    tv: float | None
    hellinger: float
    kl: float
    renyi_alpha: float
    renyi: float
    chi2: float

    def chain_values(self) -> tuple[float, float, float, float, float]:
        """(H^2, D_1/2, KL, D_2, chi^2) derived from the stored quantities."""
        h2 = self.hellinger**2
        d_half = -2.0 * math.log1p(-0.5 * h2) if h2 < 2.0 else math.inf
        d_two = math.log1p(self.chi2) if math.isfinite(self.chi2) else math.inf
        return h2, d_half, self.kl, d_two, self.chi2

    def validate_chain(self, tol: float = _CHAIN_TOL) -> None:
        h2, d_half, kl, d_two, chi2 = self.chain_values()
        if h2 < 2.0 * (1.0 - 1e-13):
            seq = (h2, d_half, kl, d_two, chi2)
        else:
            # A saturated Hellinger distance (product measures at very large
            # N) no longer determines the order-1/2 divergence, so only the
            # KL tail of the chain remains checkable.
            seq = (kl, d_two, chi2)
        for left, right in zip(seq, seq[1:]):
            if left > right + tol:
                raise NumericsError(
                    f"divergence chain violated: {seq!r} is not nondecreasing"
                )

    def as_dict(self) -> dict:
        return {
            "tv": self.tv,
            "hellinger": self.hellinger,
            "kl": self.kl,
            "renyi_alpha": self.renyi_alpha,
            "renyi": self.renyi,
            "chi2": self.chi2,
        }


def divergence_report(
    p: DiscreteDistribution, q: DiscreteDistribution, alpha: float = 2.0
) -> DivergenceReport:
    """Compute all five divergences of ``q`` from ``p`` and validate the chain."""
    report = DivergenceReport(
        tv=total_variation(p, q),
        hellinger=hellinger(q, p),
        kl=relative_entropy(q, p),
        renyi_alpha=alpha,
        renyi=renyi_divergence(q, p, alpha),
        chi2=chi_squared(q, p),
    )
    report.validate_chain()
    return report


def iid_scaled_divergences(
    p: DiscreteDistribution,
    q: DiscreteDistribution,
    n: int,
    alpha: float = 2.0,
) -> DivergenceReport:
    """Divergences between the N-fold product measures, from single-site values.

    Closed forms (never by enumeration):
    ``KL_N = N KL``, ``D_alpha,N = N D_alpha``,
    ``chi2_N = (1 + chi2)^N - 1`` and
    ``H_N = sqrt(2 - 2 (1 - H^2/2)^N)``.
    The chi-squared form is evaluated in the log domain, so very large N
    returns ``+inf`` rather than overflowing.  Total variation has no product
    closed form and is reported as None.
    """
    if n < 1 or int(n) != n:
        raise ParameterError(f"N must be a positive integer, got {n!r}")
    n = int(n)
    kl_1 = relative_entropy(q, p)
    renyi_1 = renyi_divergence(q, p, alpha)
    chi2_1 = chi_squared(q, p)
    h_1 = hellinger(q, p)

    log_chi2_base = math.log1p(chi2_1)
    chi2_n = math.inf if n * log_chi2_base > 700.0 else math.expm1(n * log_chi2_base)
    h2_half = 1.0 - 0.5 * h_1**2  # in [0, 1]
    h_n = math.sqrt(max(2.0 - 2.0 * h2_half**n, 0.0))

    report = DivergenceReport(
        tv=None,
        hellinger=h_n,
        kl=n * kl_1,
        renyi_alpha=alpha,
        renyi=n * renyi_1,
        chi2=chi2_n,
    )
    report.validate_chain()
    return report


@dataclass(frozen=True)
class ClassicalBounds:
    """Half-widths of the six classical QoI bounds.

    Each field B satisfies ``|E_q f - E_p f| <= B``.  They are reported
    per-bound without clamping against each other, so e.g. the Scheffe bound
    equals ``sup|f|`` even when p = q.
    """

    ckp: float
    pinsker: float
    pinsker_alpha: float
    scheffe: float
    chapman_robbins: float
    le_cam: float
    hellinger_improved: float

    def as_dict(self) -> dict:
        return {
            "ckp": self.ckp,
            "pinsker": self.pinsker,
            "pinsker_alpha": self.pinsker_alpha,
            "scheffe": self.scheffe,
            "chapman_robbins": self.chapman_robbins,
            "le_cam": self.le_cam,
            "hellinger_improved": self.hellinger_improved,
        }


def classical_qoi_bounds(
    p: DiscreteDistribution,
    q: DiscreteDistribution,
    f: Observable,
    alpha: float = 0.5,
) -> ClassicalBounds:
    """The six classical bounds on ``|E_q(f) - E_p(f)|``.

    ``alpha`` is the order of the generalized Pinsker bound and must lie in
    (0, 1]; at alpha = 1 it coincides with the CKP bound.  The Hellinger
    bound uses the variance-based form with the optimal centering shift,
    ``sqrt(2) H sqrt(Var_p f + Var_q f + (E_q f - E_p f)^2 / 2)``, which is
    never worse than the second-moment form (see
    :func:`dashti_stuart_half_width`).
    """
    if not (0.0 < alpha <= 1.0):
        raise ParameterError(
            f"generalized Pinsker order must be in (0, 1], got {alpha!r}"
        )
    f._check_aligned(p)
    f._check_aligned(q)
    sup = f.sup_norm
    r = relative_entropy(q, p)
    d_alpha = r if alpha == 1.0 else renyi_divergence(q, p, alpha)
    chi2 = chi_squared(q, p)
    h = hellinger(q, p)
    gap = f.expectation(q) - f.expectation(p)

    return ClassicalBounds(
        ckp=sup * math.sqrt(2.0 * r),
        pinsker=sup * math.sqrt(2.0 * d_alpha / alpha),
        pinsker_alpha=alpha,
        scheffe=sup * (2.0 - math.exp(-r)),
        chapman_robbins=math.sqrt(f.variance(p)) * math.sqrt(chi2),
        le_cam=2.0 * sup * h * math.sqrt(max(1.0 - 0.25 * h**2, 0.0)),
        hellinger_improved=math.sqrt(2.0)
        * h
        * math.sqrt(f.variance(p) + f.variance(q) + 0.5 * gap**2),
    )


def dashti_stuart_half_width(
    p: DiscreteDistribution, q: DiscreteDistribution, f: Observable
) -> float:
    """Second-moment Hellinger bound ``sqrt(2) H sqrt(E_p f^2 + E_q f^2)``."""
    return (
        math.sqrt(2.0)
        * hellinger(q, p)
        * math.sqrt(f.second_moment(p) + f.second_moment(q))
    )
