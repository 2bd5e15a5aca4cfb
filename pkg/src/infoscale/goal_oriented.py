"""Goal-oriented divergences: CGF-based two-sided bounds on QoI gaps.

Given a baseline measure P, an observable f, and a relative-entropy budget R,
the upper bound is ``inf_{c>0} (K(c) + R) / c`` with K the centered cumulant
generating function of f under P, and the lower bound is the mirror image in
``-c``.  Those optima sandwich ``E_q(f) - E_p(f)`` for every q with
``R(q || p) <= R``, and scale correctly under tensorization.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from .divergences import DiscreteDistribution, Observable, relative_entropy
from .errors import (
    CgfDomainError,
    ParameterError,
    UnboundedObservableError,
)
from .optimize import minimize_positive_scalar

# Entropy budgets below this are treated as exactly zero: the infimum is then
# a limit at c -> 0+ and equals 0, not an attained minimum.
_ZERO_BUDGET = 1e-300
_VAR_FD_STEP = 1e-4


@dataclass(frozen=True, eq=False)
class EmpiricalCgf:
    """Centered CGF of an observable under a finite-support distribution.

    ``evaluate(c)`` returns ``log sum_i p_i exp(c (f_i - E_p f))`` using a
    max-exponent shift, so it stays finite for any real c (bounded
    observables have an infinite CGF domain).
    """

    dist: DiscreteDistribution
    observable: Observable

    def __post_init__(self):
        self.observable._check_aligned(self.dist)

    @property
    def domain_bound(self) -> float:
        return math.inf

    @property
    def mean(self) -> float:
        return self.observable.expectation(self.dist)

    def variance(self) -> float:
        return self.observable.variance(self.dist)

    def evaluate(self, c: float) -> float:
        w = self.dist.weights
        mask = w > 0
        centered = self.observable.values[mask] - self.mean
        exponents = c * centered
        shift = float(np.max(exponents))
        return shift + math.log(float(np.sum(w[mask] * np.exp(exponents - shift))))


@dataclass(frozen=True, eq=False)
class AnalyticCgf:
    """A caller-supplied centered CGF ``c -> K(c)`` on the open domain (-c0, c0).

    The contract K(0) = 0, K'(0) = 0 (centered) and convexity is spot-checked
    at construction; evaluations outside the stated domain raise
    CgfDomainError rather than being clamped.
    """

    fn: Callable[[float], float]
    domain_bound: float = math.inf
    check_contract: bool = True

    def __post_init__(self):
        if not (self.domain_bound > 0):
            raise UnboundedObservableError(
                "analytic CGF has an empty positive domain"
            )
        if self.check_contract:
            self._spot_check()

    def _spot_check(self) -> None:
        at_zero = self.fn(0.0)
        if abs(at_zero) > 1e-10:
            raise ParameterError(f"centered CGF must vanish at 0, got {at_zero!r}")
        h = min(1e-6, self.domain_bound / 4.0)
        slope = (self.fn(h) - self.fn(-h)) / (2.0 * h)
        if abs(slope) > 1e-6:
            raise ParameterError(
                f"centered CGF must have zero slope at 0, got {slope!r}"
            )
        # Midpoint convexity at a few deterministic triples inside the domain.
        probe = min(1.0, self.domain_bound / 2.0)
        for a, b in ((-probe, probe), (0.0, probe), (-probe, 0.0)):
            mid = self.fn(0.5 * (a + b))
            if mid > 0.5 * (self.fn(a) + self.fn(b)) + 1e-10:
                raise ParameterError("centered CGF failed the convexity spot check")

    def variance(self) -> float:
        h = min(_VAR_FD_STEP, self.domain_bound / 4.0)
        return max((self.fn(h) - 2.0 * self.fn(0.0) + self.fn(-h)) / h**2, 0.0)

    def evaluate(self, c: float) -> float:
        if abs(c) >= self.domain_bound:
            raise CgfDomainError(
                f"CGF argument {c!r} outside the open domain "
                f"(-{self.domain_bound!r}, {self.domain_bound!r})"
            )
        return self.fn(c)


CgfSource = Union[EmpiricalCgf, AnalyticCgf]


def centered_cgf(source: CgfSource, c: float) -> float:
    """Evaluate the centered cumulant generating function at ``c``."""
    return source.evaluate(c)


@dataclass(frozen=True)
class GoalBound:
    """Two-sided goal-oriented bound on a QoI gap.

    ``xi_minus <= E_q(f) - E_p(f) <= xi_plus``.  The optimizers ``c_star_*``
    are 0 in the degenerate cases (zero entropy budget or constant
    observable) where the infimum is a limit at c -> 0+ rather than attained.
    """

    xi_plus: float
    xi_minus: float
    c_star_plus: float
    c_star_minus: float
    linearized_half_width: float

    def as_dict(self) -> dict:
        return {
            "xi_plus": self.xi_plus,
            "xi_minus": self.xi_minus,
            "c_star_plus": self.c_star_plus,
            "c_star_minus": self.c_star_minus,
            "linearized": self.linearized_half_width,
        }

    def scaled(self, factor: float) -> "GoalBound":
        """Scale the bound values (not the optimizers) by ``factor``."""
        return GoalBound(
            xi_plus=self.xi_plus * factor,
            xi_minus=self.xi_minus * factor,
            c_star_plus=self.c_star_plus,
            c_star_minus=self.c_star_minus,
            linearized_half_width=self.linearized_half_width * factor,
        )


def linearized_half_width(var_p_f: float, relative_entropy_value: float) -> float:
    """Leading-order half width ``sqrt(Var_p f) sqrt(2 R)``."""
    if var_p_f < 0 or relative_entropy_value < 0:
        raise ParameterError("variance and relative entropy must be nonnegative")
    return math.sqrt(var_p_f) * math.sqrt(2.0 * relative_entropy_value)


def _optimizer_cap(source: CgfSource) -> float:
    bound = source.domain_bound
    if math.isinf(bound):
        return 1e12
    # Stay strictly inside the open domain.
    return bound * (1.0 - 1e-9)


def xi_bounds(
    source: CgfSource,
    relative_entropy_value: float,
    *,
    variance: float | None = None,
) -> GoalBound:
    """Optimize the goal-oriented divergences for a given entropy budget.

    ``xi_plus = inf_{c>0} (K(c) + R)/c`` and
    ``xi_minus = sup_{c>0} -(K(-c) + R)/c`` where K is the centered CGF.
    The objective is quasiconvex for convex K, so a geometric bracket plus
    golden-section search finds the optimum; both degenerate cases (R = 0 or
    a constant observable) short-circuit to exactly (0, 0).

    ``variance`` overrides the variance used in the linearized half width;
    by default empirical sources use the exact variance and analytic sources
    a central finite difference of K at 0.
    """
    if relative_entropy_value < 0:
        raise ParameterError(
            f"relative entropy must be nonnegative, got {relative_entropy_value!r}"
        )
    var = source.variance() if variance is None else variance
    if relative_entropy_value < _ZERO_BUDGET or var <= 0.0:
        return GoalBound(0.0, 0.0, 0.0, 0.0, 0.0)

    cap = _optimizer_cap(source)
    c_init = min(1.0, cap / 2.0)
    r = relative_entropy_value

    try:
        c_plus, xi_plus = minimize_positive_scalar(
            lambda c: (source.evaluate(c) + r) / c, c_init=c_init, hi_cap=cap
        )
        c_minus, neg_xi_minus = minimize_positive_scalar(
            lambda c: (source.evaluate(-c) + r) / c, c_init=c_init, hi_cap=cap
        )
    except ValueError as exc:
        raise UnboundedObservableError(
            "the centered CGF is non-finite on the whole optimization range"
        ) from exc
    return GoalBound(
        xi_plus=xi_plus,
        xi_minus=-neg_xi_minus,
        c_star_plus=c_plus,
        c_star_minus=c_minus,
        linearized_half_width=linearized_half_width(var, r),
    )


def xi_tensorized(
    p: DiscreteDistribution,
    q: DiscreteDistribution,
    g: Observable,
    n: int,
) -> GoalBound:
    """Per-site goal-oriented bound for the N-fold product problem.

    Both the centered CGF and the relative entropy of product measures scale
    linearly in N for the additive observable ``sum_k g(x_k)``, so the
    per-site bound ``Xi(Q_N || P_N; N f_N) / N`` equals the single-site bound
    and is computed at the single-site level, independent of N.
    """
    if n < 1 or int(n) != n:
        raise ParameterError(f"N must be a positive integer, got {n!r}")
    return xi_bounds(EmpiricalCgf(p, g), relative_entropy(q, p))


@dataclass(frozen=True, eq=False)
class ExponentialFamily:
    """An exponential family given by its log-normalizer F and gradient.

    ``densities dP^theta/dP^0 = exp(t(x) . theta - F(theta))``; F is convex
    and ``grad F(theta) = E_theta(t)``.  ``param_domain`` optionally restricts
    the admissible parameter vectors; evaluations outside it raise.
    """

    log_normalizer: Callable[[np.ndarray], float]
    grad_log_normalizer: Callable[[np.ndarray], np.ndarray]
    dim: int
    param_domain: Callable[[np.ndarray], bool] | None = None
    observable_direction: np.ndarray | None = None

    def _check_param(self, theta: np.ndarray) -> np.ndarray:
        theta = np.asarray(theta, dtype=float)
        if theta.shape != (self.dim,):
            raise ParameterError(
                f"parameter must have shape ({self.dim},), got {theta.shape}"
            )
        if self.param_domain is not None and not self.param_domain(theta):
            raise ParameterError(f"parameter {theta!r} outside the family domain")
        return theta

    def F(self, theta: np.ndarray) -> float:
        return float(self.log_normalizer(self._check_param(theta)))

    def grad_F(self, theta: np.ndarray) -> np.ndarray:
        return np.asarray(self.grad_log_normalizer(self._check_param(theta)), dtype=float)


def expfam_relative_entropy(
    fam: ExponentialFamily, theta_prime, theta
) -> float:
    """Relative entropy between family members, the Bregman divergence of F.

    ``R(P^theta' || P^theta) = (theta' - theta) . grad F(theta')
    + F(theta) - F(theta')``.
    """
    tp = np.asarray(theta_prime, dtype=float)
    t = np.asarray(theta, dtype=float)
    value = float((tp - t) @ fam.grad_F(tp)) + fam.F(t) - fam.F(tp)
    return max(value, 0.0)


def _feasible_direction_bound(fam: ExponentialFamily, theta, v) -> float:
    """Largest c0 with theta + c v inside the family domain for |c| < c0."""
    if fam.param_domain is None:
        return math.inf
    theta = np.asarray(theta, dtype=float)
    v = np.asarray(v, dtype=float)
    probe = 1e-8
    if not (
        fam.param_domain(theta + probe * v) and fam.param_domain(theta - probe * v)
    ):
        raise CgfDomainError(
            "no feasible interval of c > 0 along the observable direction"
        )
    lo, hi = probe, 1.0
    while fam.param_domain(theta + hi * v) and fam.param_domain(theta - hi * v):
        lo = hi
        hi *= 2.0
        if hi > 1e15:
            return math.inf
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if fam.param_domain(theta + mid * v) and fam.param_domain(theta - mid * v):
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-12 * max(1.0, lo):
            break
    return lo


def expfam_xi_bounds(
    fam: ExponentialFamily, theta_prime, theta, v
) -> GoalBound:
    """Goal-oriented bounds for the linear observable ``f = t(x) . v``.

    Uses the closed-form centered CGF
    ``K(c) = F(theta + c v) - F(theta) - c v . grad F(theta)`` together with
    the Bregman relative entropy, then optimizes over c as in
    :func:`xi_bounds`.
    """
    theta = np.asarray(theta, dtype=float)
    v = np.asarray(v, dtype=float)
    if v.shape != (fam.dim,):
        raise ParameterError(f"direction must have shape ({fam.dim},)")
    r = expfam_relative_entropy(fam, theta_prime, theta)
    if not np.any(v != 0.0):
        return GoalBound(0.0, 0.0, 0.0, 0.0, 0.0)

    c0 = _feasible_direction_bound(fam, theta, v)
    f_theta = fam.F(theta)
    slope = float(v @ fam.grad_F(theta))
    source = AnalyticCgf(
        fn=lambda c: fam.F(theta + c * v) - f_theta - c * slope,
        domain_bound=c0,
        check_contract=False,
    )
    return xi_bounds(source, r)
