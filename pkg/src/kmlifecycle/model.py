"""Domain types, parameter validation, and detection of exact hierarchy closure.

The preference family evaluated here applies a power transform (exponent
``kappa = (1 - alpha) / rho``) to an aggregated lifetime utility index, so the
pair ``(alpha, rho)`` controls both risk aversion and intertemporal
substitution.  ``alpha = 1`` is the log-transform case and is dispatched to a
separate coefficient system rather than approximated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np


class ValidationError(ValueError):
    """A parameter bundle violates a documented invariant."""


class NonPositiveSigma(ValidationError):
    pass


class RhoOutOfRange(ValidationError):
    pass


class NonPositiveHorizon(ValidationError):
    pass


class OutOfDomain(ValueError):
    """A time or state argument lies outside the solved domain."""


#: Tolerance under which kappa counts as a positive integer (exact closure).
INTEGER_CLOSURE_TOL = 1e-9

#: Variant tags used for dispatch throughout the package.
GENERAL = "general"
UNIT_RRA = "unit-rra"


@dataclass(frozen=True)
class MarketParams:
    """Constant market coefficients: risk-free rate, risk premium, volatility."""

    r: float
    risk_premium: float
    sigma: float

    def merton_rate(self, alpha: float) -> float:
        """r + lambda^2 / (2 alpha sigma^2), the drift block shared by all solvers."""
        return self.r + self.risk_premium**2 / (2.0 * alpha * self.sigma**2)


@dataclass(frozen=True)
class KmPreferences:
    """Preference constants; ``kappa`` is always derived, never stored."""

    alpha: float
    rho: float
    delta: float
    horizon_T: float

    @property
    def kappa(self) -> float:
        return (1.0 - self.alpha) / self.rho

    @property
    def is_unit_rra(self) -> bool:
        return self.alpha == 1.0


@dataclass(frozen=True)
class SolverConfig:
    """Numerical knobs for the coefficient solve and Monte Carlo runs.

    ``truncation_K`` may be an integer depth, the string ``"exact"`` (require
    exact closure and use it), or None for the automatic default
    ``ceil(kappa) + 10`` when the hierarchy does not close exactly.
    """

    ode_steps: int = 4000
    truncation_K: int | str | None = None
    convergence_tol: float = 1e-6
    mc_paths: int = 100_000
    mc_seed: int = 20240802
    x0: float = 1000.0


@dataclass(frozen=True)
class ValidatedBundle:
    market: MarketParams
    prefs: KmPreferences
    cfg: SolverConfig
    variant: str  # GENERAL or UNIT_RRA


@dataclass(frozen=True)
class CoefficientTable:
    """Solved time grid with the value coefficient and its hierarchy.

    For the general variant ``A`` holds A(t) and ``hierarchy[k-1]`` holds
    A^(k)(t), k = 1..K.  For the unit-RRA variant the same slots hold B(t) and
    B^(k)(t), and ``L`` holds the additive log-wealth coefficient L(t).
    """

    times: np.ndarray          # ascending, times[0] = 0, times[-1] = T
    A: np.ndarray              # shape (M+1,)
    hierarchy: np.ndarray      # shape (K, M+1)
    variant: str
    market: MarketParams
    prefs: KmPreferences
    L: np.ndarray | None = None
    method: str = "hierarchy"  # solver backend that produced the table

    @property
    def K(self) -> int:
        return self.hierarchy.shape[0]

    def check_invariants(self) -> None:
        if not (self.A[-1] == 1.0 and np.all(self.hierarchy[:, -1] == 1.0)):
            raise ValidationError("terminal conditions A(T) = A^(k)(T) = 1 violated")
        if np.any(self.A <= 0.0) or np.any(self.hierarchy <= 0.0):
            raise ValidationError("coefficients must be strictly positive on the grid")
        if self.variant == UNIT_RRA:
            if self.L is None or self.L[-1] != 0.0:
                raise ValidationError("unit-RRA table requires L with L(T) = 0")


def validation_errors(market: MarketParams, prefs: KmPreferences,
                      cfg: SolverConfig) -> list[ValidationError]:
    """Collect every invariant violation; empty list means the bundle is valid."""
    errors: list[ValidationError] = []
    if not (market.sigma > 0.0) or not math.isfinite(market.sigma):
        errors.append(NonPositiveSigma(f"sigma = {market.sigma} must be > 0"))
    if not math.isfinite(market.r):
        errors.append(ValidationError(f"r = {market.r} must be finite"))
    if not math.isfinite(market.risk_premium) or market.risk_premium < 0.0:
        errors.append(ValidationError(
            f"risk_premium = {market.risk_premium} must be finite and >= 0"))
    if not (prefs.rho < 1.0) or prefs.rho == 0.0 or not math.isfinite(prefs.rho):
        errors.append(RhoOutOfRange(f"rho = {prefs.rho} must satisfy rho < 1, rho != 0"))
    if not (prefs.horizon_T > 0.0) or not math.isfinite(prefs.horizon_T):
        errors.append(NonPositiveHorizon(f"horizon_T = {prefs.horizon_T} must be > 0"))
    if prefs.alpha < 0.0 or not math.isfinite(prefs.alpha):
        errors.append(ValidationError(f"alpha = {prefs.alpha} must be >= 0"))
    if not (0.0 <= prefs.delta <= 1.0):
        errors.append(ValidationError(f"delta = {prefs.delta} must lie in [0, 1]"))
    if cfg.ode_steps < 100:
        errors.append(ValidationError(f"ode_steps = {cfg.ode_steps} must be >= 100"))
    if isinstance(cfg.truncation_K, int) and cfg.truncation_K < 1:
        errors.append(ValidationError(f"truncation_K = {cfg.truncation_K} must be >= 1"))
    if isinstance(cfg.truncation_K, str) and cfg.truncation_K != "exact":
        errors.append(ValidationError(
            f"truncation_K = {cfg.truncation_K!r} must be an integer, 'exact', or None"))
    if not (cfg.convergence_tol > 0.0):
        errors.append(ValidationError(
            f"convergence_tol = {cfg.convergence_tol} must be > 0"))
    if not (cfg.x0 > 0.0):
        errors.append(ValidationError(f"x0 = {cfg.x0} must be > 0"))
    if cfg.mc_paths < 1:
        errors.append(ValidationError(f"mc_paths = {cfg.mc_paths} must be >= 1"))
    return errors


def validate(market: MarketParams | ValidatedBundle,
             prefs: KmPreferences | None = None,
             cfg: SolverConfig | None = None) -> ValidatedBundle:
    """Validate a parameter bundle and tag it with its solver variant.

    Idempotent: passing an already-validated bundle returns it unchanged.
    Raises the first violation found (use :func:`validation_errors` to collect
    all of them).
    """
    if isinstance(market, ValidatedBundle):
        return market
    if prefs is None or cfg is None:
        raise TypeError("validate() requires (market, prefs, cfg) or a ValidatedBundle")
    errors = validation_errors(market, prefs, cfg)
    if errors:
        raise errors[0]
    variant = UNIT_RRA if prefs.is_unit_rra else GENERAL
    return ValidatedBundle(market=market, prefs=prefs, cfg=cfg, variant=variant)


def exact_closure_order(prefs: KmPreferences,
                        tol: float = INTEGER_CLOSURE_TOL) -> int | None:
    """Return k_bar when kappa is a positive integer within ``tol``, else None.

    At k = k_bar the hierarchy prefactors vanish identically, pinning
    A^(k_bar) to 1 and closing the otherwise infinite system after k_bar
    equations.
    """
    if prefs.is_unit_rra:
        return None
    kappa = prefs.kappa
    k_bar = round(kappa)
    if k_bar >= 1 and abs(kappa - k_bar) < tol:
        return k_bar
    return None


def resolve_truncation(prefs: KmPreferences, cfg: SolverConfig) -> tuple[int, int | None]:
    """Pick the hierarchy depth K actually solved.

    Returns ``(K, k_bar)`` where ``k_bar`` is the exact-closure order when it
    is available *and* admissible under ``cfg.truncation_K``.
    """
    k_bar = exact_closure_order(prefs)
    spec = cfg.truncation_K
    if spec == "exact":
        if k_bar is None:
            raise ValidationError(
                "truncation_K='exact' requested but kappa is not a positive integer")
        return k_bar, k_bar
    if spec is None:
        if k_bar is not None:
            return k_bar, k_bar
        kappa = 0.0 if prefs.is_unit_rra else prefs.kappa
        return max(1, math.ceil(kappa) + 10), None
    K = int(spec)
    if k_bar is not None and k_bar <= K:
        return k_bar, k_bar
    return K, None


def with_rho(prefs: KmPreferences, rho: float) -> KmPreferences:
    """Copy of ``prefs`` with a substituted EIS exponent."""
    return replace(prefs, rho=rho)
