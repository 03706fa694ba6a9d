"""T = 0 persistent current of a ring holding an even number of electrons.

Occupied levels are lambda = -lambda_F ... lambda_F with lambda_F = (N_e-1)/2.
Four estimates of the total current are produced:

* ``exact_sum``   sum of chi(mu, lambda+beta) + chi(mu, -lambda+beta), units 1/(2 pi R)
* ``linearized_c``  c(mu) = sum of j(mu, lambda), units I_max = beta/(pi R)
* ``integral_c``   lambda_F / sqrt(mu**2 + lambda_F**2)
* ``closed_form``  k / sqrt(1 + k**2), k = lambda_F / mu

Sums go through ``math.fsum`` so millions of terms accumulate no drift.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateModeError, OverflowGuardError, RingError
from .ring import HalfOddInteger, RingConfig

DEFAULT_MAX_ELECTRONS = 10_000_000
J_MAX = 0.5 / 0.75**1.5  # j(1/sqrt(2), 1/2)


def compensated_sum(values) -> float:
    arr = np.asarray(values, dtype=float)
    return math.fsum(arr.ravel().tolist())


def j_kernel(mu, lam):
    """mu**2 / (mu**2 + lambda**2)**1.5, elementwise."""
    mu_a = np.asarray(mu, dtype=float)
    lam_a = np.asarray(lam, dtype=float)
    h = np.hypot(mu_a, lam_a)
    if np.any(h == 0):
        raise DegenerateModeError("j is undefined at mu = lambda = 0")
    out = (mu_a / h) ** 2 / h
    return float(out) if out.ndim == 0 else out


def _pair_sum(mu: float, lam: np.ndarray, beta: float) -> np.ndarray:
    # chi(mu, lam+beta) + chi(mu, beta-lam) rewritten without cancellation:
    #   = 4 mu^2 lam beta / (h1 h2 (nu1 h2 - nu2 h1))
    # valid while nu2 = beta - lam < 0 <= nu1 so the denominator is a sum.
    nu1 = lam + beta
    nu2 = beta - lam
    h1 = np.hypot(mu, nu1)
    h2 = np.hypot(mu, nu2)
    if np.any(h1 == 0) or np.any(h2 == 0):
        raise DegenerateModeError("a paired mode has zero energy")
    direct = nu1 / h1 + nu2 / h2
    with np.errstate(divide="ignore", invalid="ignore"):
        stable = 4 * mu * mu * lam * beta / (h1 * h2 * (nu1 * h2 - nu2 * h1))
    use_stable = (nu2 < 0) & (nu1 > 0) & (mu > 0)
    return np.where(use_stable, stable, direct)


def pair_sum_exact(config: RingConfig, lam) -> float:
    """chi(mu, lambda + beta) + chi(mu, -lambda + beta)."""
    lam = abs(HalfOddInteger.parse(lam))
    config.check_mode(lam)
    config.check_mode(-lam)
    return float(_pair_sum(config.mu, np.array([float(lam)]), config.beta)[0])


@dataclass(frozen=True)
class OccupationSpec:
    n_electrons: int
    lambda_F: HalfOddInteger = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "lambda_F", HalfOddInteger.fermi_level(self.n_electrons))
        object.__setattr__(self, "n_electrons", int(self.n_electrons))

    @classmethod
    def from_lambda_f(cls, lambda_F) -> "OccupationSpec":
        lf = HalfOddInteger.parse(lambda_F)
        if lf.twice_value <= 0:
            raise RingError(f"lambda_F must be positive, got {lf}")
        return cls(lf.twice_value + 1)

    @property
    def levels(self) -> np.ndarray:
        """Positive occupied lambdas 1/2 ... lambda_F as floats."""
        return (np.arange(1, self.lambda_F.twice_value + 1, 2, dtype=float)) / 2


@dataclass(frozen=True)
class PersistentResult:
    mu: float
    beta: float
    lambda_F: HalfOddInteger
    n_electrons: int
    exact_sum: float
    linearized_c: float
    integral_c: float
    closed_form: float
    edge_closed_form: float
    i_max: float

    @property
    def k(self) -> float:
        return float(self.lambda_F) / self.mu

    @property
    def exact_over_imax(self) -> float:
        """exact_sum expressed in units of I_max (exact_sum / (2 beta))."""
        return self.exact_sum / (2 * self.beta) if self.beta else math.nan

    def as_row(self) -> dict:
        return {
            "mu": self.mu,
            "beta": self.beta,
            "n_electrons": self.n_electrons,
            "lambda_F": str(self.lambda_F),
            "k": self.k,
            "exact_sum": self.exact_sum,
            "exact_over_imax": self.exact_over_imax if self.beta else None,
            "linearized_c": self.linearized_c,
            "integral_c": self.integral_c,
            "closed_form": self.closed_form,
            "edge_closed_form": self.edge_closed_form,
            "i_max": self.i_max,
        }


def closed_form(k: float) -> float:
    """k / sqrt(1 + k**2)."""
    if k < 0:
        raise RingError("k must be non-negative")
    return k / math.sqrt(1 + k * k) if math.isfinite(k) else 1.0


def integral_approximation(mu: float, upper: float) -> float:
    """Integral of j(mu, x) over 0 <= x <= upper."""
    return upper / math.hypot(mu, upper)


def linearized_c(mu: float, lambda_F) -> float:
    occ = OccupationSpec.from_lambda_f(lambda_F)
    return compensated_sum(j_kernel(mu, occ.levels))


def persistent_current(
    config: RingConfig, occ: OccupationSpec, max_electrons: int = DEFAULT_MAX_ELECTRONS
) -> PersistentResult:
    """Total current from all occupied modes, with its three approximations.

    ``edge_closed_form`` uses the filled edge N_e/2 = lambda_F + 1/2 as the
    integration limit; since the half-odd sum is a midpoint rule on
    [0, N_e/2], it tracks ``linearized_c`` much more closely than
    ``integral_c``.
    """
    if occ.n_electrons > max_electrons:
        raise OverflowGuardError(f"N_e = {occ.n_electrons} exceeds the cap {max_electrons}")
    if config.mu <= 0:
        raise RingError("persistent current approximations need mu > 0")
    lam = occ.levels
    lf = float(occ.lambda_F)
    mu = config.mu
    exact = compensated_sum(_pair_sum(mu, lam, config.beta))
    lin = compensated_sum(j_kernel(mu, lam))
    return PersistentResult(
        mu=mu,
        beta=config.beta,
        lambda_F=occ.lambda_F,
        n_electrons=occ.n_electrons,
        exact_sum=exact,
        linearized_c=lin,
        integral_c=integral_approximation(mu, lf),
        closed_form=closed_form(lf / mu),
        edge_closed_form=closed_form(occ.n_electrons / (2 * mu)),
        i_max=config.beta / (math.pi * config.radius_natural),
    )


def nonrel_persistent(k: float) -> float:
    """Schroedinger-limit total current in units of I_max: just k."""
    if k < 0:
        raise RingError("k must be non-negative")
    return float(k)


def locate_j_maximum(mu_max: float = 5.0, lambda_min: float = 0.5, lambda_max: float = 10.0):
    """Maximize j over 0 < mu <= mu_max, lambda >= lambda_min.

    Coarse grid first, then a bounded 1-D refinement in each coordinate.
    Returns ``(mu, lambda, value)``.
    """
    from scipy.optimize import minimize_scalar

    mus = np.linspace(mu_max / 400, mu_max, 400)
    lams = np.linspace(lambda_min, lambda_max, 200)
    grid = j_kernel(mus[:, None], lams[None, :])
    i, k = np.unravel_index(np.argmax(grid), grid.shape)
    m, l = mus[i], lams[k]
    dm = mus[1] - mus[0]
    dl = lams[1] - lams[0]
    for _ in range(3):
        r = minimize_scalar(
            lambda x: -j_kernel(x, l),
            bounds=(max(m - dm, 1e-12), min(m + dm, mu_max)),
            method="bounded",
            options={"xatol": 1e-10},
        )
        m = r.x
        r = minimize_scalar(
            lambda y: -j_kernel(m, y),
            bounds=(max(l - dl, lambda_min), l + dl),
            method="bounded",
            options={"xatol": 1e-10},
        )
        l = r.x
    return float(m), float(l), float(j_kernel(m, l))


@dataclass
class SweepResult:
    """Rows of c(mu) for one lambda_F / mu ratio."""

    k_ratio: float
    beta: float
    rows: list = field(default_factory=list)

    def column(self, name: str) -> np.ndarray:
        return np.array([r[name] for r in self.rows if r.get("error") is None], dtype=float)

    @property
    def errors(self) -> list:
        return [r for r in self.rows if r.get("error") is not None]

    def spread(self, name: str = "linearized_c") -> float:
        col = self.column(name)
        return float(col.max() - col.min())

    def is_monotone_decreasing(self, name: str = "linearized_c") -> bool:
        return bool(np.all(np.diff(self.column(name)) < 0))


def log_mu_grid(mu_min: float, mu_max: float, points: int, k_ratio: float | None = None) -> np.ndarray:
    """Log-spaced mu values; with ``k_ratio`` each is moved so k_ratio*mu is half-odd.

    Snapping holds lambda_F / mu at exactly ``k_ratio`` along the sweep.
    Without it, rounding lambda_F adds O(1/mu) jitter to c(mu), larger than
    the true mu dependence. Snapped points stay inside [mu_min, mu_max].
    """
    if not (0 < mu_min <= mu_max) or points < 1:
        raise RingError("need 0 < mu_min <= mu_max and points >= 1")
    grid = np.geomspace(mu_min, mu_max, points)
    if k_ratio is None:
        return grid
    if k_ratio <= 0:
        raise RingError("k_ratio must be positive")
    out = []
    for m in grid:
        lf = HalfOddInteger.nearest(k_ratio * m)
        x = float(lf) / k_ratio
        if x > mu_max * (1 + 1e-12):
            x = (float(lf) - 1) / k_ratio
        elif x < mu_min * (1 - 1e-12):
            x = (float(lf) + 1) / k_ratio
        out.append(x)
    return np.array(out)


def sweep_row(mu: float, k_ratio: float, beta: float) -> dict:
    row = {"mu": float(mu), "k_ratio": k_ratio, "beta": beta}
    try:
        lf = HalfOddInteger.nearest(k_ratio * mu)
        if lf.twice_value <= 0:
            raise RingError(f"lambda_F rounds to {lf} at mu={mu}")
        res = persistent_current(RingConfig(float(mu), beta), OccupationSpec.from_lambda_f(lf))
    except RingError as exc:
        row.update(error=f"{type(exc).__name__}: {exc}")
        return row
    row.update(
        lambda_F=str(res.lambda_F),
        n_electrons=res.n_electrons,
        linearized_c=res.linearized_c,
        integral_c=res.integral_c,
        difference=res.linearized_c - res.integral_c,
        edge_closed_form=res.edge_closed_form,
        edge_difference=res.linearized_c - res.edge_closed_form,
        error=None,
    )
    return row


def c_sweep(mu_grid, k_ratio: float, beta: float = 1e-8) -> SweepResult:
    """c(mu) along ``mu_grid`` with lambda_F = nearest half-odd to k_ratio*mu.

    Failing points become rows with an ``error`` entry; the sweep goes on.
    """
    result = SweepResult(k_ratio=float(k_ratio), beta=beta)
    result.rows = [sweep_row(m, float(k_ratio), beta) for m in mu_grid]
    return result
