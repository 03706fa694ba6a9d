"""Partial currents of single ring modes.

Currents are dimensionless by default: chi = 2*pi*R*I, i.e. in units of
1/(2 pi R). ``current_natural`` multiplies back by 1/(2 pi R).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dirac import DEFAULT_NODES, SuperpositionState, angle_nodes, build_spinor, current_density
from .errors import DegenerateModeError, RingError
from .ring import HalfOddInteger, RingConfig, nu


def chi(mu, nu_):
    """Dimensionless current nu / sqrt(mu**2 + nu**2).

    Works elementwise on arrays. Raises DegenerateModeError at mu = nu = 0.
    """
    mu_a = np.asarray(mu, dtype=float)
    nu_a = np.asarray(nu_, dtype=float)
    if np.any(mu_a < 0):
        raise RingError("mu must be non-negative")
    h = np.hypot(mu_a, nu_a)
    if np.any(h == 0):
        raise DegenerateModeError("chi is undefined at mu = nu = 0")
    out = nu_a / h
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class ModeCurrent:
    lam: HalfOddInteger
    nu: float
    energy: float
    chi: float
    current_natural: float

    def as_row(self, config: RingConfig) -> dict:
        row = {
            "mu": config.mu,
            "beta": config.beta,
            "lambda": str(self.lam),
            "nu": self.nu,
            "energy_R": self.energy,
            "chi": self.chi,
            "current_natural": self.current_natural,
        }
        # I / I_max with I_max = beta/(pi R)
        row["current_over_imax"] = self.chi / (2 * config.beta) if config.beta else None
        return row


def partial_current(config: RingConfig, lam) -> ModeCurrent:
    """I_lambda = (1/(2 pi R)) chi(mu, beta + lambda)."""
    lam = config.check_mode(lam)
    n = nu(config, lam)
    c = chi(config.mu, n)
    return ModeCurrent(lam, n, math.hypot(config.mu, n), c, c / (2 * math.pi * config.radius_natural))


def superposition_current(state: SuperpositionState, nodes: int = DEFAULT_NODES) -> ModeCurrent:
    """Current R psibar gamma^phi psi of a mixed-polarization state.

    Computed from the spinors themselves (angle average of the density) so
    it is an independent check on ``partial_current``.
    """
    state.check_normalized()
    cfg = state.config
    lam = cfg.check_mode(state.lam)
    R = cfg.radius_natural
    phi = angle_nodes(nodes)
    psi = state.evaluate(phi)
    density = current_density(psi, psi, phi, R)
    i_nat = float(density.mean().real)
    n = nu(cfg, lam)
    return ModeCurrent(lam, n, math.hypot(cfg.mu, n), 2 * math.pi * R * i_nat, i_nat)


def polarized_current(config: RingConfig, lam, kappa: int, nodes: int = DEFAULT_NODES) -> float:
    """chi computed from the density of a single U+ or U- spinor."""
    s = build_spinor(config, lam, kappa)
    phi = angle_nodes(nodes)
    psi = s.evaluate(phi)
    R = config.radius_natural
    return float(2 * math.pi * R * current_density(psi, psi, phi, R).mean().real)


def _energy(mu: float, beta: float, lam: float) -> float:
    return math.hypot(mu, beta + lam)


def current_energy_derivative_check(config: RingConfig, lam, h: float) -> float:
    """|chi - dE/dbeta| with dE/dbeta from a centered difference of step h.

    Both sides are in units of 1/(2 pi R) (E taken as E*R). The residual is
    the O(h**2) truncation error of the stencil.
    """
    if h <= 0:
        raise ValueError(f"h must be positive, got {h}")
    lam = config.check_mode(lam)
    l = float(lam)
    for b in (config.beta - h, config.beta + h):
        if config.mu == 0 and b + l == 0:
            raise DegenerateModeError("finite-difference stencil touches a zero-energy mode")
    fd = (_energy(config.mu, config.beta + h, l) - _energy(config.mu, config.beta - h, l)) / (2 * h)
    return abs(partial_current(config, lam).chi - fd)


def derivative_convergence_order(config: RingConfig, lam, steps=(1e-3, 5e-4, 2.5e-4)) -> list[float]:
    """Observed orders log2(r(h)/r(h/2)) for successive halvings of h."""
    res = [current_energy_derivative_check(config, lam, h) for h in steps]
    return [math.log(a / b) / math.log(h0 / h1) for a, b, h0, h1 in zip(res, res[1:], steps, steps[1:])]


@dataclass(frozen=True)
class NonRelativisticLimit:
    energy: float  # (E - M) R in the Schroedinger limit, nu**2/(2 mu)
    chi: float  # nu/mu


def nonrel_limits(config: RingConfig, lam) -> NonRelativisticLimit:
    if config.mu <= 0:
        raise RingError("the non-relativistic limit needs mu > 0")
    n = nu(config, lam)
    return NonRelativisticLimit(n * n / (2 * config.mu), n / config.mu)


def nonrel_window_deviation(mu: float = 1.0, half_width: float = 0.5, points: int = 20001):
    """Largest |chi(mu, nu) - nu/mu| on |nu| <= half_width * mu.

    Scanned on a uniform grid that includes both endpoints. Returns
    ``(sup, nu_at_sup)``.
    """
    if mu <= 0:
        raise RingError("mu must be positive")
    grid = np.linspace(-half_width * mu, half_width * mu, points)
    dev = np.abs(chi(mu, grid) - grid / mu)
    i = int(np.argmax(dev))
    return float(dev[i]), float(grid[i])


def richardson_derivative_residual(config: RingConfig, lam, h: float = 1e-3) -> float:
    """|chi - dE/dbeta| with the centered difference extrapolated over h, h/2."""
    lam = config.check_mode(lam)
    l = float(lam)

    def d(step):
        return (_energy(config.mu, config.beta + step, l) - _energy(config.mu, config.beta - step, l)) / (2 * step)

    return abs(partial_current(config, lam).chi - (4 * d(h / 2) - d(h)) / 3)
