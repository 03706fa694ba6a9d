"""Dirac spinors on an ideal ring.

Gamma matrices are in the standard (Dirac) representation, gamma^0 =
diag(1, 1, -1, -1). A mode with total angular momentum ``lambda`` has the
separated form::

    psi(t, phi) = (f1 e^{i(l-1/2)phi}, f2 e^{i(l+1/2)phi},
                   g1 e^{i(l-1/2)phi}, g2 e^{i(l+1/2)phi}) e^{-iEt}

Only the t = 0 amplitudes are stored; operators act on the known phases
analytically and the result is sampled on a uniform angle grid.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigMismatchError, DegenerateModeError, NotNormalizedError
from .ring import HalfOddInteger, RingConfig, nu

_SIGMA = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)
_ZERO2 = np.zeros((2, 2), dtype=complex)
_ID2 = np.eye(2, dtype=complex)

DEFAULT_NODES = 2048
NORM_TOL = 1e-9


@dataclass(frozen=True)
class GammaSet:
    gamma0: np.ndarray
    gamma1: np.ndarray
    gamma2: np.ndarray
    gamma3: np.ndarray
    convention: str = "standard (diagonal gamma0)"

    def __iter__(self):
        return iter((self.gamma0, self.gamma1, self.gamma2, self.gamma3))

    def __getitem__(self, mu):
        return (self.gamma0, self.gamma1, self.gamma2, self.gamma3)[mu]


def standard_gammas() -> GammaSet:
    g0 = np.block([[_ID2, _ZERO2], [_ZERO2, -_ID2]])
    gi = [np.block([[_ZERO2, s], [-s, _ZERO2]]) for s in _SIGMA]
    return GammaSet(g0, *gi)


GAMMA = standard_gammas()
METRIC = np.diag([1.0, -1.0, -1.0, -1.0])

# S3 = diag(sigma3, sigma3)/2 and K = 2 gamma0 S3
SPIN3 = 0.5 * np.diag([1, -1, 1, -1]).astype(complex)
POLARIZATION = 2 * GAMMA.gamma0 @ SPIN3


def dirac_adjoint(m: np.ndarray) -> np.ndarray:
    """gamma0 m^dagger gamma0."""
    return GAMMA.gamma0 @ m.conj().T @ GAMMA.gamma0


def gamma_phi(phi, R: float = 1.0) -> np.ndarray:
    """Angular gamma matrix (-gamma1 sin(phi) + gamma2 cos(phi)) / R.

    Vectorized over ``phi``: an array of shape (n,) gives shape (n, 4, 4).
    """
    if R <= 0:
        raise ValueError(f"R must be positive, got {R}")
    phi = np.asarray(phi, dtype=float)
    s = np.sin(phi)[..., None, None]
    c = np.cos(phi)[..., None, None]
    return (-GAMMA.gamma1 * s + GAMMA.gamma2 * c) / R


def gamma_phi_derivative(phi, R: float = 1.0) -> np.ndarray:
    """d(gamma^phi)/d(phi) = (-gamma1 cos(phi) - gamma2 sin(phi)) / R."""
    phi = np.asarray(phi, dtype=float)
    s = np.sin(phi)[..., None, None]
    c = np.cos(phi)[..., None, None]
    return (-GAMMA.gamma1 * c - GAMMA.gamma2 * s) / R


def algebraic_system(config: RingConfig, lam, E: float) -> np.ndarray:
    """Matrix of the separated Dirac equation acting on (f1, f2, g1, g2).

    ``E`` is the dimensional energy (units of 1/R when R = 1, E is E*R).
    """
    lam = HalfOddInteger.parse(lam)
    R = config.radius_natural
    M = config.mass
    a = 1j * nu(config, lam) / R
    return np.array(
        [
            [E - M, 0, 0, a],
            [0, E - M, -a, 0],
            [0, -a, -E - M, 0],
            [a, 0, 0, -E - M],
        ],
        dtype=complex,
    )


def energy_pencil(config: RingConfig, lam) -> np.ndarray:
    """Matrix whose eigenvalues are the energies at which the system is singular.

    The system reads (E gamma0 - A) v = 0, so E runs over the spectrum of
    gamma0 A with A = algebraic_system(E=0) negated.
    """
    A0 = algebraic_system(config, lam, 0.0)
    return -GAMMA.gamma0 @ A0


def solve_energies(config: RingConfig, lam, negative: bool = False) -> float:
    """Energy E*R = sqrt(mu**2 + nu**2) of mode ``lam``.

    With ``negative=True`` the antiparticle branch -sqrt(mu**2 + nu**2) is
    returned instead. The value is dimensionless (E times R).
    """
    lam = config.check_mode(lam)
    e = math.hypot(config.mu, nu(config, lam))
    return -e if negative else e


@dataclass(frozen=True)
class RingSpinor:
    """Normalized stationary mode of the ring.

    ``coeffs`` are the t = 0 amplitudes (f1, f2, g1, g2); ``energy`` is E*R.
    """

    coeffs: np.ndarray
    lam: HalfOddInteger
    energy: float
    kappa: int
    config: RingConfig = field(repr=False)

    @property
    def phase_exponents(self) -> np.ndarray:
        """Angular exponents (l-1/2, l+1/2, l-1/2, l+1/2) as exact integers."""
        lo = (self.lam.twice_value - 1) // 2
        return np.array([lo, lo + 1, lo, lo + 1])

    def evaluate(self, phi, t: float = 0.0) -> np.ndarray:
        """Spinor values on angles ``phi``: shape (n, 4)."""
        phi = np.atleast_1d(np.asarray(phi, dtype=float))
        phases = np.exp(1j * np.outer(phi, self.phase_exponents))
        time = np.exp(-1j * self.energy / self.config.radius_natural * t)
        return phases * self.coeffs * time

    def with_coeffs(self, coeffs) -> "RingSpinor":
        return RingSpinor(np.asarray(coeffs, dtype=complex), self.lam, self.energy, self.kappa, self.config)

    def with_kappa(self, kappa: int) -> "RingSpinor":
        return RingSpinor(self.coeffs, self.lam, self.energy, kappa, self.config)


def build_spinor(config: RingConfig, lam, kappa: int) -> RingSpinor:
    """Normalized eigenspinor of polarization ``kappa`` (+1 or -1).

    Upper (large) components carry sqrt(E+M); the lower ones follow from the
    algebraic system, g = +-i nu / (R sqrt(E+M)), which keeps the sign of
    nu and stays finite at nu = 0.
    """
    if kappa not in (1, -1):
        raise ValueError(f"kappa must be +1 or -1, got {kappa}")
    lam = config.check_mode(lam)
    R = config.radius_natural
    er = solve_energies(config, lam)
    if er == 0:
        raise DegenerateModeError(f"mode {lam} has zero energy")
    E = er / R
    M = config.mass
    n = nu(config, lam)
    big = math.sqrt(E + M)
    small = 1j * (n / R) / big
    norm = 1.0 / (2.0 * math.sqrt(math.pi * E * R))
    if kappa == 1:
        coeffs = np.array([big, 0, 0, small], dtype=complex)
    else:
        coeffs = np.array([0, big, -small, 0], dtype=complex)
    return RingSpinor(coeffs * norm, lam, er, kappa, config)


def angle_nodes(nodes: int = DEFAULT_NODES) -> np.ndarray:
    return 2 * np.pi * np.arange(nodes) / nodes


def scalar_product_quadrature(a: RingSpinor, b: RingSpinor, nodes: int = DEFAULT_NODES) -> complex:
    """R * integral_0^{2pi} a^dagger b dphi by the composite trapezoid rule.

    The integrand is a trigonometric polynomial, so the rule is exact once
    ``nodes`` exceeds the largest phase difference.
    """
    if nodes < 64:
        raise ValueError(f"need at least 64 nodes, got {nodes}")
    if a.config != b.config:
        raise ConfigMismatchError("spinors belong to different rings")
    phi = angle_nodes(nodes)
    integrand = np.einsum("ni,ni->n", a.evaluate(phi).conj(), b.evaluate(phi))
    return complex(a.config.radius_natural * 2 * np.pi * integrand.mean())


def gram_matrix(spinors, nodes: int = DEFAULT_NODES) -> np.ndarray:
    """Matrix of scalar products between all pairs, same rule as above."""
    if not spinors:
        return np.zeros((0, 0), dtype=complex)
    cfg = spinors[0].config
    if any(s.config != cfg for s in spinors):
        raise ConfigMismatchError("spinors belong to different rings")
    phi = angle_nodes(nodes)
    values = np.stack([s.evaluate(phi) for s in spinors])
    return cfg.radius_natural * 2 * np.pi * np.einsum("anj,bnj->ab", values.conj(), values) / nodes


@dataclass(frozen=True)
class OperatorResiduals:
    dirac: float
    energy: float
    angular_momentum: float
    polarization: float

    def max(self) -> float:
        return max(self.dirac, self.energy, self.angular_momentum, self.polarization)

    def as_dict(self) -> dict:
        return {"E_D": self.dirac, "H": self.energy, "J3": self.angular_momentum, "K": self.polarization}


def apply_dirac_operator(s: RingSpinor, phi) -> np.ndarray:
    """E_D psi at t = 0 on angles ``phi``.

    E_D = i gamma0 d_t + gamma^phi (i d_phi - beta) + (i/2) d_phi(gamma^phi);
    d_t -> -iE and d_phi -> i m on each component.
    """
    cfg = s.config
    R = cfg.radius_natural
    psi = s.evaluate(phi)
    E = s.energy / R
    dphi_psi = 1j * s.phase_exponents * psi
    gp = gamma_phi(phi, R)
    dgp = gamma_phi_derivative(phi, R)
    out = E * psi @ GAMMA.gamma0.T
    out += np.einsum("nij,nj->ni", gp, 1j * dphi_psi - cfg.beta * psi)
    out += 0.5j * np.einsum("nij,nj->ni", dgp, psi)
    return out


def operator_residuals(s: RingSpinor, nodes: int = 64) -> OperatorResiduals:
    """Max-norm residuals ||(Op - eigenvalue) psi|| for E_D, H, J3 and K.

    Eigenvalues are M, E, lambda and the stored kappa. Derivatives act on
    the known exponentials, so no discretization error enters.
    """
    cfg = s.config
    phi = angle_nodes(nodes)
    psi = s.evaluate(phi)

    def worst(r):
        return float(np.max(np.linalg.norm(r, axis=1)))

    ed = apply_dirac_operator(s, phi) - cfg.mass * psi
    # H = i d_t on e^{-iEt}
    E = s.energy / cfg.radius_natural
    h = 1j * (-1j * E) * psi - E * psi
    # J3 = -i d_phi + S3
    j3 = s.phase_exponents * psi + psi @ SPIN3.T - float(s.lam) * psi
    k = psi @ POLARIZATION.T - s.kappa * psi
    return OperatorResiduals(worst(ed), worst(h), worst(j3), worst(k))


def system_residual(s: RingSpinor) -> float:
    """Norm of the algebraic system applied to the stored amplitudes."""
    A = algebraic_system(s.config, s.lam, s.energy / s.config.radius_natural)
    return float(np.linalg.norm(A @ s.coeffs))


@dataclass(frozen=True)
class SuperpositionState:
    """c_plus U+ + c_minus U- for one mode."""

    c_plus: complex
    c_minus: complex
    lam: HalfOddInteger
    config: RingConfig

    def __post_init__(self):
        object.__setattr__(self, "lam", HalfOddInteger.parse(self.lam))
        object.__setattr__(self, "c_plus", complex(self.c_plus))
        object.__setattr__(self, "c_minus", complex(self.c_minus))

    @property
    def weight(self) -> float:
        return abs(self.c_plus) ** 2 + abs(self.c_minus) ** 2

    def check_normalized(self, tol: float = NORM_TOL):
        if abs(self.weight - 1.0) > tol:
            raise NotNormalizedError(f"|c+|^2 + |c-|^2 = {self.weight!r}")

    def evaluate(self, phi) -> np.ndarray:
        up = build_spinor(self.config, self.lam, 1)
        down = build_spinor(self.config, self.lam, -1)
        return self.c_plus * up.evaluate(phi) + self.c_minus * down.evaluate(phi)


def polarization_expectation(state: SuperpositionState) -> float:
    """<psi, K psi> = |c+|^2 - |c-|^2."""
    state.check_normalized()
    return abs(state.c_plus) ** 2 - abs(state.c_minus) ** 2


def current_density(psi_a: np.ndarray, psi_b: np.ndarray, phi, R: float) -> np.ndarray:
    """R * psibar_a gamma^phi psi_b at each angle; psi arrays are (n, 4)."""
    m = GAMMA.gamma0 @ gamma_phi(phi, R)
    return R * np.einsum("ni,nij,nj->n", psi_a.conj(), m, psi_b)


def cross_current(config: RingConfig, lam, nodes: int = DEFAULT_NODES) -> complex:
    """Angle average of R Ubar+ gamma^phi U-; vanishes identically."""
    lam = config.check_mode(lam)
    phi = angle_nodes(nodes)
    up = build_spinor(config, lam, 1).evaluate(phi)
    down = build_spinor(config, lam, -1).evaluate(phi)
    return complex(current_density(up, down, phi, config.radius_natural).mean())
