"""Quantum numbers and ring parameters shared by the other modules.

The angular quantum number of a ring mode is a half-odd integer. It is kept
as the integer ``2*lambda`` so that enumeration and negation are exact; a
float only appears when a formula is evaluated.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering

from .errors import DegenerateModeError, RingError


@dataclass(frozen=True)
class PhysicalConstants:
    """Pinned constants used for unit conversion."""

    # CODATA 2018 reduced Compton wavelength of the electron, hbar/(m_e c)
    reduced_compton_wavelength_nm: float = 3.8615926796e-4


CONSTANTS = PhysicalConstants()


@total_ordering
@dataclass(frozen=True)
class HalfOddInteger:
    """A number of the form n/2 with n odd, stored as ``twice_value = n``."""

    twice_value: int

    def __post_init__(self):
        if isinstance(self.twice_value, bool) or not isinstance(self.twice_value, int):
            raise TypeError("twice_value must be an int")
        if self.twice_value % 2 == 0:
            raise RingError(f"2*lambda must be odd, got {self.twice_value}")

    @classmethod
    def parse(cls, value) -> "HalfOddInteger":
        """Build from ``"3/2"``, ``"-0.5"``, ``1.5``, a Fraction, or another instance."""
        if isinstance(value, HalfOddInteger):
            return value
        try:
            frac = Fraction(value.strip()) if isinstance(value, str) else Fraction(value)
        except (ValueError, ZeroDivisionError, TypeError) as exc:
            raise RingError(f"cannot read {value!r} as a half-odd integer") from exc
        twice = 2 * frac
        if twice.denominator != 1 or twice.numerator % 2 == 0:
            raise RingError(f"{value!r} is not a half-odd integer")
        return cls(int(twice.numerator))

    @classmethod
    def fermi_level(cls, n_electrons: int) -> "HalfOddInteger":
        """Highest occupied level (N_e - 1)/2 for an even electron count."""
        if isinstance(n_electrons, bool) or int(n_electrons) != n_electrons:
            raise RingError(f"electron count must be an integer, got {n_electrons!r}")
        n_electrons = int(n_electrons)
        if n_electrons < 2 or n_electrons % 2:
            raise RingError(f"electron count must be even and >= 2, got {n_electrons}")
        return cls(n_electrons - 1)

    @classmethod
    def nearest(cls, x: float) -> "HalfOddInteger":
        """Nearest half-odd integer to ``x``; ties (integer ``x``) go up."""
        if not math.isfinite(x):
            raise RingError(f"cannot round {x!r}")
        return cls(2 * math.floor(x) + 1)

    def __float__(self) -> float:
        return self.twice_value / 2

    def __neg__(self) -> "HalfOddInteger":
        return HalfOddInteger(-self.twice_value)

    def __abs__(self) -> "HalfOddInteger":
        return HalfOddInteger(abs(self.twice_value))

    def __lt__(self, other):
        if not isinstance(other, HalfOddInteger):
            return NotImplemented
        return self.twice_value < other.twice_value

    def as_fraction(self) -> Fraction:
        return Fraction(self.twice_value, 2)

    @property
    def occupancy(self) -> int:
        """Number of levels from -lambda to +lambda, i.e. 2*|lambda| + 1."""
        return abs(self.twice_value) + 1

    def __str__(self) -> str:
        return f"{self.twice_value}/2"


def half_odd_range(lambda_max) -> list[HalfOddInteger]:
    """All half-odd integers in ``[-lambda_max, lambda_max]``, ascending."""
    lambda_max = HalfOddInteger.parse(lambda_max)
    if lambda_max.twice_value <= 0:
        raise RingError(f"lambda_max must be positive, got {lambda_max}")
    top = lambda_max.twice_value
    return [HalfOddInteger(t) for t in range(-top, top + 1, 2)]


def positive_half_odd(lambda_max) -> list[HalfOddInteger]:
    """1/2, 3/2, ..., lambda_max."""
    lambda_max = HalfOddInteger.parse(lambda_max)
    if lambda_max.twice_value <= 0:
        raise RingError(f"lambda_max must be positive, got {lambda_max}")
    return [HalfOddInteger(t) for t in range(1, lambda_max.twice_value + 1, 2)]


@dataclass(frozen=True)
class RingConfig:
    """Dimensionless ring parameters.

    Parameters
    ----------
    mu : float
        Mass-radius product M*R (natural units), >= 0.
    beta : float
        Flux parameter e*B*R**2/2. Any finite value; sign is not interpreted.
    radius_natural : float
        Ring radius R in natural units. Only dimensional quantities
        (energies in 1/R, currents in 1/R) depend on it.
    """

    mu: float
    beta: float = 0.0
    radius_natural: float = 1.0

    def __post_init__(self):
        for name in ("mu", "beta", "radius_natural"):
            v = getattr(self, name)
            if not isinstance(v, (int, float)) or isinstance(v, bool) or not math.isfinite(v):
                raise RingError(f"{name} must be a finite real, got {v!r}")
            object.__setattr__(self, name, float(v))
        if self.mu < 0:
            raise RingError(f"mu must be non-negative, got {self.mu}")
        if self.radius_natural <= 0:
            raise RingError(f"radius_natural must be positive, got {self.radius_natural}")

    @property
    def mass(self) -> float:
        return self.mu / self.radius_natural

    def check_mode(self, lam) -> HalfOddInteger:
        """Parse ``lam`` and reject the zero-energy mode (mu == 0, nu == 0)."""
        lam = HalfOddInteger.parse(lam)
        if self.mu == 0 and nu(self, lam) == 0:
            raise DegenerateModeError(
                f"mode lambda={lam} has nu=0 on a massless ring (E=0, no normalizable spinor)"
            )
        return lam


@dataclass(frozen=True)
class PhysicalRingSpec:
    radius_nm: float
    effective_mass_ratio: float

    def __post_init__(self):
        if not (math.isfinite(self.radius_nm) and self.radius_nm > 0):
            raise RingError(f"radius_nm must be positive, got {self.radius_nm}")
        if not (math.isfinite(self.effective_mass_ratio) and self.effective_mass_ratio > 0):
            raise RingError(f"effective_mass_ratio must be positive, got {self.effective_mass_ratio}")


def mu_from_physical(spec: PhysicalRingSpec, constants: PhysicalConstants = CONSTANTS) -> float:
    """mu = m* R c / hbar, using the electron reduced Compton wavelength."""
    return spec.effective_mass_ratio * spec.radius_nm / constants.reduced_compton_wavelength_nm


def nu(config: RingConfig, lam) -> float:
    """Shifted angular number beta + lambda."""
    return config.beta + float(HalfOddInteger.parse(lam))
