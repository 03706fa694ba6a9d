"""Exact Dirac modes and persistent currents of an ideal Aharonov-Bohm ring."""

__version__ = "0.1.0"

from .currents import ModeCurrent, chi, nonrel_limits, partial_current, superposition_current  # noqa: E402
from .dirac import RingSpinor, SuperpositionState, build_spinor, solve_energies  # noqa: E402
from .errors import (  # noqa: E402
    ConfigMismatchError,
    DegenerateModeError,
    NotNormalizedError,
    OverflowGuardError,
    RingError,
)
from .persistent import OccupationSpec, PersistentResult, j_kernel, persistent_current  # noqa: E402
from .ring import HalfOddInteger, PhysicalRingSpec, RingConfig, half_odd_range, mu_from_physical  # noqa: E402
