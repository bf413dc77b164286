"""Dielectric model of a frequency-dispersive medium with a single gap.

The permeability is

    eps(w) = (w**2 - omega_par**2) / (w**2 - omega_perp**2)

which is negative exactly on the gap G = (omega_perp, omega_par). Propagating
polaritons live on the lower branch C- = (0, omega_perp) and the upper branch
C+ = (omega_par, inf).

Branch convention for n = sqrt(eps)
-----------------------------------
On C- and C+ the real positive root is used. Inside the gap the real-axis
limits are n(xi +/- i0) = +/- i nu(xi), nu = sqrt(|eps|). For ``w`` off the
axis, ``side`` names the sheet: in the named half-plane the principal root is
taken (it already has the right gap limit, since eps never reaches the
negative real axis off the real w axis); in the opposite half-plane the sheet
is continued across the gap segment, which flips the sign of the root.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass

from .errors import DerivativeOverflow, EdgeError, OutOfBandError, OutOfGapError, PoleError
from .numerics import DEFAULT_CONFIG, SolverConfig


@dataclass(frozen=True)
class MediumParams:
    omega_perp: float
    omega_par: float
    c: float = 1.0

    def __post_init__(self):
        if not 0 < self.omega_perp < self.omega_par:
            raise ValueError("MediumParams requires 0 < omega_perp < omega_par")
        if not self.c > 0:
            raise ValueError("MediumParams requires c > 0")

    def exclusion(self, cfg: SolverConfig = DEFAULT_CONFIG) -> float:
        """Pole/edge exclusion radius (absolute frequency units)."""
        return cfg.edge_exclusion * self.omega_perp


class Band(enum.Enum):
    LowerBranch = "lower"
    Gap = "gap"
    UpperBranch = "upper"


class Side(enum.Enum):
    UpperHalfPlane = 1
    LowerHalfPlane = -1

    @classmethod
    def of(cls, omega: complex) -> "Side":
        """Half-plane containing ``omega``; the real axis counts as upper."""
        return cls.LowerHalfPlane if complex(omega).imag < 0 else cls.UpperHalfPlane


def _check_pole(omega: complex, m: MediumParams, cfg: SolverConfig):
    r = m.exclusion(cfg)
    if abs(omega - m.omega_perp) < r or abs(omega + m.omega_perp) < r:
        raise PoleError(f"omega={omega!r} within {r:g} of the permeability pole")


def permeability(omega, m: MediumParams, cfg: SolverConfig = DEFAULT_CONFIG):
    """eps(omega) for real or complex ``omega``.

    Returns a float for real input, a complex otherwise.
    """
    _check_pole(complex(omega), m, cfg)
    w2 = omega * omega
    return (w2 - m.omega_par ** 2) / (w2 - m.omega_perp ** 2)


def classify(xi: float, m: MediumParams, cfg: SolverConfig = DEFAULT_CONFIG) -> Band:
    r = m.exclusion(cfg)
    if not xi > 0:
        raise EdgeError(f"xi={xi!r} must be positive")
    for edge in (0.0, m.omega_perp, m.omega_par):
        if abs(xi - edge) < r:
            raise EdgeError(f"xi={xi!r} within {r:g} of the band edge {edge}")
    if xi < m.omega_perp:
        return Band.LowerBranch
    if xi < m.omega_par:
        return Band.Gap
    return Band.UpperBranch


def _in_gap(xi: float, m: MediumParams) -> bool:
    return m.omega_perp < xi < m.omega_par


def refractive_index(omega, side: Side, m: MediumParams, cfg: SolverConfig = DEFAULT_CONFIG) -> complex:
    """n(omega) on the sheet selected by ``side`` (see module docstring)."""
    omega = complex(omega)
    eps = permeability(omega, m, cfg)
    if omega.imag == 0.0:
        xi = omega.real
        if _in_gap(xi, m):
            return complex(0.0, side.value * math.sqrt(-eps.real))
        return complex(math.sqrt(eps.real), 0.0) if eps.real >= 0 else complex(0.0, math.sqrt(-eps.real))
    root = cmath.sqrt(eps)
    if Side.of(omega) is side:
        return root
    return -root


def nu(xi: float, m: MediumParams, cfg: SolverConfig = DEFAULT_CONFIG) -> float:
    """sqrt(|eps(xi)|) for xi strictly inside the gap."""
    r = m.exclusion(cfg)
    if not (m.omega_perp + r <= xi < m.omega_par):
        raise OutOfGapError(f"xi={xi!r} is not inside the gap ({m.omega_perp}, {m.omega_par})")
    return math.sqrt(-permeability(xi, m, cfg))


def wavenumber(omega, side: Side, m: MediumParams, cfg: SolverConfig = DEFAULT_CONFIG) -> complex:
    """k(omega) = omega n(omega) / c on the sheet ``side``."""
    return complex(omega) * refractive_index(omega, side, m, cfg) / m.c


def kappa(xi: float, m: MediumParams, cfg: SolverConfig = DEFAULT_CONFIG) -> float:
    """Gap decay constant xi nu(xi) / c."""
    return xi * nu(xi, m, cfg) / m.c


def _abs_eps_prime(xi, m):
    # d|eps|/dxi inside the gap
    return -2.0 * xi * (m.omega_par ** 2 - m.omega_perp ** 2) / (xi * xi - m.omega_perp ** 2) ** 2


def nu_prime(xi: float, m: MediumParams, cfg: SolverConfig = DEFAULT_CONFIG) -> float:
    v = nu(xi, m, cfg)
    if m.omega_par - xi < m.exclusion(cfg):
        raise DerivativeOverflow(f"nu'(xi) diverges at the upper gap edge (xi={xi!r})")
    return _abs_eps_prime(xi, m) / (2.0 * v)


def kappa_prime(xi: float, m: MediumParams, cfg: SolverConfig = DEFAULT_CONFIG) -> float:
    """d kappa / d xi, analytic."""
    return (nu(xi, m, cfg) + xi * nu_prime(xi, m, cfg)) / m.c


def band_index(xi: float, m: MediumParams, cfg: SolverConfig = DEFAULT_CONFIG) -> float:
    """Real refractive index on C- or C+."""
    if classify(xi, m, cfg) is Band.Gap:
        raise OutOfBandError(f"xi={xi!r} lies in the gap")
    return math.sqrt(permeability(xi, m, cfg))


def band_index_prime(xi: float, m: MediumParams, cfg: SolverConfig = DEFAULT_CONFIG) -> float:
    n = band_index(xi, m, cfg)
    if n == 0.0:
        raise DerivativeOverflow("dn/dxi diverges at the upper gap edge")
    eps_prime = 2.0 * xi * (m.omega_par ** 2 - m.omega_perp ** 2) / (xi * xi - m.omega_perp ** 2) ** 2
    return eps_prime / (2.0 * n)


def band_wavenumber_prime(xi: float, m: MediumParams, cfg: SolverConfig = DEFAULT_CONFIG) -> float:
    """dk/dxi on C- or C+ (the inverse group velocity outside the atoms)."""
    return (band_index(xi, m, cfg) + xi * band_index_prime(xi, m, cfg)) / m.c


def form_factor(omega: float, omega12: float, m: MediumParams, cfg: SolverConfig = DEFAULT_CONFIG) -> float:
    """Atomic form factor z = omega n**3 / omega12 for propagating modes.

    Exposed for completeness; the spectrum itself only needs h and k.
    """
    if classify(omega, m, cfg) is Band.Gap:
        raise OutOfBandError("the form factor is defined on propagating bands only")
    return omega * band_index(omega, m, cfg) ** 3 / omega12
