"""Rapidity map h(w) = (w - omega12) / (w n(w)**3) and its relatives."""

from __future__ import annotations

import enum
import functools
import math
from dataclasses import dataclass
from typing import Optional

from . import medium as med
from .errors import ConsistencyError, DerivativeOverflow, NoSignChange, OutOfGapError, RangeError
from .medium import Band, MediumParams, Side
from .numerics import DEFAULT_CONFIG, SolverConfig, bisect_then_newton, fd_derivative


class RapidityMode(enum.Enum):
    """FGM uses the full dispersive rapidity; VACUUM the linear empty-space form
    h = (w - omega12) / omega12 together with n = 1."""

    FGM = "FGM"
    VACUUM = "VACUUM"


@dataclass(frozen=True)
class AtomChainParams:
    """Atomic chain: transition frequency, couplings, density and size.

    ``beta`` is the rapidity-space string spacing and ``gamma`` the vacuum
    coupling; they are independent inputs. ``m_atoms`` defaults to
    ``round(rho * length)`` and must agree with it when both are given.
    """

    omega12: float
    beta: float
    gamma: Optional[float] = None
    rho: float = 0.0
    length: Optional[float] = None
    m_atoms: Optional[int] = None

    def __post_init__(self):
        if not self.omega12 > 0:
            raise ValueError("omega12 must be positive")
        if not self.beta > 0:
            raise ValueError("beta must be positive")
        if self.gamma is not None and not self.gamma > 0:
            raise ValueError("gamma must be positive")
        if not self.rho >= 0:
            raise ValueError("rho must be non-negative")
        if self.length is not None:
            if not self.length > 0:
                raise ValueError("length must be positive")
            expected = int(round(self.rho * self.length))
            if self.m_atoms is None:
                object.__setattr__(self, "m_atoms", expected)
            elif self.m_atoms != expected:
                raise ValueError(f"m_atoms={self.m_atoms} inconsistent with rho*length={self.rho * self.length}")
        if self.m_atoms is not None and self.m_atoms < 0:
            raise ValueError("m_atoms must be non-negative")

    def require_gamma(self) -> float:
        if self.gamma is None:
            raise ValueError("gamma is required for vacuum-limit formulas")
        return self.gamma


@dataclass(frozen=True)
class TaylorAB:
    """phi(xi) ~ a + b (xi - omega12) near the transition frequency."""

    a: float
    b: float


def rapidity(omega, side: Side, m: MediumParams, a: AtomChainParams,
             mode: RapidityMode = RapidityMode.FGM, cfg: SolverConfig = DEFAULT_CONFIG) -> complex:
    omega = complex(omega)
    if mode is RapidityMode.VACUUM:
        return (omega - a.omega12) / a.omega12
    n = med.refractive_index(omega, side, m, cfg)
    return (omega - a.omega12) / (omega * n ** 3)


def wavenumber_for(omega, side: Side, m: MediumParams, mode: RapidityMode = RapidityMode.FGM,
                   cfg: SolverConfig = DEFAULT_CONFIG) -> complex:
    """Momentum of a particle at ``omega``: omega/c in VACUUM mode, else k(omega)."""
    if mode is RapidityMode.VACUUM:
        return complex(omega) / m.c
    return med.wavenumber(omega, side, m, cfg)


def real_rapidity(xi: float, m: MediumParams, a: AtomChainParams,
                  mode: RapidityMode = RapidityMode.FGM, cfg: SolverConfig = DEFAULT_CONFIG) -> float:
    """h on the real axis of C- or C+ (a real number there)."""
    if mode is RapidityMode.VACUUM:
        return (xi - a.omega12) / a.omega12
    n = med.band_index(xi, m, cfg)
    if n == 0.0:
        raise DerivativeOverflow("h diverges at the upper gap edge")
    return (xi - a.omega12) / (xi * n ** 3)


def rapidity_derivative(xi: float, m: MediumParams, a: AtomChainParams,
                        mode: RapidityMode = RapidityMode.FGM, cfg: SolverConfig = DEFAULT_CONFIG) -> float:
    """dh/dxi on C- or C+."""
    if mode is RapidityMode.VACUUM:
        return 1.0 / a.omega12
    n = med.band_index(xi, m, cfg)
    dn = med.band_index_prime(xi, m, cfg)
    return (1.0 - (xi - a.omega12) * (1.0 / xi + 3.0 * dn / n)) / (xi * n ** 3)


def phi(xi: float, m: MediumParams, cfg: SolverConfig = DEFAULT_CONFIG) -> float:
    """1 / (xi nu(xi)**3) inside the gap."""
    v = med.nu(xi, m, cfg)
    if m.omega_par - xi < m.exclusion(cfg):
        raise DerivativeOverflow(f"phi diverges at the upper gap edge (xi={xi!r})")
    return 1.0 / (xi * v ** 3)


def phi_prime(xi: float, m: MediumParams, cfg: SolverConfig = DEFAULT_CONFIG) -> float:
    p = phi(xi, m, cfg)
    return -p * (1.0 / xi + 3.0 * med.nu_prime(xi, m, cfg) / med.nu(xi, m, cfg))


def taylor_ab(m: MediumParams, a: AtomChainParams, cfg: SolverConfig = DEFAULT_CONFIG) -> TaylorAB:
    """Value and slope of phi at omega12, with a finite-difference check on the slope."""
    w = a.omega12
    if not m.omega_perp < w < m.omega_par:
        raise OutOfGapError(f"omega12={w} must lie inside the gap")
    value = phi(w, m, cfg)
    slope = phi_prime(w, m, cfg)
    step = 1e-6 * w
    oracle = fd_derivative(lambda x: phi(x, m, cfg), w, step)
    if abs(slope - oracle) > 1e-6 * max(abs(slope), value / w):
        raise ConsistencyError(f"phi'(omega12): analytic {slope!r} vs finite difference {oracle!r}")
    return TaylorAB(a=value, b=slope)


@functools.lru_cache(maxsize=64)
def _upper_branch_minimum(m: MediumParams, a: AtomChainParams, cfg: SolverConfig) -> float:
    """Location of the minimum of h on C+ (h -> +inf at the edge, -> 1 at infinity)."""
    r = m.exclusion(cfg)
    lo = m.omega_par + max(r, 1e-6 * m.omega_par)
    if rapidity_derivative(lo, m, a, cfg=cfg) >= 0:
        return lo
    hi = 2.0 * m.omega_par
    while rapidity_derivative(hi, m, a, cfg=cfg) < 0:
        hi *= 2.0
        if hi > 1e12 * m.omega_par:
            return math.inf
    return bisect_then_newton(lambda x: rapidity_derivative(x, m, a, cfg=cfg), (lo, hi), cfg, ftol=0.0)


def upper_branch_turning_point(m: MediumParams, a: AtomChainParams, cfg: SolverConfig = DEFAULT_CONFIG) -> float:
    """Frequency on C+ where dh/dxi changes sign from negative to positive."""
    return _upper_branch_minimum(m, a, cfg)


def invert_rapidity(H: float, band: Band, m: MediumParams, a: AtomChainParams,
                    mode: RapidityMode = RapidityMode.FGM, cfg: SolverConfig = DEFAULT_CONFIG) -> float:
    """Real frequency xi on ``band`` with h(xi) = H.

    On C+ the root is taken on the limb between the gap edge and the minimum
    of h, where h decreases monotonically from +inf.
    """
    if mode is RapidityMode.VACUUM:
        return a.omega12 * (1.0 + H)
    r = m.exclusion(cfg)
    if band is Band.LowerBranch:
        lo, hi = 2.0 * r, m.omega_perp - 2.0 * r
    elif band is Band.UpperBranch:
        lo, hi = m.omega_par + 2.0 * r, _upper_branch_minimum(m, a, cfg)
        if not math.isfinite(hi):
            raise RangeError("h has no turning point on C+ for these parameters")
    else:
        raise RangeError("a real rapidity has no real image inside the gap")

    def f(x):
        return real_rapidity(x, m, a, cfg=cfg) - H

    def df(x):
        return rapidity_derivative(x, m, a, cfg=cfg)

    try:
        return bisect_then_newton(f, (lo, hi), cfg, df=df, ftol=1e-13 * max(1.0, abs(H)))
    except NoSignChange as exc:
        raise RangeError(f"H={H!r} is outside the image of h on {band.name}") from exc
