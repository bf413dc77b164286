"""Dispersion relations, group velocities and band data of the soliton families.

Conventions: principal-branch arctan everywhere (each dispersion relation
therefore jumps by pi where the arctan denominator changes sign, and those
points are excluded), momenta in units of 1/c.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from . import medium as med
from .errors import (BandEscapeError, MappingError, NCViolation, NumericalError, OutOfBandError,
                     OutOfGapError, RangeError, ResonanceError, SpectrumError, ZeroVelocityError,
                     EffectiveMassWarning, SuperluminalWarning)
from .medium import Band, MediumParams, Side
from .numerics import DEFAULT_CONFIG, SolverConfig, bisect_then_newton
from .rapidity import (AtomChainParams, RapidityMode, TaylorAB, invert_rapidity, rapidity_derivative,
                       real_rapidity, taylor_ab)
from .strings import (BetheString, ImageKind, NCReport, SolitonImage, _assemble,
                      _band_member, build_string, check_nc, image_consistency, solve_gap_member)

RESONANCE_EXCLUSION = 1e-9


@dataclass(frozen=True)
class DispersionPoint:
    coordinate: float
    momentum: float
    inv_V: float
    inv_v: float


def _check_resonance(detuning: float, params: AtomChainParams):
    if abs(detuning) < RESONANCE_EXCLUSION * params.omega12:
        raise ResonanceError(f"detuning {detuning!r} inside the resonance exclusion radius")


# -- empty-space SIT -----------------------------------------------------------------

def vacuum_dispersion(Omega: float, K: float, n: int, params: AtomChainParams) -> float:
    """Q = K - (2 rho/n) arctan(n gamma / (2 (Omega - omega12)))."""
    gamma = params.require_gamma()
    det = Omega - params.omega12
    _check_resonance(det, params)
    return K - (2.0 * params.rho / n) * math.atan(n * gamma / (2.0 * det))


def vacuum_inverse_velocity(Omega: float, n: int, params: AtomChainParams, c: float = 1.0) -> float:
    """1/V = 1/c + gamma rho / ((Omega - omega12)^2 + (n gamma/2)^2)."""
    gamma = params.require_gamma()
    det = Omega - params.omega12
    return 1.0 / c + gamma * params.rho / (det * det + (0.5 * n * gamma) ** 2)


def vacuum_soliton_size(n: int, params: AtomChainParams) -> float:
    if n < 1:
        raise ValueError("n must be >= 1")
    return 1.0 / (params.require_gamma() * n)


def quantize_vacuum(n: int, params: AtomChainParams, omega_guess: float, c: float = 1.0,
                    cfg: SolverConfig = DEFAULT_CONFIG) -> float:
    """Frequency near ``omega_guess`` where Q(Omega) n L is a multiple of 2 pi.

    Uses K = Omega/c. The guess must lie on one side of the resonance; the
    root is searched on that side only.
    """
    if params.length is None:
        raise ValueError("quantization needs params.length")
    nL = n * params.length
    w12 = params.omega12

    def Q(w):
        return vacuum_dispersion(w, w / c, n, params)

    target = 2.0 * math.pi * round(Q(omega_guess) * nL / (2.0 * math.pi)) / nL
    # dQ/dOmega >= 1/c: the root is within one quantum of the guess
    span = 2.0 * math.pi / nL * c
    lo, hi = omega_guess - span, omega_guess + span
    if omega_guess > w12:
        lo = max(lo, w12 * (1 + 2 * RESONANCE_EXCLUSION))
    else:
        hi = min(hi, w12 * (1 - 2 * RESONANCE_EXCLUSION))
    return bisect_then_newton(lambda w: Q(w) - target, (lo, hi), cfg, ftol=0.0)


# -- ordinary solitons ---------------------------------------------------------------

def _lower_branch_quantities(xi, m, params, mode, cfg):
    if mode is RapidityMode.VACUUM:
        return xi / m.c, 1.0 / m.c, (xi - params.omega12) / params.omega12, 1.0 / params.omega12
    if med.classify(xi, m, cfg) is not Band.LowerBranch:
        raise OutOfBandError(f"ordinary solitons live on C- only (xi={xi!r})")
    k = xi * med.band_index(xi, m, cfg) / m.c
    dk = med.band_wavenumber_prime(xi, m, cfg)
    h = real_rapidity(xi, m, params, cfg=cfg)
    dh = rapidity_derivative(xi, m, params, cfg=cfg)
    return k, dk, h, dh


def ordinary_dispersion(xi: float, n: int, params: AtomChainParams, m: MediumParams,
                        mode: RapidityMode = RapidityMode.FGM, cfg: SolverConfig = DEFAULT_CONFIG) -> float:
    """q(xi) = k(xi) - (2 rho/n) arctan(beta n / (2 h(xi)))."""
    k, _, h, _ = _lower_branch_quantities(xi, m, params, mode, cfg)
    if mode is RapidityMode.VACUUM:
        _check_resonance(xi - params.omega12, params)
    elif h == 0.0:
        raise ResonanceError("h(xi) = 0")
    return k - (2.0 * params.rho / n) * math.atan(params.beta * n / (2.0 * h))


def ordinary_inverse_velocity(xi: float, n: int, params: AtomChainParams, m: MediumParams,
                              mode: RapidityMode = RapidityMode.FGM,
                              cfg: SolverConfig = DEFAULT_CONFIG) -> tuple[float, float]:
    """(1/V, 1/v): inside and outside the atomic system.

    1/V = 1/v + rho beta h'(xi) / (h^2 + (beta n/2)^2), 1/v = dk/dxi. The
    expression is regular at h = 0, so no resonance check is made here.
    """
    _, dk, h, dh = _lower_branch_quantities(xi, m, params, mode, cfg)
    inv_V = dk + params.rho * params.beta * dh / (h * h + (0.5 * params.beta * n) ** 2)
    return inv_V, dk


def ordinary_point(xi: float, n: int, params: AtomChainParams, m: MediumParams,
                   mode: RapidityMode = RapidityMode.FGM, cfg: SolverConfig = DEFAULT_CONFIG) -> DispersionPoint:
    q = ordinary_dispersion(xi, n, params, m, mode, cfg)
    inv_V, inv_v = ordinary_inverse_velocity(xi, n, params, m, mode, cfg)
    return DispersionPoint(xi, q, inv_V, inv_v)


# -- gap solitons --------------------------------------------------------------------

@dataclass(frozen=True)
class GapBand:
    """Effective-mass band of an l-pair gap soliton.

    ``center`` is omega12 + (beta/a) l; ``center_direct`` is the plain mean of
    the pair frequencies xi0, omega12 + (beta/a) l/2. The two differ and
    both are reported. ``width`` and ``mass`` carry the sign of b.
    """

    l: int
    center: float
    center_direct: float
    width: float
    mass: float
    xi0: tuple
    kappa_prime_sum: float
    ab: TaylorAB

    @property
    def bottom(self) -> float:
        return self.center - self.width

    @property
    def mean_kappa_prime(self) -> float:
        return self.kappa_prime_sum / self.l

    def __post_init__(self):
        if self.width == 0 or self.mass == 0:
            raise ValueError("band width and mass must be non-zero")


def gap_band(l: int, ab: TaylorAB, params: AtomChainParams, m: MediumParams,
             cfg: SolverConfig = DEFAULT_CONFIG) -> GapBand:
    if int(l) != l or l < 1:
        raise ValueError("l must be a positive integer")
    a, b, beta, w12 = ab.a, ab.b, params.beta, params.omega12
    xi0 = tuple(w12 + (beta / a) * (l + 0.5 - j) for j in range(1, l + 1))
    edge = m.omega_par - m.exclusion(cfg)
    if max(xi0) >= edge:
        raise BandEscapeError(f"l={l}: outermost pair xi0={max(xi0)!r} reaches the gap edge")
    ksum = math.fsum(abs(med.kappa_prime(x, m, cfg)) for x in xi0)
    width = b * beta ** 2 * (4 * l * l - 1) / (12.0 * a ** 3)
    mass = (a / (2.0 * b)) * (ksum / l) ** 2
    return GapBand(l=l, center=w12 + (beta / a) * l, center_direct=math.fsum(xi0) / l,
                   width=width, mass=mass, xi0=xi0, kappa_prime_sum=ksum, ab=ab)


def max_pairs(ab: TaylorAB, params: AtomChainParams, m: MediumParams, cfg: SolverConfig = DEFAULT_CONFIG) -> int:
    """Largest l whose closed-form pair frequencies all stay inside the gap."""
    edge = m.omega_par - m.exclusion(cfg)
    # outermost pair: omega12 + (beta/a)(l - 1/2) < edge
    l = math.floor((edge - params.omega12) * ab.a / params.beta + 0.5)
    while l >= 1 and params.omega12 + (params.beta / ab.a) * (l - 0.5) >= edge:
        l -= 1
    return max(l, 0)


def pair_size(xi: float, m: MediumParams, cfg: SolverConfig = DEFAULT_CONFIG) -> float:
    """Penetration length 1/kappa(xi) of a gap pair."""
    k = med.kappa(xi, m, cfg)
    if k == 0.0:
        return math.inf
    return 1.0 / k


def band_pair_size(band: GapBand, m: MediumParams, cfg: SolverConfig = DEFAULT_CONFIG) -> float:
    """Mean pair size over the l pairs of a band."""
    return math.fsum(pair_size(x, m, cfg) for x in band.xi0) / band.l


def gap_energy(l: int, q: float, band: GapBand) -> float:
    """Energy per pair eps_l = center - width + q^2 / (2 mass)."""
    if band.l != l:
        raise ValueError(f"band is for l={band.l}, not l={l}")
    kinetic = q * q / (2.0 * band.mass)
    if abs(kinetic) > abs(band.width):
        warnings.warn(f"q={q!r}: kinetic term exceeds the band width", EffectiveMassWarning, stacklevel=2)
    return band.center - band.width + kinetic


def gap_momentum(eps: float, band: GapBand) -> float:
    """Non-negative momentum per pair at energy ``eps`` (inverse of gap_energy)."""
    x = 2.0 * band.mass * (eps - band.bottom)
    if x < 0:
        raise RangeError(f"eps={eps!r} lies below the band bottom {band.bottom!r}")
    return math.sqrt(x)


def linked_momentum(H: float, band: GapBand) -> float:
    """q = (|H|/a) * mean |kappa'(xi0_j)|."""
    return abs(H) / band.ab.a * band.mean_kappa_prime


def linked_rapidity(q: float, band: GapBand) -> float:
    """Carrying rapidity for momentum q >= 0: H = -a q / mean|kappa'| (eta > 0 for q > 0)."""
    return -band.ab.a * q / band.mean_kappa_prime


def gap_dispersion_inside(eps: float, l: int, params: AtomChainParams, band: GapBand,
                          H: float | None = None) -> float:
    """Q(eps) = q(eps) - (rho/l) arctan(beta l / H).

    Without ``H`` the carrying rapidity follows from q through
    :func:`linked_rapidity`; a supplied ``H`` must agree with it in magnitude.
    """
    if band.l != l:
        raise ValueError(f"band is for l={band.l}, not l={l}")
    q = gap_momentum(eps, band)
    linked = linked_rapidity(q, band)
    if H is None:
        H = linked
    elif not math.isclose(abs(H), abs(linked), rel_tol=1e-8, abs_tol=1e-300):
        raise ValueError(f"H={H!r} inconsistent with q(eps)={q!r} (expected |H|={abs(linked)!r})")
    if H == 0.0:
        raise ResonanceError("H = 0 at the band bottom: arctan(beta l / H) is undefined")
    return q - (params.rho / l) * math.atan(params.beta * l / H)


@dataclass(frozen=True)
class VelocityRatio:
    inv_V: float
    inv_v: float
    bracket: float


def gap_velocity_ratio(l: int, H: float, params: AtomChainParams, band: GapBand,
                       m: MediumParams | None = None) -> VelocityRatio:
    """Inverse velocities inside/outside the atoms and their ratio (the bracket)."""
    if band.l != l:
        raise ValueError(f"band is for l={band.l}, not l={l}")
    q = linked_momentum(H, band)
    if q == 0.0:
        raise ZeroVelocityError("zero momentum: the outside group velocity vanishes")
    inv_v = band.mass / q
    beta = params.beta
    bracket = 1.0 - (band.ab.a * l / band.kappa_prime_sum) * (params.rho * beta / (H * H + beta * beta * l * l))
    if bracket <= 0:
        warnings.warn(f"velocity bracket {bracket!r} <= 0", SuperluminalWarning, stacklevel=2)
    return VelocityRatio(inv_V=inv_v * bracket, inv_v=inv_v, bracket=bracket)


# -- composite solitons ----------------------------------------------------------------

@dataclass(frozen=True)
class CompositeSoliton:
    """A string split into gap pairs (outermost members) and C- members.

    ``ordinary_part`` holds complex frequencies; the real middle member of an
    odd string satisfies h(xi_-) = H.
    """

    H: float
    gap_part: tuple
    gap_momenta: tuple
    gap_q_leading: tuple
    ordinary_part: tuple
    ordinary_momenta: tuple
    source: BetheString
    image: SolitonImage
    nc: NCReport
    consistency: tuple

    @property
    def eigenenergy(self) -> float:
        return self.image.eigenenergy


def build_composite(H: float, n: int, n_gap_pairs: int, params: AtomChainParams, m: MediumParams,
                    ab: TaylorAB | None = None, cfg: SolverConfig = DEFAULT_CONFIG) -> CompositeSoliton:
    """Bound state of gap pairs and lower-branch polaritons from one string.

    The ``n_gap_pairs`` outermost conjugate pairs of the n-string are mapped
    into the gap, the remaining members onto C-.
    """
    if n_gap_pairs < 1 or 2 * n_gap_pairs > n:
        raise ValueError(f"need 1 <= n_gap_pairs <= n/2, got {n_gap_pairs} for n={n}")
    n_ordinary = n - 2 * n_gap_pairs
    if n_ordinary > 0 and not H < 0:
        raise ValueError("a composite soliton with lower-branch members needs H < 0")
    if n_ordinary == 0 and H > 0:
        raise ValueError("composite construction needs H <= 0")
    ab = ab or taylor_ab(m, params, cfg)
    string = build_string(H, n, params.beta)
    upper = string.rapidities[: n // 2]

    pairs, ws, sides = [], [], []
    for j, h in enumerate(upper[:n_gap_pairs], start=1):
        try:
            p = solve_gap_member(h, m, params, ab, cfg, l=n_gap_pairs, j=j)
        except (NumericalError, OutOfGapError) as exc:
            raise MappingError(f"gap member j={j} (h={h!r}): {exc}") from exc
        pairs.append(p)
        ws.append(p.omega)
        sides.append(Side.UpperHalfPlane)
    for j, h in enumerate(upper[n_gap_pairs:], start=n_gap_pairs + 1):
        try:
            w = _band_member(h, Band.LowerBranch, m, params, cfg)
        except MappingError:
            raise
        except SpectrumError as exc:
            raise MappingError(f"lower-branch member j={j} (h={h!r}): {exc}") from exc
        ws.append(w)
        sides.append(Side.of(w))
    mid = None
    if n % 2:
        try:
            mid = complex(invert_rapidity(H, Band.LowerBranch, m, params, cfg=cfg), 0.0)
        except SpectrumError as exc:
            raise MappingError(f"real member (h={H!r}): {exc}") from exc

    kind = ImageKind.CompositeSoliton if n_ordinary else ImageKind.GapSoliton
    image = _assemble(kind, string, ws, sides, mid, m, RapidityMode.FGM, cfg)
    nc = check_nc(image)
    if not nc:
        raise NCViolation(f"composite image violates the sign condition at members {nc.failures()}")

    gap_idx = list(range(n_gap_pairs)) + list(range(n - n_gap_pairs, n))
    ord_idx = [i for i in range(n) if i not in gap_idx]
    q_lead = tuple(p.eta * abs(med.kappa_prime(p.xi, m, cfg)) for p in pairs)
    return CompositeSoliton(
        H=float(H),
        gap_part=tuple(pairs),
        gap_momenta=tuple(image.momenta[i] for i in gap_idx),
        gap_q_leading=q_lead,
        ordinary_part=tuple(image.frequencies[i] for i in ord_idx),
        ordinary_momenta=tuple(image.momenta[i] for i in ord_idx),
        source=string,
        image=image,
        nc=nc,
        consistency=tuple(image_consistency(image, m, params, cfg=cfg)),
    )
