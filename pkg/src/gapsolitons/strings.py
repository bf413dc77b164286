"""Bethe strings, their frequency/momentum images and the Bethe equations.

A string of size n with carrying rapidity H has rapidities

    h_j = H + i (beta/2) (n + 1 - 2j),   j = 1..n

and is mapped ("imaged") to complex frequencies w_j with h(w_j) = h_j and
momenta k_j = k(w_j). Upper-half-plane members are solved for; their
lower-half-plane partners are exact complex conjugates, so the eigenenergy
sum(w_j) is real by construction.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass, field
from typing import Optional

from . import medium as med
from .errors import (MappingError, NoConvergence, NumericalError, OutOfGapError, PoleError,
                     SpectrumError)
from .medium import Band, MediumParams, Side
from .numerics import DEFAULT_CONFIG, SolverConfig, complex_newton, newton2d
from .rapidity import (AtomChainParams, RapidityMode, TaylorAB, invert_rapidity, rapidity,
                       rapidity_derivative, taylor_ab, wavenumber_for)

IM_EXEMPT = 1e-14


@dataclass(frozen=True)
class BetheString:
    H: float
    n: int
    beta: float
    rapidities: tuple

    @property
    def upper_count(self) -> int:
        """Number of members with Im h > 0."""
        return self.n // 2


def build_string(H: float, n: int, beta: float) -> BetheString:
    if int(n) != n or n < 1:
        raise ValueError(f"string size must be a positive integer, got {n!r}")
    if not beta > 0:
        raise ValueError("beta must be positive")
    n = int(n)
    raps = tuple(complex(H, 0.5 * beta * (n + 1 - 2 * j)) for j in range(1, n + 1))
    return BetheString(H=float(H), n=n, beta=float(beta), rapidities=raps)


class ImageKind(enum.Enum):
    SinglePolariton = "single_polariton"
    OrdinarySoliton = "ordinary_soliton"
    GapSoliton = "gap_soliton"
    CompositeSoliton = "composite_soliton"


@dataclass(frozen=True)
class SolitonImage:
    kind: ImageKind
    frequencies: tuple
    momenta: tuple
    string: BetheString
    sides: tuple = field(default=())

    def __post_init__(self):
        if not len(self.frequencies) == len(self.momenta) == self.string.n:
            raise ValueError("frequencies, momenta and string size disagree")
        if self.kind is ImageKind.GapSoliton and self.string.n % 2:
            raise ValueError("a gap soliton needs an even number of particles")

    @property
    def eigenenergy(self) -> float:
        return math.fsum(w.real for w in self.frequencies)

    @property
    def eigenenergy_imag(self) -> float:
        return math.fsum(w.imag for w in self.frequencies)


@dataclass(frozen=True)
class PairParams:
    """Gap-pair parameters: member frequency xi + i eta with h = target.

    ``residual`` and ``iterations`` are None for closed-form estimates.
    """

    l: int
    j: int
    xi: float
    eta: float
    residual: Optional[float] = None
    target: Optional[complex] = None
    iterations: Optional[int] = None

    @property
    def omega(self) -> complex:
        return complex(self.xi, self.eta)


def two_particle_phase(hj: complex, hl: complex, beta: float) -> complex:
    """Scattering factor (hj - hl - i beta) / (hj - hl + i beta)."""
    d = complex(hj) - complex(hl)
    den = d + 1j * beta
    if abs(den) <= 1e-15 * beta:
        raise PoleError(f"h_j - h_l = -i beta (h_j={hj!r}, h_l={hl!r})")
    return (d - 1j * beta) / den


# -- Bethe equations -------------------------------------------------------------

def _canonical_order(raps):
    return sorted(range(len(raps)), key=lambda i: (raps[i].real, -raps[i].imag, i))


def bae_residual(image: SolitonImage, params: AtomChainParams, m: MediumParams) -> list:
    """String-reduced residuals of the Bethe equations, one per particle.

    The particles are put in canonical order (increasing Re h, then
    decreasing Im h). Residual j compares the product of equations 1..j:

        exp(i L sum_{i<=j} k_i) prod_{i<=j} A(h_i)**M
            - prod_{i<=j} prod_{l>j} S(h_i - h_l)

    with A(h) = (h - i beta/2)/(h + i beta/2) and S the two-particle phase.
    For a single equation this is the usual form with the explicit minus
    sign absorbed by the l = j factor. Taking products removes the 0/0
    factors an exact string produces in individual equations; the last
    residual is the total-momentum quantization exp(iPL) prod A**M - 1.

    Residuals are returned in canonical order, so the result does not
    depend on how the particles were labelled.
    """
    if params.length is None or params.m_atoms is None:
        raise ValueError("bae_residual needs params.length (and hence m_atoms)")
    L, M, beta = params.length, params.m_atoms, params.beta
    raps = image.string.rapidities
    order = _canonical_order(raps)
    h = [raps[i] for i in order]
    k = [image.momenta[i] for i in order]
    n = len(h)

    log_a = []
    zero_a = []
    for hi in h:
        den = hi + 0.5j * beta
        if abs(den) <= 1e-15 * beta:
            raise PoleError(f"rapidity {hi!r} sits on the atomic scattering pole")
        num = hi - 0.5j * beta
        if num == 0:
            log_a.append(0j)
            zero_a.append(True)
        else:
            log_a.append(cmath.log(num / den))
            zero_a.append(False)

    out = []
    log_lhs = 0j
    any_zero = False
    for j in range(n):
        log_lhs += 1j * L * k[j] + M * log_a[j]
        any_zero = any_zero or (zero_a[j] and M > 0)
        if any_zero:
            lhs = 0j
        else:
            try:
                lhs = cmath.exp(log_lhs)
            except OverflowError:
                lhs = complex(math.inf, math.inf)
        rhs = 1 + 0j
        for i in range(j + 1):
            for l in range(j + 1, n):
                rhs *= two_particle_phase(h[i], h[l], beta)
        out.append(lhs - rhs)
    return out


@dataclass(frozen=True)
class NCReport:
    passed: bool
    sign_h: tuple
    sign_k: tuple
    ok: tuple

    def __bool__(self):
        return self.passed

    def failures(self) -> list:
        return [j for j, good in enumerate(self.ok) if not good]


def _sgn(x: float) -> int:
    return (x > 0) - (x < 0)


def check_nc(image: SolitonImage) -> NCReport:
    """sgn(Im h_j) == sgn(Im k_j) for every particle with non-real rapidity."""
    sh, sk, ok = [], [], []
    for hj, kj in zip(image.string.rapidities, image.momenta):
        s_h, s_k = _sgn(hj.imag), _sgn(kj.imag)
        sh.append(s_h)
        sk.append(s_k)
        ok.append(abs(hj.imag) < IM_EXEMPT or s_h == s_k)
    return NCReport(passed=all(ok), sign_h=tuple(sh), sign_k=tuple(sk), ok=tuple(ok))


# -- gap continuation -------------------------------------------------------------

def gap_rapidity(xi: float, eta: float, m: MediumParams, a: AtomChainParams,
                 cfg: SolverConfig = DEFAULT_CONFIG) -> complex:
    """h(xi + i eta) on the sheet anchored at n(xi + i0) = +i nu(xi)."""
    return rapidity(complex(xi, eta), Side.UpperHalfPlane, m, a, cfg=cfg)


def solve_gap_member(target: complex, m: MediumParams, a: AtomChainParams,
                     ab: TaylorAB | None = None, cfg: SolverConfig = DEFAULT_CONFIG,
                     l: int = 0, j: int = 0) -> PairParams:
    """Solve Re h(xi, eta) = Re target, Im h(xi, eta) = Im target in the gap.

    Seeded by the linearization h ~ i a (w - omega12), i.e.
    xi = omega12 + Im(target)/a, eta = -Re(target)/a.
    """
    ab = ab or taylor_ab(m, a, cfg)
    target = complex(target)
    seed = (a.omega12 + target.imag / ab.a, -target.real / ab.a)

    def F(v):
        xi, eta = v
        if not m.omega_perp < xi < m.omega_par:
            raise OutOfGapError(f"Newton iterate xi={xi!r} escaped the gap")
        r = gap_rapidity(xi, eta, m, a, cfg) - target
        return (r.real, r.imag)

    (xi, eta), info = newton2d(F, seed, cfg, full_output=True)
    if not a.omega12 < xi < m.omega_par:
        raise OutOfGapError(f"solution xi={xi!r} outside (omega12, omega_par)")
    residual = abs(gap_rapidity(xi, eta, m, a, cfg) - target)
    if residual >= 1e-10:
        raise NoConvergence(f"pair residual {residual:.3e} above 1e-10")
    return PairParams(l=l, j=j, xi=xi, eta=eta, residual=residual, target=target,
                      iterations=info["iterations"])


def pair_target(H: float, l: int, j: int, beta: float) -> complex:
    return complex(H, beta * (l + 0.5 - j))


def _check_pair_index(l, j):
    if not (int(l) == l and int(j) == j and 1 <= j <= l):
        raise ValueError(f"need 1 <= j <= l, got l={l!r}, j={j!r}")


def solve_pair_params(H: float, l: int, j: int, m: MediumParams, a: AtomChainParams,
                      ab: TaylorAB | None = None, cfg: SolverConfig = DEFAULT_CONFIG) -> PairParams:
    """Exact (xi_j, eta_j) of pair j in an l-pair gap soliton with carrying rapidity H."""
    _check_pair_index(l, j)
    return solve_gap_member(pair_target(H, l, j, a.beta), m, a, ab, cfg, l=l, j=j)


def approx_pair_params(H: float, l: int, j: int, ab: TaylorAB, a: AtomChainParams) -> PairParams:
    """Closed-form estimate xi = omega12 + (beta/a)(l + 1/2 - j), eta = |H|/a."""
    _check_pair_index(l, j)
    return PairParams(l=l, j=j, xi=a.omega12 + (a.beta / ab.a) * (l + 0.5 - j),
                      eta=abs(H) / ab.a, target=pair_target(H, l, j, a.beta))


# -- images --------------------------------------------------------------------------

def _band_member(target: complex, band: Band, m, a, cfg) -> complex:
    """Complex frequency near ``band`` with h = target on the principal sheet."""
    xc = invert_rapidity(target.real, band, m, a, cfg=cfg)
    if target.imag == 0.0:
        return complex(xc, 0.0)
    seed = complex(xc, target.imag / rapidity_derivative(xc, m, a, cfg=cfg))

    def f(w):
        return rapidity(w, Side.of(w), m, a, cfg=cfg)

    w = complex_newton(f, target, seed, cfg)
    if med.classify(w.real, m, cfg) is not band:
        raise MappingError(f"rapidity {target!r} image {w!r} left {band.name}")
    return w


def _assemble(kind, string, upper_ws, upper_sides, middle, m, mode, cfg):
    """Order members j=1..n from solved upper members (+ optional real middle)."""
    ws = list(upper_ws)
    sides = list(upper_sides)
    if middle is not None:
        ws.append(middle)
        sides.append(Side.UpperHalfPlane)
    for w, s in zip(reversed(upper_ws), reversed(upper_sides)):
        ws.append(w.conjugate())
        sides.append(Side.LowerHalfPlane if s is Side.UpperHalfPlane else Side.UpperHalfPlane)
    ks = [wavenumber_for(w, s, m, mode, cfg) for w, s in zip(ws, sides)]
    return SolitonImage(kind=kind, frequencies=tuple(ws), momenta=tuple(ks), string=string,
                        sides=tuple(sides))


def string_image(string: BetheString, band: Band, m: MediumParams, a: AtomChainParams,
                 mode: RapidityMode = RapidityMode.FGM, cfg: SolverConfig = DEFAULT_CONFIG) -> SolitonImage:
    """Map every rapidity of ``string`` into ``band``.

    LowerBranch / UpperBranch give polaritons (n=1) or ordinary-soliton
    candidates; Gap needs an even string and gives a gap soliton. In VACUUM
    mode ``band`` is ignored and w = omega12 (1 + h), k = w/c.
    """
    n = string.n
    kind = ImageKind.SinglePolariton if n == 1 else ImageKind.OrdinarySoliton
    upper = string.rapidities[: n // 2]
    middle_h = string.rapidities[n // 2] if n % 2 else None

    if mode is RapidityMode.VACUUM:
        ws = [a.omega12 * (1.0 + h) for h in upper]
        sides = [Side.of(w) for w in ws]
        mid = a.omega12 * (1.0 + middle_h.real) if middle_h is not None else None
        return _assemble(kind, string, ws, sides, mid, m, mode, cfg)

    if band is Band.Gap:
        if n % 2:
            raise MappingError("a string with a real rapidity has no pure gap image")
        l = n // 2
        ab = taylor_ab(m, a, cfg)
        ws = []
        for j in range(1, l + 1):
            try:
                p = solve_pair_params(string.H, l, j, m, a, ab, cfg)
            except (NumericalError, OutOfGapError) as exc:
                raise MappingError(f"gap member j={j}: {exc}") from exc
            ws.append(p.omega)
        return _assemble(ImageKind.GapSoliton, string, ws, [Side.UpperHalfPlane] * l, None, m, mode, cfg)

    ws = []
    for j, h in enumerate(upper, start=1):
        try:
            ws.append(_band_member(h, band, m, a, cfg))
        except SpectrumError as exc:
            if isinstance(exc, MappingError):
                raise
            raise MappingError(f"member j={j}: {exc}") from exc
    mid = None
    if middle_h is not None:
        try:
            mid = complex(invert_rapidity(middle_h.real, band, m, a, cfg=cfg), 0.0)
        except SpectrumError as exc:
            raise MappingError(f"member j={n // 2 + 1}: {exc}") from exc
    return _assemble(kind, string, ws, [Side.of(w) for w in ws], mid, m, mode, cfg)


def image_consistency(image: SolitonImage, m: MediumParams, a: AtomChainParams,
                      mode: RapidityMode = RapidityMode.FGM, cfg: SolverConfig = DEFAULT_CONFIG) -> list:
    """|h(w_j) - h_j| for every member, using each member's sheet."""
    return [abs(rapidity(w, s, m, a, mode, cfg) - h)
            for w, s, h in zip(image.frequencies, image.sides, image.string.rapidities)]
