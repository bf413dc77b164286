"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the lines inline;
they are also repeated in the terminal summary.
"""

import math
import time
import warnings

import numpy as np

from gapsolitons.errors import SuperluminalWarning
from gapsolitons.medium import Band, MediumParams
from gapsolitons.rapidity import AtomChainParams, RapidityMode, real_rapidity, taylor_ab
from gapsolitons.solitons import (band_pair_size, build_composite, gap_band, gap_dispersion_inside,
                                  gap_energy, gap_velocity_ratio, linked_momentum, ordinary_dispersion,
                                  ordinary_inverse_velocity, quantize_vacuum, vacuum_dispersion,
                                  vacuum_inverse_velocity)
from gapsolitons.strings import (approx_pair_params, bae_residual, build_string, check_nc,
                                 solve_pair_params, string_image)

from cli_cases import COMMANDS, run_cli, tables_agree

M = MediumParams(1.0, 2.0)
REF = AtomChainParams(omega12=1.5, beta=0.01, gamma=0.015, rho=1.0)
AB = taylor_ab(M, REF)
RESULTS = []


def report(capsys, n, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'} criterion {n}: {detail}"
    RESULTS.append(line)
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


def rel(a, b):
    return abs(a - b) / max(abs(b), 1e-300)


def test_criterion_1_vacuum_reduction(capsys):
    t0 = time.perf_counter()
    p = REF  # gamma = beta * omega12, so the FGM pipeline in VACUUM mode matches the vacuum formulas
    grid = [x for x in 1.5 + np.linspace(-0.3, 0.3, 51) if abs(x - 1.5) > 1e-6][:50]
    err_q = max(abs(ordinary_dispersion(x, 3, p, M, RapidityMode.VACUUM) - vacuum_dispersion(x, x / M.c, 3, p))
                for x in grid)
    err_v = max(abs(ordinary_inverse_velocity(x, 3, p, M, RapidityMode.VACUUM)[0]
                    - vacuum_inverse_velocity(x, 3, p, M.c)) for x in grid)
    fixture = vacuum_inverse_velocity(1.5, 10, AtomChainParams(1.5, 0.01, gamma=0.01, rho=1.0), 1.0)
    dt = time.perf_counter() - t0
    ok = len(grid) == 50 and err_q < 1e-10 and err_v < 1e-10 and abs(fixture - 5.0) < 1e-12 and dt < 1
    report(capsys, 1, ok, f"max|dQ|={err_q:.1e} max|d(1/V)|={err_v:.1e} 1/V(res)={fixture!r} t={dt:.2f}s")


def _fd(f, x, h):
    return (f(x + h) - f(x - h)) / (2 * h)


def test_criterion_2_derivative_consistency(capsys):
    t0 = time.perf_counter()
    worst = {}
    # empty space
    p = REF
    grid = list(1.5 + np.linspace(0.002, 0.2, 25)) + list(1.5 - np.linspace(0.002, 0.2, 25))
    worst["vacuum"] = max(rel(vacuum_inverse_velocity(x, 3, p),
                              _fd(lambda w: vacuum_dispersion(w, w, 3, p), x, 1e-6)) for x in grid)
    # lower branch
    grid = np.linspace(0.02, 0.98, 50)
    worst["ordinary"] = max(rel(ordinary_inverse_velocity(x, 2, p, M)[0],
                                _fd(lambda w: ordinary_dispersion(w, 2, p, M), x, 1e-6)) for x in grid)
    # gap, l = 1..3, small momenta away from the zero of the bracket
    errs = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for l in (1, 2, 3):
            band = gap_band(l, AB, p, M)
            for H in -np.linspace(0.06, 0.5, 50):
                eps = gap_energy(l, linked_momentum(H, band), band)
                d = 1e-6 * (eps - band.bottom)
                fd = _fd(lambda e: gap_dispersion_inside(e, l, p, band), eps, d)
                errs.append(rel(gap_velocity_ratio(l, H, p, band).inv_V, fd))
    worst["gap"] = max(errs)
    dt = time.perf_counter() - t0
    ok = all(v < 1e-5 for v in worst.values()) and dt < 5
    report(capsys, 2, ok, " ".join(f"{k}={v:.1e}" for k, v in worst.items()) + f" t={dt:.2f}s")


def test_criterion_3_nc_dichotomy(capsys):
    t0 = time.perf_counter()

    def nc_at(xi, band):
        s = build_string(real_rapidity(xi, M, REF), 2, REF.beta)
        return bool(check_nc(string_image(s, band, M, REF)))

    # C+ grid stays on the limb below the minimum of h (about 5.20) where h is invertible
    lower = [nc_at(x, Band.LowerBranch) for x in np.linspace(0.02, 0.98, 50)]
    upper = [nc_at(x, Band.UpperBranch) for x in np.linspace(2.05, 5.0, 50)]
    dt = time.perf_counter() - t0
    ok = all(lower) and not any(upper) and dt < 1
    report(capsys, 3, ok, f"C- pass {sum(lower)}/50, C+ fail {50 - sum(upper)}/50, t={dt:.2f}s")


def test_criterion_4_pair_solver(capsys):
    t0 = time.perf_counter()
    worst_res = 0.0
    for beta in (1e-2, 1e-3, 1e-4):
        a = AtomChainParams(1.5, beta)
        for H in (0.0, -0.01):
            for l in range(1, 5):
                for j in range(1, l + 1):
                    worst_res = max(worst_res, solve_pair_params(H, l, j, M, a, AB).residual)
    betas = [1e-2 / 2 ** k for k in range(18)]
    diffs = []
    for beta in betas:
        a = AtomChainParams(1.5, beta)
        diffs.append(max(abs(solve_pair_params(0.0, 4, j, M, a, AB).xi - approx_pair_params(0.0, 4, j, AB, a).xi)
                         for j in range(1, 5)))
    slope = np.polyfit(np.log(betas), np.log(diffs), 1)[0]
    decades = math.log10(betas[0] / betas[-1])
    dt = time.perf_counter() - t0
    ok = worst_res < 1e-10 and abs(slope - 2) <= 0.2 and decades >= 5 and dt < 10
    report(capsys, 4, ok, f"max residual={worst_res:.1e} slope={slope:.3f} over {decades:.2f} decades t={dt:.2f}s")


def test_criterion_5_band_structure(capsys):
    t0 = time.perf_counter()
    bands = [gap_band(l, AB, REF, M) for l in (1, 2, 3, 4)]
    ratios = [b.width / (4 * b.l ** 2 - 1) for b in bands]
    spread = (max(ratios) - min(ratios)) / abs(ratios[0])
    curv_err = 0.0
    with warnings.catch_warnings():
        # the energy is exactly quadratic in q; a unit step keeps the difference free of cancellation
        warnings.simplefilter("ignore")
        for b in bands:
            e = [gap_energy(b.l, s, b) for s in (-1.0, 0.0, 1.0)]
            curv_err = max(curv_err, abs(e[0] + e[2] - 2 * e[1] - 1 / b.mass))
    sizes = [band_pair_size(b, M) for b in bands]
    dt = time.perf_counter() - t0
    ok = spread <= 4 * np.finfo(float).eps and curv_err < 1e-12 and all(np.diff(sizes) > 0) and dt < 1
    report(capsys, 5, ok, f"width ratio spread={spread:.1e} curvature err={curv_err:.1e} "
                          f"sizes={[round(s, 5) for s in sizes]} t={dt:.2f}s")


def test_criterion_6_velocity_ordering(capsys):
    t0 = time.perf_counter()
    slow = all(np.greater(*ordinary_inverse_velocity(x, 2, REF, M)) for x in np.linspace(0.02, 0.98, 50))
    fast, checked = True, 0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", SuperluminalWarning)
        for l in (1, 2, 3):
            band = gap_band(l, AB, REF, M)
            for H in -np.linspace(0.005, 0.5, 50):
                r = gap_velocity_ratio(l, H, REF, band)
                if 0 < r.bracket < 1:
                    checked += 1
                    fast &= r.inv_V < r.inv_v
    dt = time.perf_counter() - t0
    ok = slow and fast and checked > 0 and dt < 1
    report(capsys, 6, ok, f"C- slow-down={slow}, gap speed-up={fast} on {checked} points t={dt:.2f}s")


def test_criterion_7_composite(capsys):
    t0 = time.perf_counter()
    H = -0.1
    c = build_composite(H, 3, 1, REF, M, AB)
    (p,) = c.gap_part
    xi_cf, eta_cf = 1.5 + REF.beta / AB.a, abs(H) / AB.a
    bound = 10 * REF.beta ** 2
    d_xi, d_eta = rel(p.xi, xi_cf), rel(p.eta, eta_cf)
    (mid,) = c.ordinary_part
    h_err = abs(real_rapidity(mid.real, M, REF) - H)
    imag_e = abs(c.image.eigenenergy_imag)
    dt = time.perf_counter() - t0
    ok = d_xi < bound and d_eta < bound and h_err < 1e-12 and imag_e < 1e-10 and dt < 1
    report(capsys, 7, ok, f"xi={p.xi:.6f} vs {xi_cf:.6f} (rel {d_xi:.1e}), eta={p.eta:.6f} vs {eta_cf:.6f} "
                          f"(rel {d_eta:.1e}), bound {bound:.0e}; |h(xi-)-H|={h_err:.1e} "
                          f"|Im E|={imag_e:.1e} t={dt:.2f}s")


def test_criterion_8_bae(capsys):
    t0 = time.perf_counter()
    worst, perturbed = 0.0, 0.0
    for n, guess in ((2, 1.425), (3, 1.44), (2, 1.56)):
        params = AtomChainParams(omega12=1.5, beta=0.01, gamma=0.015, rho=1.0, length=5000.0)
        omega = quantize_vacuum(n, params, guess)
        H = omega / params.omega12 - 1.0

        def residuals(h):
            img = string_image(build_string(h, n, params.beta), Band.LowerBranch, M, params, RapidityMode.VACUUM)
            return [abs(r) for r in bae_residual(img, params, M)]

        worst = max(worst, max(residuals(H)))
        perturbed = max(perturbed, min(max(residuals(H + 0.1 * params.beta)), max(residuals(H - 0.1 * params.beta))))
    dt = time.perf_counter() - t0
    ok = worst < 1e-8 and perturbed > 1e-3 and dt < 1
    report(capsys, 8, ok, f"quantized max residual={worst:.1e}, perturbed min-of-max={perturbed:.2f} t={dt:.2f}s")


def test_criterion_9_cli(capsys):
    t0 = time.perf_counter()
    bad = []
    for name, argv in COMMANDS.items():
        c1, a, _ = run_cli(argv, capsys)
        c2, b, _ = run_cli(argv, capsys)
        _, j1, _ = run_cli(argv + ["--format", "json"], capsys)
        _, j2, _ = run_cli(argv + ["--format", "json"], capsys)
        if c1 or c2 or a != b or j1 != j2 or not tables_agree(a, j1):
            bad.append(name)
    dt = time.perf_counter() - t0
    ok = not bad and dt < 5
    report(capsys, 9, ok, f"{len(COMMANDS)} subcommands, mismatches={bad} t={dt:.2f}s")
