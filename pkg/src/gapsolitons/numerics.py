"""Root finding, finite differences and grid scanning shared by all modules."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import NoConvergence, NoSignChange, SingularJacobian

_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class SolverConfig:
    """Tolerances and iteration caps threaded through every solver call.

    ``fd_step`` and ``edge_exclusion`` are relative: the first is scaled by
    ``max(|x|, 1)``, the second by the lower gap edge.
    """

    abs_tol: float = 1e-12
    rel_tol: float = 1e-12
    max_iter: int = 200
    max_iter_2d: int = 100
    fd_step: float = 1e-7
    edge_exclusion: float = 1e-9
    bisect_width: float = 1e-6

    def __post_init__(self):
        for name in ("abs_tol", "rel_tol", "fd_step", "edge_exclusion", "bisect_width"):
            if not getattr(self, name) > 0:
                raise ValueError(f"SolverConfig.{name} must be strictly positive")
        if self.max_iter < 1 or self.max_iter_2d < 1:
            raise ValueError("SolverConfig iteration caps must be >= 1")


DEFAULT_CONFIG = SolverConfig()


def fd_derivative(f: Callable, x, step: float):
    """Centered finite difference ``(f(x+step) - f(x-step)) / (2 step)``."""
    return (f(x + step) - f(x - step)) / (2.0 * step)


def bisect_then_newton(f: Callable[[float], float], bracket: tuple[float, float],
                       cfg: SolverConfig = DEFAULT_CONFIG, df: Callable | None = None,
                       ftol: float | None = None) -> float:
    """Root of a continuous function with a sign change on ``bracket``.

    Bisection shrinks the bracket to ``cfg.bisect_width`` (relative), then
    safeguarded Newton polishes: any Newton step that leaves the current
    bracket is replaced by a bisection step. Without ``df`` the derivative
    is a centered difference.

    Converged means ``|f(x)| <= ftol`` (default ``cfg.abs_tol``) or the
    bracket has collapsed to a few ulps, whichever comes first.
    """
    lo, hi = float(bracket[0]), float(bracket[1])
    if lo > hi:
        lo, hi = hi, lo
    ftol = cfg.abs_tol if ftol is None else ftol
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if np.sign(flo) == np.sign(fhi):
        raise NoSignChange(f"f({lo!r})={flo!r} and f({hi!r})={fhi!r} share a sign")

    def floor(a, b):
        return b - a <= 4.0 * _EPS * max(abs(a), abs(b), 1e-300)

    x = 0.5 * (lo + hi)
    for _ in range(cfg.max_iter):
        fx = f(x)
        if abs(fx) <= ftol:
            return x
        if np.sign(fx) == np.sign(flo):
            lo, flo = x, fx
        else:
            hi = x
        if floor(lo, hi):
            return x
        width = hi - lo
        if width > cfg.bisect_width * max(abs(x), 1.0):
            x = 0.5 * (lo + hi)
            continue
        if df is None:
            step = cfg.fd_step * max(abs(x), 1.0)
            step = min(step, 0.5 * width)
            slope = fd_derivative(f, x, step) if lo < x - step and x + step < hi else (f(hi) - flo) / width
        else:
            slope = df(x)
        xn = x - fx / slope if slope != 0 and math.isfinite(slope) else None
        if xn is None or not lo < xn < hi:
            xn = 0.5 * (lo + hi)
        elif abs(xn - x) <= 2.0 * _EPS * abs(x):
            # Newton has stalled at round-off
            return xn if abs(f(xn)) < abs(fx) else x
        x = xn
    raise NoConvergence(f"bisect_then_newton: no convergence after {cfg.max_iter} iterations")


def _fd_jacobian(F, x, f0, cfg):
    jac = np.empty((2, 2))
    for i in range(2):
        h = cfg.fd_step * max(abs(x[i]), 1.0)
        xp = x.copy()
        xm = x.copy()
        xp[i] += h
        xm[i] -= h
        jac[:, i] = (np.asarray(F(xp), float) - np.asarray(F(xm), float)) / (2.0 * h)
    return jac


def newton2d(F: Callable, seed: Sequence[float], cfg: SolverConfig = DEFAULT_CONFIG,
             jac: Callable | None = None, full_output: bool = False):
    """Solve ``F(x, y) = (0, 0)`` by Newton iteration.

    ``F`` takes a length-2 array. The Jacobian is a centered finite
    difference unless ``jac`` is given. Once ``max|F| < cfg.abs_tol`` one
    more polishing step is taken and kept only if it does not increase the
    residual, which drives well-conditioned problems to round-off.

    Returns the root as a tuple, or ``(root, info)`` with ``full_output``;
    ``info`` holds ``iterations``, ``residual`` and ``history`` (max|F| per
    iterate).
    """
    x = np.array(seed, dtype=float)
    history = []
    for it in range(cfg.max_iter_2d + 1):
        f0 = np.asarray(F(x), dtype=float)
        res = float(np.max(np.abs(f0)))
        history.append(res)
        if not np.all(np.isfinite(f0)):
            raise NoConvergence(f"newton2d: non-finite residual at {x}")
        if res < cfg.abs_tol:
            J = jac(x) if jac is not None else _fd_jacobian(F, x, f0, cfg)
            try:
                xp = x - np.linalg.solve(J, f0)
                rp = float(np.max(np.abs(np.asarray(F(xp), dtype=float))))
            except Exception:
                rp = math.inf
            if rp <= res:
                x, res = xp, rp
                history.append(rp)
            root = (float(x[0]), float(x[1]))
            if full_output:
                return root, {"iterations": it, "residual": res, "history": history}
            return root
        if it == cfg.max_iter_2d:
            break
        J = jac(x) if jac is not None else _fd_jacobian(F, x, f0, cfg)
        if not np.all(np.isfinite(J)) or abs(np.linalg.det(J)) < 1e-300:
            raise SingularJacobian(f"newton2d: singular Jacobian at {x}")
        try:
            dx = np.linalg.solve(J, f0)
        except np.linalg.LinAlgError as exc:
            raise SingularJacobian(str(exc)) from exc
        x = x - dx
    raise NoConvergence(f"newton2d: residual {history[-1]:.3e} after {cfg.max_iter_2d} iterations")


def complex_newton(f: Callable[[complex], complex], target: complex, seed: complex,
                   cfg: SolverConfig = DEFAULT_CONFIG, full_output: bool = False):
    """Solve ``f(z) = target`` as a real 2D system in ``(Re z, Im z)``."""

    def F(v):
        r = f(complex(v[0], v[1])) - target
        return (r.real, r.imag)

    out = newton2d(F, (seed.real, seed.imag), cfg, full_output=full_output)
    if full_output:
        (x, y), info = out
        return complex(x, y), info
    return complex(*out)


def grid_scan(f: Callable, grid, workers: int | None = None,
              catch: tuple[type[BaseException], ...] = (Exception,)) -> list:
    """Evaluate ``f`` on every grid point, keeping grid order.

    Each entry is ``(x, value, None)`` or ``(x, None, exc)`` when ``f``
    raised one of ``catch``. ``workers > 1`` evaluates rows on a thread
    pool; the result order is still the grid order.
    """

    def one(x):
        try:
            return (x, f(x), None)
        except catch as exc:
            return (x, None, exc)

    points = list(grid)
    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(one, points))
    return [one(x) for x in points]
