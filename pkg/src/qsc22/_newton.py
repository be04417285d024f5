"""Damped Newton iteration and one-parameter continuation.

Solvers here work on vector residual functions, real or complex; the
Jacobian is formed by central differences (a complex step along each
coordinate for complex unknowns, which is exact enough for the
holomorphic residuals used by the Bethe modules).  Damping is Armijo
backtracking on the residual 2-norm.
"""

from __future__ import annotations

from typing import Callable, Iterable, Sequence

import numpy as np


class NoConvergence(RuntimeError):
    """Newton iteration failed to reach the residual target."""


class PathCollision(RuntimeError):
    """Two tracked roots approached each other along a continuation path."""


class SingularDenominator(ValueError):
    """A residual denominator (or numerator under a log) vanished."""


def _jacobian(fun: Callable[[np.ndarray], np.ndarray], z: np.ndarray,
              f0: np.ndarray, step: float) -> np.ndarray:
    n = z.size
    jac = np.zeros((f0.size, n), dtype=complex)
    for k in range(n):
        h = step * max(1.0, abs(z[k]))
        zp = z.copy(); zp[k] += h
        zm = z.copy(); zm[k] -= h
        jac[:, k] = (fun(zp) - fun(zm)) / (2.0 * h)
    return jac

def solve_damped(
    fun: Callable[[np.ndarray], np.ndarray],
    z0: Sequence[complex],
    *,
    tol: float = 1e-13,
    max_iter: int = 60,
    fd_step: float = 1e-7,
    armijo: float = 1e-4,
    real: bool = False,
) -> np.ndarray:
    """Newton with Armijo backtracking; returns the root vector.

    With real=True the iteration stays on the real axis (for residual
    functions that are real-valued on real input).
    """
    z = np.asarray(z0, dtype=float if real else complex).copy()
    if z.size == 0:
        return z
    fval = np.asarray(fun(z))
    for _ in range(max_iter):
        norm = float(np.linalg.norm(fval))
        if float(np.max(np.abs(fval))) < tol:
            return z
        jac = _jacobian(fun, z, fval, fd_step)
        if real:
            jac = jac.real
        try:
            step = np.linalg.solve(jac, -fval)
        except np.linalg.LinAlgError as exc:
            raise NoConvergence(f"singular Jacobian at |f|={norm:.3e}") from exc
        if real:
            step = step.real
        alpha = 1.0
        for _ in range(40):
            trial = z + alpha * step
            ftrial = np.asarray(fun(trial))
            if float(np.linalg.norm(ftrial)) <= (1.0 - armijo * alpha) * norm:
                z, fval = trial, ftrial
                break
            alpha *= 0.5
        else:
            raise NoConvergence(f"line search stalled at |f|={norm:.3e}")
    if float(np.max(np.abs(fval))) < tol:
        return z
    raise NoConvergence(
        f"residual {float(np.max(np.abs(fval))):.3e} after {max_iter} iterations")


def continue_path(
    fun_of_t: Callable[[float, np.ndarray], np.ndarray],
    ts: Iterable[float],
    z0: Sequence[complex],
    *,
    collision_groups: Sequence[Sequence[int]] = (),
    collision_tol: float = 1e-9,
    **newton_kwargs,
) -> np.ndarray:
    """Track a root along parameter values ts, guarding group collisions."""
    z = np.asarray(z0, dtype=complex if not newton_kwargs.get("real") else float).copy()
    for t in ts:
        z = solve_damped(lambda v: fun_of_t(t, v), z, **newton_kwargs)
        for group in collision_groups:
            idx = list(group)
            for a in range(len(idx)):
                for b in range(a + 1, len(idx)):
                    if abs(z[idx[a]] - z[idx[b]]) < collision_tol:
                        raise PathCollision(
                            f"roots {idx[a]} and {idx[b]} collided at t={t}")
    return z


def bisect_real(fun: Callable[[float], float], lo: float, hi: float,
                *, tol: float = 1e-14, max_iter: int = 200) -> float:
    """Plain bisection for a bracketed real root."""
    flo, fhi = fun(lo), fun(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if flo * fhi > 0.0:
        raise ValueError("root not bracketed")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        fmid = fun(mid)
        if fmid == 0.0 or hi - lo < tol * max(1.0, abs(mid)):
            return mid
        if flo * fmid < 0.0:
            hi, fhi = mid, fmid
        else:
            lo, flo = mid, fmid
    return 0.5 * (lo + hi)
