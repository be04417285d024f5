"""Bethe equations of the inhomogeneous su(2|2) chain and their Lieb-Wu limit.

Three families of roots enter the nested system: zeros x_{1|e} on the
first sheet, middle-node rapidities u_{1|1}, and zeros x_{1|t} on the
second sheet.  Every equation is evaluated in log form with the
principal branch, one residual per root, so a solved configuration is a
zero vector.  The middle-node equation is written with the self-term
excluded and -1 on the right-hand side; with that bookkeeping a single
middle root and unit twist gives the residual i*pi rather than zero,
which is the displayed behaviour and is covered by the tests.

The homogeneous Lieb-Wu system uses the coupling u = 1/(2 h).  Its
solver works in the counting (arctan) form with integer mode numbers,
homotopy in the coupling from the decoupled point, and damped Newton;
solutions are validated against the product-form residuals and, by the
callers, against exact diagonalization.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from ._newton import (NoConvergence, PathCollision, SingularDenominator,
                      bisect_real, continue_path, solve_damped)

__all__ = [
    "HubbardSpec", "HubbardRoots", "LiebWuRoots",
    "nested_residuals", "solve_nested",
    "liebwu_residuals", "solve_liebwu", "energy_momentum",
    "u_of_x", "NoConvergence", "PathCollision", "SingularDenominator",
]


def u_of_x(hcoup: float, x: complex) -> complex:
    """Rapidity of a Zhukovsky point, u = h (x + 1/x) / 2."""
    return 0.5 * hcoup * (x + 1.0 / x)


def _distinct(values: Sequence[complex], label: str) -> Tuple[complex, ...]:
    vals = tuple(complex(v) for v in values)
    for a in range(len(vals)):
        for b in range(a + 1, len(vals)):
            if vals[a] == vals[b]:
                raise ValueError(f"repeated {label} root {vals[a]}")
    return vals


@dataclass(frozen=True)
class HubbardSpec:
    """Coupling, site count, optional inhomogeneity pairs, and twists.

    The twists are the diagonal parameters (tx, 1/tx) and (ty, 1/ty);
    only the ratio tx/ty and ty**2 enter the equations.  The plain
    constructor checks the pairing identity
    y+ + 1/y+ - y- - 1/y- = 2i/h for every pair; the `ext` factory
    additionally insists on |y| > 1, the physical configuration.  The
    relaxed constructor exists because the homogeneous limit drives y-
    inside the unit disk.
    """

    hcoup: float
    mtheta: int
    yplus: Tuple[complex, ...] = ()
    yminus: Tuple[complex, ...] = ()
    twist_x: complex = 1.0 + 0.0j
    twist_y: complex = 1.0 + 0.0j

    def __post_init__(self) -> None:
        if self.hcoup <= 0:
            raise ValueError("hcoup must be positive")
        if self.mtheta < 0:
            raise ValueError("mtheta must be nonnegative")
        object.__setattr__(self, "yplus", tuple(complex(y) for y in self.yplus))
        object.__setattr__(self, "yminus", tuple(complex(y) for y in self.yminus))
        if len(self.yplus) != len(self.yminus):
            raise ValueError("yplus and yminus lengths differ")
        if self.yplus and len(self.yplus) != self.mtheta:
            raise ValueError("inhomogeneity count must equal mtheta")
        target = 2.0j / self.hcoup
        for yp, ym in zip(self.yplus, self.yminus):
            gap = yp + 1.0 / yp - ym - 1.0 / ym - target
            if abs(gap) > 1e-8 * (1.0 + abs(yp) + abs(ym)):
                raise ValueError(f"pair ({yp}, {ym}) violates the shift constraint")

    @classmethod
    def ext(cls, hcoup: float, yplus: Sequence[complex], yminus: Sequence[complex],
            *, twist_x: complex = 1.0, twist_y: complex = 1.0) -> "HubbardSpec":
        spec = cls(hcoup, len(tuple(yplus)), tuple(yplus), tuple(yminus),
                   complex(twist_x), complex(twist_y))
        for y in spec.yplus + spec.yminus:
            if abs(y) <= 1.0:
                raise ValueError(f"inhomogeneity {y} not outside the unit circle")
        return spec


@dataclass(frozen=True)
class HubbardRoots:
    """Root lists of the three nested families."""

    x1e: Tuple[complex, ...] = ()
    u11: Tuple[complex, ...] = ()
    x112: Tuple[complex, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "x1e", _distinct(self.x1e, "x1e"))
        object.__setattr__(self, "u11", _distinct(self.u11, "u11"))
        object.__setattr__(self, "x112", _distinct(self.x112, "x112"))

    @property
    def counts(self) -> Tuple[int, int, int]:
        return (len(self.x1e), len(self.u11), len(self.x112))


@dataclass(frozen=True)
class LiebWuRoots:
    """Charge momenta k_j and spin rapidities lambda_j."""

    k: Tuple[complex, ...] = ()
    lam: Tuple[complex, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "k", _distinct(self.k, "momentum"))
        object.__setattr__(self, "lam", _distinct(self.lam, "rapidity"))


def _ratio(num: complex, den: complex) -> complex:
    guard = 1e-13 * (1.0 + abs(num) + abs(den))
    if abs(den) < guard or abs(num) < guard:
        raise SingularDenominator(f"factor {num} / {den} too close to 0 or infinity")
    return num / den


def _log(value: complex) -> complex:
    if value == 0 or not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise SingularDenominator(f"log of {value}")
    return cmath.log(value)


def nested_residuals(spec: HubbardSpec, roots: HubbardRoots) -> np.ndarray:
    """Log residuals of the three node equations, one entry per root.

    Order: first-sheet equations, middle-node equations, second-sheet
    equations.  The middle node is the self-excluded form with -1 on
    the right, so its residual is log(-product).
    """
    tx, ty = spec.twist_x, spec.twist_y
    u_first = [u_of_x(spec.hcoup, x) for x in roots.x1e]
    u_last = [u_of_x(spec.hcoup, x) for x in roots.x112]
    res = []
    for x, u in zip(roots.x1e, u_first):
        prod = tx / ty
        for yp, ym in zip(spec.yplus, spec.yminus):
            prod *= cmath.sqrt(ym / yp) * _ratio(yp - 1.0 / x, ym - 1.0 / x)
        for v in roots.u11:
            prod *= _ratio(u - v + 0.5j, u - v - 0.5j)
        res.append(_log(prod))
    for i, v in enumerate(roots.u11):
        prod = 1.0 / (ty * ty)
        for j, w in enumerate(roots.u11):
            if j != i:
                prod *= _ratio(v - w + 1.0j, v - w - 1.0j)
        for u in itertools.chain(u_first, u_last):
            prod *= _ratio(v - u - 0.5j, v - u + 0.5j)
        res.append(_log(-prod))
    for x, u in zip(roots.x112, u_last):
        prod = tx / ty
        for yp, ym in zip(spec.yplus, spec.yminus):
            prod *= cmath.sqrt(ym / yp) * _ratio(x - yp, x - ym)
        for v in roots.u11:
            prod *= _ratio(u - v + 0.5j, u - v - 0.5j)
        res.append(_log(prod))
    return np.array(res, dtype=complex)


def solve_nested(
    spec: HubbardSpec,
    counts: Tuple[int, int, int],
    seed: HubbardRoots,
    *,
    tol: float = 1e-13,
    max_iter: int = 60,
) -> HubbardRoots:
    """Damped Newton on the nested log residuals from a caller seed."""
    m_first, m_mid, m_last = counts
    z0 = np.array(list(seed.x1e) + list(seed.u11) + list(seed.x112), dtype=complex)
    if z0.size != m_first + m_mid + m_last:
        raise ValueError("seed size does not match requested counts")
    if z0.size == 0:
        return HubbardRoots()

    def unpack(z: np.ndarray) -> HubbardRoots:
        return HubbardRoots(tuple(z[:m_first]),
                            tuple(z[m_first:m_first + m_mid]),
                            tuple(z[m_first + m_mid:]))

    def fun(z: np.ndarray) -> np.ndarray:
        return nested_residuals(spec, unpack(z))

    return unpack(solve_damped(fun, z0, tol=tol, max_iter=max_iter))


def liebwu_residuals(lsites: int, u_coupling: float, roots: LiebWuRoots) -> np.ndarray:
    """Product-form log residuals: momentum family first, then spin family."""
    res = []
    sins = [cmath.sin(k) for k in roots.k]
    for i, k in enumerate(roots.k):
        prod = cmath.exp(-1j * lsites * k)
        for lam in roots.lam:
            prod *= _ratio(sins[i] - lam + 1j * u_coupling,
                           sins[i] - lam - 1j * u_coupling)
        res.append(_log(prod))
    for i, lam in enumerate(roots.lam):
        prod = 1.0 + 0.0j
        for j, mu in enumerate(roots.lam):
            if j != i:
                prod *= _ratio(lam - mu + 2j * u_coupling, lam - mu - 2j * u_coupling)
        for s in sins:
            prod *= _ratio(lam - s - 1j * u_coupling, lam - s + 1j * u_coupling)
        res.append(_log(prod))
    return np.array(res, dtype=complex)


def _counting_residuals(lsites: int, u_coupling: float,
                        mode_k: Sequence[int], mode_lam: Sequence[int],
                        z: np.ndarray) -> np.ndarray:
    n = len(mode_k)
    m = len(mode_lam)
    ks, lams = z[:n], z[n:]
    out = np.empty(n + m)
    for j in range(n):
        val = lsites * ks[j] - 2.0 * math.pi * mode_k[j] - math.pi * m
        for lam in lams:
            val += 2.0 * math.atan((math.sin(ks[j]) - lam) / u_coupling)
        out[j] = val
    for a in range(m):
        val = math.pi * (m - 1 - n) - 2.0 * math.pi * mode_lam[a]
        for kk in ks:
            val += 2.0 * math.atan((lams[a] - math.sin(kk)) / u_coupling)
        for b in range(m):
            if b != a:
                val -= 2.0 * math.atan((lams[a] - lams[b]) / (2.0 * u_coupling))
        out[n + a] = val
    return out


def _lambda_seed_pool(sins: Sequence[float]) -> list:
    """Stationary points of prod (lam - sin k): interlacing spin seeds."""
    if len(sins) < 2:
        pool = []
    else:
        deriv = np.polyder(np.poly(np.asarray(sins, dtype=float)))
        pool = sorted(float(r.real) for r in np.roots(deriv))
    lo = min(sins, default=0.0) - 1.0
    hi = max(sins, default=0.0) + 1.0
    return pool + [0.0, lo, hi]


def solve_liebwu(
    lsites: int,
    u_coupling: float,
    n_charge: int,
    m_spin: int,
    mode_k: Sequence[int],
    mode_lam: Sequence[int],
    *,
    steps: int = 40,
    tol: float = 1e-13,
) -> LiebWuRoots:
    """Homotopy in the coupling plus damped Newton on the counting form.

    Mode numbers are plain integers, distinct within each family; they
    fix the branch of every arctan sum.  The returned roots satisfy the
    product-form residuals below 1e-12.
    """
    mode_k = [int(i) for i in mode_k]
    mode_lam = [int(j) for j in mode_lam]
    if len(mode_k) != n_charge or len(mode_lam) != m_spin:
        raise ValueError("mode-number lists must match the root counts")
    if len(set(mode_k)) != len(mode_k) or len(set(mode_lam)) != len(mode_lam):
        raise ValueError("mode numbers must be distinct within each family")
    if not 0 <= m_spin <= n_charge:
        raise ValueError("spin count must satisfy 0 <= M <= N")
    if u_coupling <= 0:
        raise ValueError("coupling must be positive")
    if n_charge == 0:
        return LiebWuRoots()

    u_start = min(1e-3, u_coupling)
    ks0 = [(2.0 * math.pi * i + math.pi * m_spin) / lsites for i in mode_k]
    pool = _lambda_seed_pool([math.sin(k) for k in ks0])
    groups = [range(n_charge), range(n_charge, n_charge + m_spin)]

    def fun_of_t(t: float, z: np.ndarray) -> np.ndarray:
        return _counting_residuals(lsites, t, mode_k, mode_lam, z)

    last_error: Exception | None = None
    seen = set()
    for subset in itertools.combinations(range(len(pool)), m_spin):
        lam0 = tuple(round(pool[i], 12) for i in subset)
        if lam0 in seen:
            continue
        seen.add(lam0)
        z0 = np.array(ks0 + list(lam0), dtype=float)
        try:
            z = solve_damped(lambda v: fun_of_t(u_start, v), z0,
                             tol=tol, real=True)
            if u_coupling > u_start:
                path = np.linspace(u_start, u_coupling, steps + 1)[1:]
                z = continue_path(fun_of_t, path, z,
                                  collision_groups=groups, real=True, tol=tol)
        except (NoConvergence, PathCollision) as exc:
            last_error = exc
            continue
        roots = LiebWuRoots(tuple(z[:n_charge]), tuple(z[n_charge:]))
        if float(np.max(np.abs(liebwu_residuals(lsites, u_coupling, roots)))) < 1e-12:
            return roots
    if isinstance(last_error, PathCollision):
        raise last_error
    raise NoConvergence(
        f"no spin seed converged for modes I={mode_k}, J={mode_lam}"
    ) from last_error


def energy_momentum(lsites: int, u_coupling: float, roots: LiebWuRoots):
    """Energy and total momentum of a Lieb-Wu configuration.

    E = u (L - 2N) - 2 sum cos k, P = sum k mod 2 pi; both are reported
    real when the imaginary parts are negligible.
    """
    ks = np.asarray(roots.k, dtype=complex)
    energy = u_coupling * (lsites - 2 * ks.size) - 2.0 * complex(np.sum(np.cos(ks)))
    momentum = float(np.sum(ks).real) % (2.0 * math.pi)
    if abs(energy.imag) < 1e-9 * (1.0 + abs(energy.real)):
        return float(energy.real), momentum
    return energy, momentum
