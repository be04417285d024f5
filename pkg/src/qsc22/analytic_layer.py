"""Zhukovsky kinematics and the numeric source-function layer.

The spectral parameter u and the Zhukovsky variable x are related by
x + 1/x = 2u/h.  The outer sheet carries |x| >= 1 with a short cut on
(-h, h); the inner sheet is its reciprocal.  A source function F is a
single-valued function of x with F(x) F(1/x) = 1; four families are
supported (rational root data, polynomial, its homogeneous limit, and
exponential).  On top of these the module builds the truncated products
f_N, mu_N, omega_N, whose regulator-independent ratios are exact at any
truncation order, and the pointwise monodromy residuals of the rank-one
P-mu system.  Everything here is floating point; exact statements live
in the polynomial modules.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Sequence, Tuple

import numpy as np

OUTER = "outer"
INNER = "inner"

Complex = complex
Vec2 = Tuple[complex, complex]


class OnCut(ValueError):
    """Evaluation requested on the open cut without a side flag."""


def x_of_u(u: complex, hcoup: float, sheet: str = OUTER, side: int = 0) -> complex:
    """Zhukovsky map u -> x with explicit sheet and optional cut side.

    The outer branch is (u + sqrt(u-h)*sqrt(u+h))/h with principal
    square roots, which places the short cut on (-h, h) and satisfies
    |x| >= 1 off the cut.  For real u strictly inside the cut a side
    flag +1/-1 selects the limit from above/below.
    """
    if hcoup <= 0:
        raise ValueError("hcoup must be positive")
    u = complex(u)
    h = float(hcoup)
    if u.imag == 0.0 and abs(u.real) < h:
        if side == 0:
            raise OnCut(f"u={u.real} lies on the open cut (-{h}, {h})")
        x = (u.real + 1j * side * math.sqrt(h * h - u.real * u.real)) / h
    else:
        x = (u + cmath.sqrt(u - h) * cmath.sqrt(u + h)) / h
    if sheet == INNER:
        return 1.0 / x
    if sheet != OUTER:
        raise ValueError(f"unknown sheet {sheet!r}")
    return x


def u_of_x(x: complex, hcoup: float) -> complex:
    """Inverse Zhukovsky map, u = h*(x + 1/x)/2 (sheet independent)."""
    return hcoup * (x + 1.0 / x) / 2.0


@dataclass(frozen=True)
class ZhukPoint:
    """A spectral-parameter point with its sheet and, on the cut, a side."""

    u: complex
    sheet: str = OUTER
    side: int = 0

    def x(self, hcoup: float) -> complex:
        return x_of_u(self.u, hcoup, self.sheet, self.side)

    def swapped(self) -> "ZhukPoint":
        return ZhukPoint(self.u, INNER if self.sheet == OUTER else OUTER, self.side)


def _as_complex_list(values) -> Tuple[complex, ...]:
    return tuple(complex(v) for v in values)


@dataclass(frozen=True)
class SourceF:
    """A source function F(x) with F(x)*F(1/x) = 1.

    kind "ext"    : root data {y_k^+, y_k^-} with |y| > 1 and the shift
                    constraint y+ + 1/y+ - y- - 1/y- = 2i/h per pair;
    kind "pol"    : sign * prod (x - theta_k)/(x*theta_k - 1);
    kind "polinf" : x^(-mtheta), the all-theta-to-infinity limit;
    kind "exp"    : exp(theta*(x - 1/x)).

    hcoup is carried along so that u-space evaluation is self-contained.
    """

    kind: str
    hcoup: float
    yplus: Tuple[complex, ...] = ()
    yminus: Tuple[complex, ...] = ()
    thetas: Tuple[complex, ...] = ()
    sign: int = 1
    mtheta: int = 0

    @classmethod
    def ext(cls, hcoup: float, yplus, yminus, tol: float = 1e-9) -> "SourceF":
        yp = _as_complex_list(yplus)
        ym = _as_complex_list(yminus)
        if len(yp) != len(ym):
            raise ValueError("yplus and yminus must pair up")
        for p, m in zip(yp, ym):
            if abs(p) <= 1.0 or abs(m) <= 1.0:
                raise ValueError("ext roots must satisfy |y| > 1")
            shift = p + 1.0 / p - m - 1.0 / m - 2j / hcoup
            if abs(shift) > tol:
                raise ValueError(f"pair ({p}, {m}) violates the shift constraint by {abs(shift):.3e}")
        return cls("ext", float(hcoup), yplus=yp, yminus=ym, mtheta=len(yp))

    @classmethod
    def pol(cls, hcoup: float, thetas, sign: int = 1) -> "SourceF":
        if sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        return cls("pol", float(hcoup), thetas=_as_complex_list(thetas), sign=sign,
                   mtheta=len(tuple(thetas)))

    @classmethod
    def pol_infinity(cls, hcoup: float, mtheta: int) -> "SourceF":
        return cls("polinf", float(hcoup), mtheta=int(mtheta))

    @classmethod
    def exp_kind(cls, hcoup: float, theta) -> "SourceF":
        return cls("exp", float(hcoup), thetas=(complex(theta),))

    def eval_x(self, x: complex) -> complex:
        """Value of F at a raw Zhukovsky point x."""
        if self.kind == "ext":
            out = 1.0 + 0j
            for yp, ym in zip(self.yplus, self.yminus):
                out *= cmath.sqrt(((x - yp) * (1.0 / x - ym)) / ((x - ym) * (1.0 / x - yp)))
            return out
        if self.kind == "pol":
            out = complex(self.sign)
            for t in self.thetas:
                out *= (x - t) / (x * t - 1.0)
            return out
        if self.kind == "polinf":
            return x ** (-self.mtheta)
        if self.kind == "exp":
            return cmath.exp(self.thetas[0] * (x - 1.0 / x))
        raise ValueError(f"unknown kind {self.kind!r}")

    def __call__(self, u: complex, sheet: str = OUTER, side: int = 0) -> complex:
        return self.eval_x(x_of_u(u, self.hcoup, sheet, side))

    def as_json(self) -> dict:
        def pairs(vals):
            return [[v.real, v.imag] for v in vals]

        data = {"kind": self.kind, "hcoup": self.hcoup}
        if self.kind == "ext":
            data["yplus"] = pairs(self.yplus)
            data["yminus"] = pairs(self.yminus)
        elif self.kind == "pol":
            data["theta"] = pairs(self.thetas)
            data["sign"] = self.sign
        elif self.kind == "polinf":
            data["Mtheta"] = self.mtheta
        elif self.kind == "exp":
            data["theta"] = [self.thetas[0].real, self.thetas[0].imag]
        return data

    @classmethod
    def from_json(cls, data: dict) -> "SourceF":
        kind = data["kind"]
        h = float(data["hcoup"])
        if kind == "ext":
            yp = [complex(a, b) for a, b in data["yplus"]]
            ym = [complex(a, b) for a, b in data["yminus"]]
            return cls.ext(h, yp, ym)
        if kind == "pol":
            ts = [complex(a, b) for a, b in data.get("theta", [])]
            return cls.pol(h, ts, int(data.get("sign", 1)))
        if kind == "polinf":
            return cls.pol_infinity(h, int(data["Mtheta"]))
        if kind == "exp":
            a, b = data["theta"]
            return cls.exp_kind(h, complex(a, b))
        raise ValueError(f"unknown kind {kind!r}")


def eval_F(source: SourceF, point: ZhukPoint) -> complex:
    """Value of the source function at a sheet-aware point."""
    return source.eval_x(point.x(source.hcoup))


def shell_pair(hcoup: float, v: float) -> Tuple[complex, complex]:
    """Outer-sheet pair (y+, y-) = (x(v + i/2), x(v - i/2)).

    Satisfies the shift constraint exactly by construction and |y| > 1
    for real v away from the cut-collision window.
    """
    return (x_of_u(v + 0.5j, hcoup), x_of_u(v - 0.5j, hcoup))


def shell_pairs(hcoup: float, vs: Sequence[float]) -> Tuple[Tuple[complex, ...], Tuple[complex, ...]]:
    ys = [shell_pair(hcoup, v) for v in vs]
    return tuple(p for p, _ in ys), tuple(m for _, m in ys)


def b_factor(source: SourceF, branch: int, x: complex) -> complex:
    """B_(+1/-1)(x) = prod_k sqrt(h/(2 y_k)) * (1/x - y_k), roots y^-/y^+.

    branch +1 runs over the yminus list, branch -1 over yplus, matching
    the convention that the plus factor is built on the minus roots.
    """
    roots = source.yminus if branch > 0 else source.yplus
    out = 1.0 + 0j
    for y in roots:
        out *= cmath.sqrt(source.hcoup / (2.0 * y)) * (1.0 / x - y)
    return out


def r_factor(source: SourceF, branch: int, x: complex) -> complex:
    """R_(+1/-1)(x); same prefactors and roots as b_factor with (x - y)."""
    roots = source.yminus if branch > 0 else source.yplus
    out = 1.0 + 0j
    for y in roots:
        out *= cmath.sqrt(source.hcoup / (2.0 * y)) * (x - y)
    return out


def qq_pm(source: SourceF, branch: int, x: complex) -> complex:
    """The Drinfeld-type combination (-1)^mtheta * B_branch * R_branch."""
    return (-1) ** source.mtheta * b_factor(source, branch, x) * r_factor(source, branch, x)


def truncated_f(source: SourceF, n_trunc: int, u: complex, bar: bool = False) -> complex:
    """f_N(u) = prod_{n=0..N} F(x(u + i n)); bar=True mirrors the shifts.

    Telescoping gives the exact finite-order identity
    f_N(u)/f_N(u + i) = F(x(u)) / F(x(u + i(N+1))).
    """
    step = -1j if bar else 1j
    out = 1.0 + 0j
    for n in range(n_trunc + 1):
        out *= source(u + step * n)
    return out


def mu_omega(source: SourceF, n_trunc: int, u: complex,
             swap_sheet: bool = False) -> Tuple[complex, complex]:
    """Truncated (mu_N, omega_N) at u.

    mu_N = F * prod_{n=1..N} F^{[2n]}/F^{[-2n]} and omega_N is the
    symmetric product over n in [-N, N].  With swap_sheet=True only the
    n=0 factor moves to the inner sheet, so mu/mu~ = omega/omega~ = F^2
    holds exactly at every truncation order.
    """
    f0 = source(u, INNER if swap_sheet else OUTER)
    mu = f0
    omega = f0
    for n in range(1, n_trunc + 1):
        fp = source(u + 1j * n)
        fm = source(u - 1j * n)
        mu *= fp / fm
        omega *= fp * fm
    return mu, omega


def f_cauchy_gaps(source: SourceF, orders: Sequence[int], u: complex,
                  normalize: Callable[[complex], complex] | None = None) -> list:
    """Successive relative gaps |f_{N'}/f_N - 1| of (optionally rescaled) f_N.

    Convergence diagnostic only; nothing here is regulator independent,
    so callers decide what shrinkage to expect.
    """
    vals = []
    for n in sorted(orders):
        v = truncated_f(source, n, u)
        if normalize is not None:
            v = normalize(v)
        vals.append(v)
    return [abs(b / a - 1.0) for a, b in zip(vals, vals[1:])]


def pmu_residual_caseB(p_eval: Callable[[ZhukPoint], Vec2],
                       pstar_eval: Callable[[ZhukPoint], Vec2],
                       source: SourceF, n_trunc: int, u: complex) -> np.ndarray:
    """Pointwise residuals of the rank-one P-mu monodromy system.

    With tilde meaning the sheet swap of the x dependence, the four
    equations are

        P~_a = (mu/F) eps_ab P^b,     P~^a = -(F/mu) eps^ab P_b,
        mu - mu~ = eps^ab P_a P~_b,   P^a P_a = 1/F - F,

    and the returned residuals are their mu-free probes:
    [0] P~_a P^a, [1] P~^a P_a (both exactly zero when the directional
    content of the first two equations holds), [2] the discontinuity
    equation with mu~ = mu/F^2 and mu extracted from the first equation
    (falling back to the truncated product when P* vanishes), and
    [3] the scalar constraint.
    """
    pt = ZhukPoint(complex(u), OUTER)
    P = p_eval(pt)
    Pt = p_eval(pt.swapped())
    Ps = pstar_eval(pt)
    Pts = pstar_eval(pt.swapped())
    fval = source(u)

    r1 = Pt[0] * Ps[0] + Pt[1] * Ps[1]
    r2 = Pts[0] * P[0] + Pts[1] * P[1]

    # mu from the first equation: P~_1 = (mu/F) P^2, P~_2 = -(mu/F) P^1.
    if abs(Ps[1]) >= abs(Ps[0]) and abs(Ps[1]) > 0.0:
        mu_impl = fval * Pt[0] / Ps[1]
    elif abs(Ps[0]) > 0.0:
        mu_impl = -fval * Pt[1] / Ps[0]
    else:
        mu_impl, _ = mu_omega(source, n_trunc, u)
    r3 = (P[0] * Pt[1] - P[1] * Pt[0]) - mu_impl * (1.0 - 1.0 / fval ** 2)
    r4 = (Ps[0] * P[0] + Ps[1] * P[1]) - (1.0 / fval - fval)
    return np.array([r1, r2, r3, r4], dtype=complex)


def caseb_p_evaluators(source: SourceF, x_up: Sequence[complex],
                       x_down: Sequence[complex], *, span: int = 2,
                       fit_radius: float = 1.3, fit_points: int = 120):
    """Build the rank-one P pair from solved root data with an ext source.

    The first component is the Laurent product with zeros at the x_up
    roots and reciprocal zeros at the x_down roots; the second is a
    Laurent polynomial on powers x^span..x^-span fitted so that the swap
    Wronskian P_1~ P_2 - P_2~ P_1 equals the two-branch combination
    R+ B- - R- B+ on a circle of radius fit_radius.  The dual pair comes
    from the swap formula, dividing by (R+ B- - R- B+)/(1/F - F), so the
    directional residuals vanish identically and the remaining residuals
    measure how well the root data closes the Wronskian constraint.

    Returns (p_eval, pstar_eval, fit_residual).
    """
    if source.kind != "ext":
        raise ValueError("case-B evaluators need an ext source")
    up = _as_complex_list(x_up)
    down = _as_complex_list(x_down)

    def p1(x: complex) -> complex:
        out = 1.0 + 0j
        for r in up:
            out *= x - r
        for r in down:
            out *= 1.0 / x - r
        return out

    def rhs(x: complex) -> complex:
        return (r_factor(source, +1, x) * b_factor(source, -1, x)
                - r_factor(source, -1, x) * b_factor(source, +1, x))

    powers = range(span, -span - 1, -1)
    xs = fit_radius * np.exp(2j * math.pi * np.arange(fit_points) / fit_points)
    mat = np.array([[p1(1.0 / x) * x ** k - p1(x) * x ** (-k) for k in powers]
                    for x in xs])
    vec = np.array([rhs(x) for x in xs])
    coeffs, *_ = np.linalg.lstsq(mat, vec, rcond=None)
    fit_residual = float(np.max(np.abs(mat @ coeffs - vec)))

    def p2(x: complex) -> complex:
        return sum(c * x ** k for c, k in zip(coeffs, powers))

    def p_eval(pt: ZhukPoint) -> Vec2:
        x = pt.x(source.hcoup)
        return (p1(x), p2(x))

    def pstar_eval(pt: ZhukPoint) -> Vec2:
        x = pt.x(source.hcoup)
        f = source.eval_x(x)
        s = rhs(x) / (1.0 / f - f)
        return (-p2(1.0 / x) / s, p1(1.0 / x) / s)

    return p_eval, pstar_eval, fit_residual


def baxter_step(mu: np.ndarray, p: Sequence[complex], pstar: Sequence[complex],
                fval: complex) -> np.ndarray:
    """One quasi-Baxter step mu -> (1 + P P*/F) mu (1 + P* P/F).

    The right factor is the transpose of the left one, so the step is a
    congruence: the antisymmetric part scales by det(1 + P P*/F) and the
    determinant of the symmetric part by its square.
    """
    if fval == 0:
        raise ValueError("fval must be nonzero")
    mu = np.asarray(mu, dtype=complex)
    if mu.shape != (2, 2):
        raise ValueError("mu must be a 2x2 matrix")
    left = np.eye(2, dtype=complex) + np.outer(p, pstar) / fval
    return left @ mu @ left.T
