"""Transfer-matrix families on the (a, s) hook and their bilinear checks.

T functions are built from a Q system as two-term shifted Wronskians.
They live on the hook {s in [0,2], a >= 0} union {a in [0,2], s >= 0}
and vanish identically outside it (and for negative indices).  On that
domain they satisfy the discrete bilinear equation

    T_{a,s}^+ T_{a,s}^- = T_{a,s+1} T_{a,s-1} + T_{a+1,s} T_{a-1,s}

at every cell except (0,0), where both right-hand products vanish by
the boundary conventions while the left side does not; `check_hirota`
therefore skips exactly that cell.  All checks are exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Mapping, Sequence, Tuple

from .exact_poly import GaussRat, TwistedPoly
from .qsystem import QSystem, gauge_transform, generate_from_seed, h_rotate


class DegenerateTwist(ValueError):
    """Twist parameters collide; the constant solution degenerates."""


def in_hook(a: int, s: int) -> bool:
    return a >= 0 and s >= 0 and not (a >= 3 and s >= 3)


def t_function(q: QSystem, a: int, s: int, reverse: bool = False) -> TwistedPoly:
    """T_{a,s} from the Q system; zero outside the hook.

    With reverse=True every shift superscript is negated and the two
    antisymmetric contractions use lowered index tensors (an extra sign
    on the a=1 row and the s=1 column).  That is the dual family when
    applied to the raised system.
    """
    if not in_hook(a, s):
        return TwistedPoly.zero()
    r = -1 if reverse else 1
    eps = -1 if reverse else 1

    def S(slot: str, k: int) -> TwistedPoly:
        return q[slot].shift(r * k)

    def sgn(n: int) -> int:
        return 1 if n % 2 == 0 else -1

    if s == 0:
        return sgn(a) * (S("12|12", a) * S("0|0", -a))
    if s == 1 and a >= 1:
        return -eps * (S("12|1", a) * S("0|2", -a) - S("12|2", a) * S("0|1", -a))
    if s == 2 and a >= 2:
        return sgn(a) * (S("12|0", a) * S("0|12", -a))
    if a == 0:
        return sgn(s) * (S("0|0", s) * S("12|12", -s))
    if a == 1:
        return (eps * sgn(s + 1)) * (
            S("1|0", s) * S("2|12", -s) - S("2|0", s) * S("1|12", -s)
        )
    return sgn(s) * (S("12|0", s) * S("0|12", -s))


class THook:
    """T values on a rectangular window of the hook lattice."""

    __slots__ = ("window", "values")

    def __init__(self, window: Tuple[int, int], values: Mapping[Tuple[int, int], TwistedPoly]) -> None:
        amax, smax = int(window[0]), int(window[1])
        vals = {}
        for a in range(amax + 1):
            for s in range(smax + 1):
                if (a, s) not in values:
                    raise ValueError(f"missing cell ({a},{s})")
                vals[(a, s)] = values[(a, s)]
        self.window = (amax, smax)
        self.values = vals

    def __getitem__(self, key: Tuple[int, int]) -> TwistedPoly:
        return self.values[key]

    def as_json(self) -> dict:
        return {
            "window": list(self.window),
            "T": {f"{a},{s}": p.as_json() for (a, s), p in sorted(self.values.items())},
        }

    @classmethod
    def from_json(cls, data) -> "THook":
        if not isinstance(data, dict) or "window" not in data or "T" not in data:
            raise ValueError("expected {'window': [A,S], 'T': {...}}")
        vals = {}
        for key, p in data["T"].items():
            a, s = key.split(",")
            vals[(int(a), int(s))] = TwistedPoly.from_json(p)
        return cls(tuple(data["window"]), vals)


def wronskian_T(q: QSystem, window: Tuple[int, int] = (4, 4), reverse_shifts: bool = False) -> THook:
    """Tabulate T on the window (zeros outside the hook)."""
    amax, smax = window
    vals = {
        (a, s): t_function(q, a, s, reverse=reverse_shifts)
        for a in range(amax + 1)
        for s in range(smax + 1)
    }
    return THook(window, vals)


@dataclass(frozen=True)
class HirotaReport:
    ok: bool
    window: Tuple[int, int]
    checked: int
    failures: Tuple[str, ...]
    skipped: Tuple[str, ...]

    def as_json(self) -> dict:
        return {
            "ok": self.ok,
            "window": list(self.window),
            "checked": self.checked,
            "failures": list(self.failures),
            "skipped": list(self.skipped),
        }


def check_hirota(q: QSystem, window: Tuple[int, int] = (4, 4)) -> HirotaReport:
    """Exact bilinear check over the window, skipping (0,0) and the
    out-of-hook cells (which carry no equation)."""
    amax, smax = window
    cache: Dict[Tuple[int, int], TwistedPoly] = {}

    def T(a: int, s: int) -> TwistedPoly:
        if (a, s) not in cache:
            cache[(a, s)] = t_function(q, a, s)
        return cache[(a, s)]

    failures = []
    skipped = []
    checked = 0
    for a in range(amax + 1):
        for s in range(smax + 1):
            if (a, s) == (0, 0) or not in_hook(a, s):
                skipped.append(f"{a},{s}")
                continue
            mid = T(a, s)
            res = (
                mid.shift(1) * mid.shift(-1)
                - T(a, s + 1) * T(a, s - 1)
                - T(a + 1, s) * T(a - 1, s)
            )
            checked += 1
            if not res.is_zero:
                failures.append(f"{a},{s}")
    return HirotaReport(
        ok=not failures,
        window=(amax, smax),
        checked=checked,
        failures=tuple(failures),
        skipped=tuple(skipped),
    )


def y_pair(q: QSystem, a: int, s: int) -> Tuple[TwistedPoly, TwistedPoly]:
    """Y_{a,s} as a cleared (numerator, denominator) pair:
    T_{a,s-1} T_{a,s+1} over T_{a-1,s} T_{a+1,s}."""
    num = t_function(q, a, s - 1) * t_function(q, a, s + 1)
    den = t_function(q, a - 1, s) * t_function(q, a + 1, s)
    return num, den


def gauge_T(th: THook, gs: Sequence) -> THook:
    """Multiply T_{a,s} by g0^[a+s] g1^[a-s] g2^[s-a] g3^[-a-s].

    Any such factor cancels identically in every Y ratio, and the
    bilinear equation is covariant under it.
    """
    if len(gs) != 4:
        raise ValueError("expected four gauge functions")
    g = [
        x if isinstance(x, TwistedPoly) else TwistedPoly.constant(GaussRat.coerce(x))
        for x in gs
    ]
    if any(x.is_zero for x in g):
        raise ValueError("gauge functions must be nonzero")
    out = {}
    for (a, s), p in th.values.items():
        factor = (
            g[0].shift(a + s)
            * g[1].shift(a - s)
            * g[2].shift(s - a)
            * g[3].shift(-a - s)
        )
        out[(a, s)] = factor * p
    return THook(th.window, out)


def _const_of(p: TwistedPoly) -> GaussRat:
    if len(p.terms) != 1 or len(p.terms[0][1]) != 1:
        raise ValueError("expected a single-term constant element")
    return p.terms[0][1][0]


def character_solution(sx: GaussRat, sy: GaussRat) -> QSystem:
    """Constant-coefficient pure-twist solution of the full relation set.

    sx and sy are the half-twists: the even twist pair is (sx^2, 1/sx^2)
    and the odd pair (sy^2, 1/sy^2), so everything closes over the exact
    ring.  The system is generated from pure-twist seeds and then
    normalized so that slots 0|0, 1|0, 2|0, 0|1, 0|2 carry constant 1.
    Raises DegenerateTwist when a twist collision makes any slot vanish
    (for example sx^4 = 1, sy^4 = 1, or (sx*sy)^2 = (sx/sy)^2).
    """
    sx = GaussRat.coerce(sx)
    sy = GaussRat.coerce(sy)
    if not sx or not sy:
        raise ValueError("half-twists must be nonzero")

    def pure(s: GaussRat) -> TwistedPoly:
        return TwistedPoly.from_coeffs([1], twist=s)

    b0 = TwistedPoly.one()
    bs = (pure(sx), pure(sx.inverse()), pure(sy), pure(sy.inverse()))
    try:
        q = generate_from_seed(b0, bs)
    except ZeroDivisionError as exc:
        raise DegenerateTwist(str(exc)) from exc
    if q.zero_slots():
        raise DegenerateTwist(f"vanishing slots {q.zero_slots()} for sx={sx}, sy={sy}")
    scale = _const_of(q["0|0"]).inverse()
    q = gauge_transform(q, TwistedPoly.constant(scale), TwistedPoly.one())
    he = [[_const_of(q["1|0"]).inverse(), 0], [0, _const_of(q["2|0"]).inverse()]]
    ho = [[_const_of(q["0|1"]).inverse(), 0], [0, _const_of(q["0|2"]).inverse()]]
    return h_rotate(q, he, ho)
