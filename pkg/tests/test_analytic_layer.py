"""Zhukovsky geometry, source functions, truncated products, P-mu checks."""

from __future__ import annotations

import cmath
import math
import random

import numpy as np
import pytest

from qsc22 import hubbard_bethe as hb
from qsc22.analytic_layer import (
    INNER,
    OUTER,
    OnCut,
    SourceF,
    ZhukPoint,
    b_factor,
    baxter_step,
    caseb_p_evaluators,
    eval_F,
    f_cauchy_gaps,
    mu_omega,
    pmu_residual_caseB,
    qq_pm,
    r_factor,
    shell_pair,
    shell_pairs,
    truncated_f,
    u_of_x,
    x_of_u,
)


def _off_cut_points(seed: int, count: int) -> list:
    rng = random.Random(seed)
    return [complex(rng.uniform(-3.0, 3.0), 0.21 + rng.uniform(0.0, 0.55))
            for _ in range(count)]


def _sources(hcoup: float = 1.0) -> list:
    yplus, yminus = shell_pairs(hcoup, [0.7, -0.7])
    return [
        SourceF.ext(hcoup, yplus, yminus),
        SourceF.pol(hcoup, [2.0 + 0.5j, -1.7 + 0.1j], sign=-1),
        SourceF.pol_infinity(hcoup, 3),
        SourceF.exp_kind(hcoup, 0.4 - 0.2j),
    ]


def test_zhukovsky_inverse_on_both_sheets():
    for u in _off_cut_points(1, 25):
        for sheet in (OUTER, INNER):
            x = x_of_u(u, 1.3, sheet)
            assert abs(u_of_x(x, 1.3) - u) < 1e-12
        assert abs(x_of_u(u, 1.3, OUTER)) > 1.0
        assert abs(x_of_u(u, 1.3, INNER)) < 1.0


def test_sheets_are_reciprocal():
    u = 0.4 + 0.9j
    assert abs(x_of_u(u, 1.0, OUTER) * x_of_u(u, 1.0, INNER) - 1.0) < 1e-14
    pt = ZhukPoint(u)
    assert pt.swapped().sheet == INNER
    assert pt.swapped().swapped() == pt


def test_cut_needs_a_side():
    with pytest.raises(OnCut):
        x_of_u(0.3, 1.0)
    above = x_of_u(0.3, 1.0, OUTER, side=1)
    below = x_of_u(0.3, 1.0, OUTER, side=-1)
    assert abs(above - below.conjugate()) < 1e-14
    assert abs(abs(above) - 1.0) < 1e-14


def test_shell_pair_constraint():
    for h, v in ((1.0, 0.7), (0.5, 1.3), (2.0, -0.4)):
        yp, ym = shell_pair(h, v)
        assert abs(yp + 1.0 / yp - ym - 1.0 / ym - 2j / h) < 1e-12
        assert abs(yp) > 1.0 and abs(ym) > 1.0


def test_source_unimodularity_all_kinds():
    points = _off_cut_points(7, 250)
    for source in _sources():
        for u in points:
            x = x_of_u(u, source.hcoup, OUTER)
            assert abs(source.eval_x(x) * source.eval_x(1.0 / x) - 1.0) < 1e-12


def test_source_sheet_swap_inverts():
    source = _sources()[0]
    u = 0.8 + 0.6j
    assert abs(source(u, OUTER) * source(u, INNER) - 1.0) < 1e-12
    assert eval_F(source, ZhukPoint(u)) == source(u, OUTER)


def test_ext_source_validation():
    with pytest.raises(ValueError):
        SourceF.ext(1.0, [0.5 + 0.5j], [2.0 - 1.0j])
    with pytest.raises(ValueError):
        SourceF.ext(1.0, [2.0 + 2.0j], [2.0 - 1.0j])
    with pytest.raises(ValueError):
        SourceF.pol(1.0, [2.0], sign=3)


def test_source_json_round_trip():
    for source in _sources():
        again = SourceF.from_json(source.as_json())
        assert again == source


def test_two_branch_factors_multiply_to_qq():
    source = _sources()[0]
    for x in (1.7 + 0.4j, -2.2 + 0.9j):
        for branch in (+1, -1):
            combined = ((-1) ** source.mtheta
                        * b_factor(source, branch, x)
                        * r_factor(source, branch, x))
            assert abs(qq_pm(source, branch, x) - combined) < 1e-12


def test_truncation_telescopes():
    for source in _sources():
        for n in (4, 16):
            for u in _off_cut_points(3, 40):
                lhs = truncated_f(source, n, u) / truncated_f(source, n, u + 1j)
                rhs = source(u) / source(u + 1j * (n + 1))
                assert abs(lhs / rhs - 1.0) < 1e-12


def test_mu_omega_swap_ratio_is_f_squared():
    for source in _sources():
        for n in (4, 16):
            for u in _off_cut_points(5, 40):
                fsq = source(u) ** 2
                mu, om = mu_omega(source, n, u)
                mut, omt = mu_omega(source, n, u, swap_sheet=True)
                assert abs(mu / mut / fsq - 1.0) < 1e-12
                assert abs(om / omt / fsq - 1.0) < 1e-12


def test_cauchy_gaps_report_successive_ratios():
    source = _sources()[0]
    u = 0.45 + 0.38j
    gaps = f_cauchy_gaps(source, (16, 4, 8), u)
    assert len(gaps) == 2
    f4 = truncated_f(source, 4, u)
    f8 = truncated_f(source, 8, u)
    assert gaps[0] == pytest.approx(abs(f8 / f4 - 1.0))
    normalized = f_cauchy_gaps(source, (4, 8), u, normalize=lambda v: v / v)
    assert normalized == [0.0]


def test_null_pair_solves_the_system_identically():
    source = SourceF.pol(1.0, [])

    def p_eval(pt):
        return (0.0 + 0j, pt.x(1.0) + 2.0)

    def pstar_eval(pt):
        return (pt.x(1.0) + 2.0, 0.0 + 0j)

    for u in _off_cut_points(11, 10):
        res = pmu_residual_caseB(p_eval, pstar_eval, source, 6, u)
        assert np.max(np.abs(res)) < 1e-12


def test_vanishing_p_is_consistent_with_unit_f():
    source = SourceF.pol(1.0, [])

    def zero_eval(pt):
        return (0.0 + 0j, 0.0 + 0j)

    for u in _off_cut_points(13, 6):
        res = pmu_residual_caseB(zero_eval, zero_eval, source, 6, u)
        assert np.max(np.abs(res)) < 1e-12


def _reference_caseb():
    hcoup = 1.0
    yplus, yminus = shell_pairs(hcoup, [0.7, -0.7])
    spec = hb.HubbardSpec(hcoup, 2, yplus, yminus,
                          twist_x=cmath.exp(0.3j), twist_y=cmath.exp(-0.2j))
    seed = hb.HubbardRoots((1j * cmath.exp(-0.3j),), (-0.6 + 0.1j,),
                           (cmath.exp(2.9j) / 1j,))
    return spec, hb.solve_nested(spec, (1, 1, 1), seed)


def test_caseb_evaluators_close_the_monodromy_system():
    spec, roots = _reference_caseb()
    source = SourceF.ext(spec.hcoup, spec.yplus, spec.yminus)
    p_eval, pstar_eval, fit = caseb_p_evaluators(source, roots.x1e, roots.x112)
    assert fit < 1e-12
    for u in (0.31 + 0.77j, -0.52 + 0.61j, 2.05 + 0.15j):
        res = pmu_residual_caseB(p_eval, pstar_eval, source, 12, u)
        assert np.max(np.abs(res)) < 1e-8


def test_caseb_evaluators_require_ext():
    with pytest.raises(ValueError):
        caseb_p_evaluators(SourceF.pol(1.0, [2.0]), [], [])


def _constrained_step_data(seed: int):
    rng = random.Random(seed)

    def entry():
        return rng.uniform(0.3, 1.5) * cmath.exp(1j * rng.uniform(0.0, 2 * math.pi))

    fval = 0.7 + 0.4j
    p = np.array([entry(), entry()])
    direction = np.array([entry(), entry()])
    pstar = direction * ((1.0 / fval - fval) / (direction @ p))
    mu = np.array([[entry(), entry()], [entry(), entry()]])
    return mu, p, pstar, fval


def test_baxter_step_scalings():
    for seed in range(5):
        mu, p, pstar, fval = _constrained_step_data(seed)
        out = baxter_step(mu, p, pstar, fval)
        anti_in = (mu[0, 1] - mu[1, 0]) / 2.0
        anti_out = (out[0, 1] - out[1, 0]) / 2.0
        assert abs(anti_out / anti_in * fval ** 2 - 1.0) < 1e-12
        det_in = np.linalg.det((mu + mu.T) / 2.0)
        det_out = np.linalg.det((out + out.T) / 2.0)
        assert abs(det_out / det_in * fval ** 4 - 1.0) < 1e-12


def test_baxter_step_factor_inverse_identity():
    _, p, pstar, fval = _constrained_step_data(9)
    left = np.eye(2) + np.outer(p, pstar) / fval
    right = np.eye(2) - fval * np.outer(p, pstar)
    assert np.max(np.abs(left @ right - np.eye(2))) < 1e-12


def test_baxter_step_rejects_bad_input():
    with pytest.raises(ValueError):
        baxter_step(np.eye(2), [1.0, 0.0], [0.0, 1.0], 0.0)
    with pytest.raises(ValueError):
        baxter_step(np.eye(3), [1.0, 0.0], [0.0, 1.0], 1.0)
