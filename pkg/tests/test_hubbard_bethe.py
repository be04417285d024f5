"""Nested and Lieb-Wu Bethe solvers against closed forms and the oracle."""

from __future__ import annotations

import cmath
import math

import numpy as np
import pytest

from qsc22 import ed_oracle
from qsc22._newton import bisect_real
from qsc22.analytic_layer import shell_pairs
from qsc22.cli import _admissible_modes
from qsc22.hubbard_bethe import (
    HubbardRoots,
    HubbardSpec,
    LiebWuRoots,
    energy_momentum,
    liebwu_residuals,
    nested_residuals,
    solve_liebwu,
    solve_nested,
    u_of_x,
)


def _reference_spec() -> HubbardSpec:
    yplus, yminus = shell_pairs(1.0, [0.7, -0.7])
    return HubbardSpec(1.0, 2, yplus, yminus,
                       twist_x=cmath.exp(0.3j), twist_y=cmath.exp(-0.2j))


def test_u_of_x_matches_the_shell():
    yplus, yminus = shell_pairs(1.0, [0.7, -0.7])
    assert abs(u_of_x(1.0, yplus[0]) - (0.7 + 0.5j)) < 1e-12
    assert abs(u_of_x(1.0, yminus[0]) - (0.7 - 0.5j)) < 1e-12


def test_spec_validation():
    with pytest.raises(ValueError):
        HubbardSpec(1.0, 1, (2.0 + 1.0j,), (1.5 - 2.0j,))
    with pytest.raises(ValueError):
        HubbardSpec.ext(1.0, [0.3 + 0.2j], [0.4 - 0.9j])
    with pytest.raises(ValueError):
        HubbardSpec(-1.0, 0)


def test_spec_ext_accepts_shell_pairs():
    yplus, yminus = shell_pairs(1.0, [0.7, -0.7])
    spec = HubbardSpec.ext(1.0, yplus, yminus)
    assert spec.mtheta == 2


def test_single_root_newton_agrees_with_bisection():
    spec = _reference_spec()
    roots = solve_nested(spec, (1, 0, 0), HubbardRoots((-5.0 + 0.2j,), (), ()))

    def phase(x: float) -> float:
        return nested_residuals(spec, HubbardRoots((x + 0j,), (), ()))[0].imag

    oracle = bisect_real(phase, -4.0, -3.0)
    assert oracle == pytest.approx(-3.586539914203925, abs=1e-12)
    assert abs(roots.x1e[0] - oracle) < 1e-12


def test_reference_three_node_configuration():
    spec = _reference_spec()
    seed = HubbardRoots((1j * cmath.exp(-0.3j),), (-0.6 + 0.1j,),
                        (cmath.exp(2.9j) / 1j,))
    roots = solve_nested(spec, (1, 1, 1), seed)
    assert roots.counts == (1, 1, 1)
    assert roots.x1e[0] == pytest.approx(-9.0792186463333, abs=1e-9)
    assert roots.u11[0] == pytest.approx(-1.3197361875357865, abs=1e-9)
    assert roots.x112[0] == pytest.approx(-2.119023208181012, abs=1e-9)
    assert np.max(np.abs(nested_residuals(spec, roots))) < 1e-12


def test_middle_node_branch_convention():
    yplus, yminus = shell_pairs(1.0, [0.7, -0.7])
    spec = HubbardSpec(1.0, 2, yplus, yminus)
    res = nested_residuals(spec, HubbardRoots((), (0.3 + 0j,), ()))
    assert res.shape == (1,)
    assert res[0].real == pytest.approx(0.0, abs=1e-14)
    assert abs(res[0].imag) == pytest.approx(math.pi, abs=1e-14)


def test_middle_node_twist_sensitivity_is_linear():
    yplus, yminus = shell_pairs(1.0, [0.7, -0.7])
    gaps = []
    for eps in (1e-4, 1e-6):
        spec = HubbardSpec(1.0, 2, yplus, yminus, twist_y=cmath.exp(1j * eps))
        res = nested_residuals(spec, HubbardRoots((), (0.3 + 0j,), ()))[0]
        gaps.append(abs(abs(res.imag) - math.pi))
    assert gaps[0] == pytest.approx(2e-4, rel=1e-6)
    assert gaps[0] / gaps[1] == pytest.approx(100.0, rel=1e-4)


def test_liebwu_frozen_two_particle_state():
    roots = solve_liebwu(2, 1.0, 2, 1, [0, 1], [-1])
    ks = sorted(z.real for z in roots.k)
    assert ks[0] == pytest.approx(0.9045568943023813, abs=1e-11)
    assert ks[1] == pytest.approx(5.378628412877205, abs=1e-11)
    assert abs(roots.lam[0]) < 1e-12
    energy, momentum = energy_momentum(2, 1.0, roots)
    assert energy == pytest.approx(-2.0 * math.sqrt(5.0), abs=1e-11)
    assert momentum == pytest.approx(0.0, abs=1e-12)
    assert np.max(np.abs(liebwu_residuals(2, 1.0, roots))) < 1e-12


def test_liebwu_vacuum_and_closed_forms():
    assert solve_liebwu(2, 1.0, 0, 0, [], []) == LiebWuRoots()
    assert energy_momentum(2, 1.0, LiebWuRoots()) == (2.0, 0.0)
    single = solve_liebwu(2, 1.0, 1, 0, [0], [])
    energy, _ = energy_momentum(2, 1.0, single)
    assert energy == pytest.approx(-2.0, abs=1e-12)
    shifted = solve_liebwu(2, 1.0, 1, 0, [2], [])
    energy2, _ = energy_momentum(2, 1.0, shifted)
    assert energy2 == pytest.approx(energy, abs=1e-12)
    assert shifted.k[0].real == pytest.approx(single.k[0].real + 2.0 * math.pi,
                                              abs=1e-12)


def test_liebwu_mode_validation():
    with pytest.raises(ValueError):
        solve_liebwu(2, 1.0, 2, 0, [0, 0], [])
    with pytest.raises(ValueError):
        solve_liebwu(2, 1.0, 1, 0, [0, 1], [])
    with pytest.raises(ValueError):
        solve_liebwu(2, 1.0, 1, 2, [0], [0, 1])
    with pytest.raises(ValueError):
        solve_liebwu(2, -1.0, 1, 0, [0], [])


def test_liebwu_matches_oracle_on_a_small_grid():
    for lsites in (2, 3):
        for n_charge in range(1, lsites + 1):
            for m_spin in range(0, n_charge // 2 + 1):
                ham = ed_oracle.build_hamiltonian(
                    lsites, 1.0, (n_charge - m_spin, m_spin))
                eigs = ed_oracle.spectrum(ham)
                solved = 0
                for mk, ml in _admissible_modes(lsites, n_charge, m_spin):
                    try:
                        roots = solve_liebwu(lsites, 1.0, n_charge, m_spin,
                                             list(mk), list(ml))
                    except Exception:
                        continue
                    solved += 1
                    energy, _ = energy_momentum(lsites, 1.0, roots)
                    assert np.min(np.abs(eigs - energy)) < 1e-10
                assert solved > 0
