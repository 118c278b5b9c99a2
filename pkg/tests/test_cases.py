"""Analytical references and benchmark case builders."""

import math

import numpy as np
import pytest

from mrplate import (
    Material,
    ResolutionLevel,
    annular_clamped_free_deflection,
    case_ring_slab,
    case_skew_plate,
    case_square_ss,
    convergence_study,
    navier_series_deflection,
    run_case,
    splice,
)


class TestNavierSeries:
    def test_converged_value(self):
        # Doubling the harmonic count no longer moves the sum.
        w50 = navier_series_deflection(1.0, 1.0, 1.0, terms=50)
        w100 = navier_series_deflection(1.0, 1.0, 1.0, terms=100)
        assert abs(w100 - w50) < 1e-8 * abs(w100)
        assert w100 == pytest.approx(0.00406235, rel=1e-5)

    def test_scaling_law(self):
        base = navier_series_deflection(1.0, 1.0, 1.0)
        assert navier_series_deflection(2.0, 1.0, 1.0) == pytest.approx(16.0 * base)
        assert navier_series_deflection(1.0, 3.0, 1.0) == pytest.approx(3.0 * base)
        assert navier_series_deflection(1.0, 1.0, 5.0) == pytest.approx(base / 5.0)

    def test_term_count_validated(self):
        with pytest.raises(ValueError):
            navier_series_deflection(1.0, 1.0, 1.0, terms=0)


class TestAnnularClosedForm:
    def test_midratio_coefficient(self):
        # b/a = 0.5 gives w_b E h^3 / (q a^4) = 0.0575 to published precision.
        mat = Material(E=1.0e4, h=0.1, mu=0.3)
        w = annular_clamped_free_deflection(1.0, 0.5, 1.0, mat.rigidity, mat.mu)
        assert w * mat.E * mat.h**3 == pytest.approx(0.0575, abs=5e-5)

    def test_limits_validated(self):
        with pytest.raises(ValueError):
            annular_clamped_free_deflection(1.0, 1.0, 1.0, 1.0, 0.3)
        with pytest.raises(ValueError):
            annular_clamped_free_deflection(1.0, 0.0, 1.0, 1.0, 0.3)

    def test_clamped_edge_satisfied(self):
        # Deflection grows monotonically from outer clamp to free inner edge:
        # shrinking the ring towards the clamp sends the coefficient to zero.
        mat = Material(E=1.0e4, h=0.1, mu=0.3)
        w_thick = annular_clamped_free_deflection(1.0, 0.5, 1.0, mat.rigidity, mat.mu)
        w_thin = annular_clamped_free_deflection(1.0, 0.95, 1.0, mat.rigidity, mat.mu)
        assert 0.0 < w_thin < 0.01 * w_thick


class TestCaseBuilders:
    def test_skew_dof_count(self):
        case = case_skew_plate(rl=ResolutionLevel(8, 8))
        system = splice(case.model)
        assert system.num_dofs == 3 * 9 * 9

    def test_skew_odd_node_requirement(self):
        with pytest.raises(ValueError, match="odd node counts"):
            case_skew_plate(rl=ResolutionLevel(7, 8))
        with pytest.raises(ValueError, match="odd node counts"):
            case_skew_plate(mono_mesh=(7, 8))

    def test_skew_ss_pair_validated(self):
        with pytest.raises(ValueError, match="ss_pair"):
            case_skew_plate(ss_pair="diagonal")

    def test_ring_radius_ratio_validated(self):
        with pytest.raises(ValueError, match="radius ratio"):
            case_ring_slab(radius_ratio=1.0)
        with pytest.raises(ValueError, match="radius ratio"):
            case_ring_slab(radius_ratio=0.0)

    def test_ring_multi_node_count(self):
        system = splice(case_ring_slab().model)
        assert system.num_nodes == 45

    def test_square_ss_matches_series(self):
        case = case_square_ss(rl=ResolutionLevel(8, 8))
        result = run_case(case)
        want = navier_series_deflection(1.0, 1.0, 1.0)
        assert result.coefficient == pytest.approx(want, rel=2e-2)

    def test_dimensional_homogeneity(self, rng):
        # The normalized coefficients are invariant under unit changes.
        ref = {
            "skew": run_case(case_skew_plate(rl=ResolutionLevel(4, 4))).coefficient,
            "ring": run_case(case_ring_slab()).coefficient,
            "square": run_case(case_square_ss(rl=ResolutionLevel(4, 4))).coefficient,
        }
        for _ in range(3):
            length = float(rng.uniform(0.2, 40.0))
            q = float(rng.uniform(0.01, 50.0))
            mat = Material(
                E=float(rng.uniform(1.0e3, 1.0e8)),
                h=float(rng.uniform(0.01, 0.2)) * length,
                mu=0.3,
            )
            got = {
                "skew": run_case(
                    case_skew_plate(length=length, q=q, material=mat, rl=ResolutionLevel(4, 4))
                ).coefficient,
                "ring": run_case(case_ring_slab(outer=length, q=q, material=mat)).coefficient,
                "square": run_case(
                    case_square_ss(length=length, q=q, material=mat, rl=ResolutionLevel(4, 4))
                ).coefficient,
            }
            for key in ref:
                assert got[key] == pytest.approx(ref[key], rel=1e-9), key

    def test_run_case_bookkeeping(self):
        result = run_case(case_square_ss(rl=ResolutionLevel(4, 4)))
        assert result.case_id == "square-ss"
        assert result.dofs == 3 * 25
        assert 0 < result.free_dofs < result.dofs
        assert result.deflection > 0.0
        assert result.wall_time > 0.0

    def test_convergence_study_sorted(self):
        cases = [
            case_square_ss(rl=ResolutionLevel(k, k)) for k in (8, 4, 6)
        ]
        results = convergence_study(cases)
        dofs = [r.dofs for r in results]
        assert dofs == sorted(dofs)
        coeffs = [r.coefficient for r in results]
        want = navier_series_deflection(1.0, 1.0, 1.0)
        assert abs(coeffs[-1] - want) < abs(coeffs[0] - want)
