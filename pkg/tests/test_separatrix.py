import random
from fractions import Fraction

import pytest

from folres.blowup import point_blowup, point_chart, weight2_chart
from folres.errors import NotASeparatrix, NotGraphParameterizable, ZeroAlongCurve
from folres.scalars import ZERO
from folres.series import MSeries, USeries
from folres.separatrix import (
    FormalCurve,
    invariance_residual,
    multiplicity,
    solve_graph_separatrix,
    straighten,
    transform_curve,
)
from folres.vfield import PolyMap, VectorField, conjugate, nilpotent_normal_form

from conftest import (
    field_degenerate_family,
    field_xlambda,
    field_z_example,
    gr,
    rand_mseries,
    rand_scalar,
    useries,
    vf,
)
from oracles import degenerate_family_series, xlambda_series


class TestInvarianceResidual:
    def test_axis_invariant_normal_form(self):
        # (y + zf) d/dx + zg d/dy + z^2 d/dz with f, g vanishing on the axis
        rng = random.Random(1)
        f = MSeries.variable("x", 20) * rand_mseries(rng, 20, val=0, maxdeg=2, terms=3)
        g = MSeries.variable("y", 20) * rand_mseries(rng, 20, val=0, maxdeg=2, terms=3)
        z = MSeries.variable("z", 20)
        X = VectorField(
            MSeries.variable("y", 20) + z * f, z * g, MSeries.monomial(1, (0, 0, 2), 20)
        )
        rep = invariance_residual(X, FormalCurve.z_axis(19))
        assert rep.full

    def test_x_axis_of_z_example(self):
        curve = FormalCurve(
            USeries.identity(19), USeries.zero(19), USeries.zero(19)
        )
        rep = invariance_residual(field_z_example(20), curve)
        assert rep.full

    def test_diagonal_not_invariant(self):
        X = vf({(1, 0, 0): 1}, {(0, 1, 0): 1}, {(0, 0, 2): 1}, 10)
        diag = FormalCurve(
            USeries.identity(9), USeries.identity(9), USeries.identity(9)
        )
        rep = invariance_residual(X, diag)
        assert not rep.full
        assert rep.order == 0


class TestMultiplicity:
    def test_axis_against_normal_form(self):
        for n in (2, 3, 5):
            X = vf({(0, 1, 0): 1}, {(1, 0, 1): 1}, {(0, 0, n): 1}, 12)
            assert multiplicity(X, FormalCurve.z_axis(11)) == n

    def test_xlambda_is_three(self):
        X = field_xlambda(1)
        curve = solve_graph_separatrix(X, 20)
        assert multiplicity(X, curve) == 3

    def test_degenerate_family_is_two(self):
        for (a, b) in ((0, 1), (0, 0), (Fraction(1, 2), 2)):
            X = field_degenerate_family(a, b)
            curve = solve_graph_separatrix(X, 20)
            assert multiplicity(X, curve) == 2

    def test_zero_along_curve(self):
        X = vf({(1, 0, 0): 1}, {(0, 1, 0): 1}, {}, 10)
        with pytest.raises(ZeroAlongCurve):
            multiplicity(X, FormalCurve.z_axis(9))

    def test_cross_check_rejects_fake_invariance(self):
        # x-axis satisfies the two displayed equations trivially (phi2' = 0,
        # G o phi = 0) without being invariant; the cross-check catches it
        X = vf({(4, 0, 0): 1, (0, 0, 1): 1}, {}, {(2, 0, 0): 1}, 10)
        curve = FormalCurve(USeries.identity(9), USeries.zero(9), USeries.zero(9))
        assert invariance_residual(X, curve).full
        with pytest.raises(NotASeparatrix):
            multiplicity(X, curve)


class TestSolveGraphSeparatrix:
    def test_xlambda_coefficients_against_recurrence(self):
        lam = Fraction(1)
        a_expect, b_expect = xlambda_series(lam, 18)
        X = field_xlambda(lam, 24)
        curve = solve_graph_separatrix(X, 18)
        for k in range(19):
            assert curve.phi1.coeffs[k] == gr(a_expect[k]), f"a_{k}"
            assert curve.phi2.coeffs[k] == gr(b_expect[k]), f"b_{k}"

    def test_xlambda_scaling_in_lambda(self):
        lam = Fraction(-3, 2)
        a_expect, b_expect = xlambda_series(lam, 12)
        curve = solve_graph_separatrix(field_xlambda(lam, 24), 12)
        for k in range(13):
            assert curve.phi1.coeffs[k] == gr(a_expect[k])
            assert curve.phi2.coeffs[k] == gr(b_expect[k])

    def test_lambda_zero_gives_axis(self):
        curve = solve_graph_separatrix(field_xlambda(0, 24), 18)
        assert curve.phi1.is_zero() and curve.phi2.is_zero()

    def test_linear_saddle_unique_zero(self):
        X = vf({(1, 0, 0): 1}, {(0, 1, 0): -1}, {(0, 0, 2): 1}, 12)
        curve = solve_graph_separatrix(X, 6)
        assert curve.phi1.is_zero() and curve.phi2.is_zero()
        assert invariance_residual(X, curve).full

    def test_degenerate_family_series(self):
        # nonzero graph solution: y_m = (m-1+a)(m-1+b) y_{m-1} with y_1 = l,
        # and the companion component z_m = (m+a) y_m; in the adapted
        # coordinates phi1 carries the z-series and phi2 the y-series
        a, b, l = Fraction(1, 2), Fraction(-2), Fraction(1)
        X = field_degenerate_family(a, b, l)
        curve = solve_graph_separatrix(X, 16)
        y_expect, z_expect = degenerate_family_series(a, b, l, 16)
        for k in range(17):
            assert curve.phi1.coeffs[k] == gr(z_expect[k])
            assert curve.phi2.coeffs[k] == gr(y_expect[k])
        assert multiplicity(X, curve) == 2

    def test_degenerate_family_negative_integer_truncates(self):
        # a negative integer parameter kills the product: convergent solution
        a, b, l = Fraction(-3), Fraction(1), Fraction(1)
        X = field_degenerate_family(a, b, l)
        curve = solve_graph_separatrix(X, 16)
        y_expect, z_expect = degenerate_family_series(a, b, l, 16)
        assert all(y_expect[k] == 0 for k in range(5, 17))
        for k in range(17):
            assert curve.phi2.coeffs[k] == gr(y_expect[k])

    def test_solver_output_is_invariant(self):
        rng = random.Random(14)
        for trial in range(10):
            lam = rng.choice([1, 2, -1, Fraction(1, 2)])
            X = field_xlambda(lam, 20)
            curve = solve_graph_separatrix(X, 14)
            assert invariance_residual(X, curve).full

    def test_not_graph_parameterizable(self):
        # axis component vanishing identically on the z-axis
        X = vf({(0, 1, 0): 1}, {(1, 0, 1): 1}, {(1, 0, 0): 1}, 10)
        with pytest.raises(NotGraphParameterizable):
            solve_graph_separatrix(X, 5)


class TestTransformCurve:
    def test_monomial_division(self):
        curve = FormalCurve(
            USeries.monomial(1, 2, 10),
            USeries.monomial(1, 3, 10),
            USeries.identity(10),
            graph_over_z=True,
        )
        out = transform_curve(curve, point_chart("z"))
        assert out.phi1.eq_trusted(USeries.monomial(1, 1, out.ledger))
        assert out.phi2.eq_trusted(USeries.monomial(1, 2, out.ledger))
        assert out.graph_over_z

    def test_contact_drops_by_one(self):
        rng = random.Random(9)
        for _ in range(10):
            k0 = rng.randint(2, 6)
            a = USeries.monomial(rand_scalar(rng, 3, 0) + gr(1), k0, 14)
            b = USeries.monomial(rand_scalar(rng, 2, 1), k0 + 1, 14)
            curve = FormalCurve.graph(a, b)
            assert curve.tangency_bound() == k0
            out, _ = transform_curve(curve, point_chart("z")).recenter()
            assert out.tangency_bound() == k0 - 1

    def test_axis_lifts_under_weight2(self):
        out = transform_curve(FormalCurve.z_axis(10), weight2_chart())
        assert out.phi1.is_zero() and out.phi2.is_zero()
        assert out.parameter_power == 2

    def test_graph_lift_under_weight2(self):
        # (a(z), b(z), z) lifts to (a(w^2), b(w^2)/w, w)
        curve = FormalCurve.graph(
            USeries.monomial(1, 2, 8), USeries.monomial(3, 1, 8)
        )
        out = transform_curve(curve, weight2_chart())
        assert out.phi1.valuation() == 4
        assert out.phi2.valuation() == 1
        assert out.phi2.coeffs[1] == gr(3)


class TestStraighten:
    def test_zero_curve_is_identity(self):
        X = field_xlambda(1)
        out, _ = straighten(X, FormalCurve.z_axis(20), 8)
        assert out.eq_trusted(X)

    def test_xlambda_contact_exceeds_m(self):
        X = field_xlambda(1)
        curve = solve_graph_separatrix(X, 20)
        moved, new_curve = straighten(X, curve, 8)
        assert new_curve.tangency_bound() > 8
        assert invariance_residual(moved, new_curve).full
        resolved = solve_graph_separatrix(moved, 14)
        assert resolved.tangency_bound() > 8

    def test_dg_dx_preserved(self):
        X = field_xlambda(1)
        curve = solve_graph_separatrix(X, 20)
        moved, _ = straighten(X, curve, 8)
        parts = nilpotent_normal_form(moved)
        assert parts is not None
        assert parts.lam == gr(1)
        assert parts.n == 3


class TestInvarianceUnderBlowupAndConjugation:
    def _tangent_shift(self, rng, trunc):
        q = MSeries(
            {(0, 0, k): rand_scalar(rng) for k in range(2, 4)}, trunc
        )
        p = MSeries(
            {(0, j, k): rand_scalar(rng) for j, k in ((2, 0), (1, 1), (0, 3))}, trunc
        )
        x, y, z = (MSeries.variable(v, trunc) for v in "xyz")
        H = PolyMap((x + p, y + q, z))
        p_inv = p.substitute((x, y - q, z))
        V = PolyMap((x - p_inv, y - q, z))
        return H, V

    def _axis_field(self, rng, trunc, min_order):
        x, y = MSeries.variable("x", trunc), MSeries.variable("y", trunc)
        fx = x * rand_mseries(rng, trunc, val=min_order - 1, maxdeg=3, terms=3) + y * rand_mseries(
            rng, trunc, val=min_order - 1, maxdeg=3, terms=3
        )
        fy = x * rand_mseries(rng, trunc, val=min_order - 1, maxdeg=3, terms=3) + y * rand_mseries(
            rng, trunc, val=min_order - 1, maxdeg=3, terms=3
        )
        m = rng.choice([min_order, min_order + 1])
        fz = MSeries.monomial(1, (0, 0, m), trunc) + (x + y) * rand_mseries(
            rng, trunc, val=min_order - 1, maxdeg=3, terms=2
        )
        return VectorField(fx, fy, fz)

    def _separatrix_of_conjugate(self, V, trunc):
        return FormalCurve.graph(
            USeries([ZERO] + [V.comps[0].coeff((0, 0, k)) for k in range(1, trunc)], trunc - 1),
            USeries([ZERO] + [V.comps[1].coeff((0, 0, k)) for k in range(1, trunc)], trunc - 1),
        )

    def test_conjugation_invariance(self):
        rng = random.Random(42)
        for _ in range(25):
            X = self._axis_field(rng, 16, 1)
            H, V = self._tangent_shift(rng, 16)
            Xc = conjugate(X, H)
            psi = self._separatrix_of_conjugate(V, 16)
            assert multiplicity(X, FormalCurve.z_axis(15)) == multiplicity(Xc, psi)

    def test_blowup_invariance_of_raw_multiplicity(self):
        rng = random.Random(43)
        for _ in range(25):
            X = self._axis_field(rng, 16, 1)
            H, V = self._tangent_shift(rng, 16)
            Xc = conjugate(X, H)
            psi = self._separatrix_of_conjugate(V, 16)
            m0 = multiplicity(Xc, psi)
            r = point_blowup(Xc, point_chart("z"))
            moved = transform_curve(psi, point_chart("z"))
            assert multiplicity(r.raw, moved) == m0

    def test_strict_decrease_for_order_two(self):
        rng = random.Random(44)
        for _ in range(25):
            X = self._axis_field(rng, 16, 2)
            H, V = self._tangent_shift(rng, 16)
            Xc = conjugate(X, H)
            psi = self._separatrix_of_conjugate(V, 16)
            m0 = multiplicity(Xc, psi)
            r = point_blowup(Xc, point_chart("z"))
            moved = transform_curve(psi, point_chart("z"))
            m1 = multiplicity(r.vf, moved)
            assert m1 == m0 - r.divisor_exponent
            assert m1 < m0


class TestObstructionAndTransformErrors:
    def test_obstructed_solve_with_witness(self):
        from folres.errors import Obstructed

        # b' z^2 = z^2 forces b = z, but a' z^2 = b has no series solution
        X = vf({(0, 1, 0): 1}, {(0, 0, 2): 1}, {(0, 0, 2): 1}, 12)
        with pytest.raises(Obstructed) as info:
            solve_graph_separatrix(X, 6)
        assert info.value.degree == 1

    def test_curve_misses_center(self):
        from folres.errors import CurveMissesCenter
        from folres.blowup import point_chart as pc

        off = FormalCurve(
            useries([1, 1], 6), useries([0, 0], 6), useries([0, 1], 6)
        )
        with pytest.raises(CurveMissesCenter):
            transform_curve(off, pc("z"))

    def test_division_obstructed_outside_chart(self):
        from folres.errors import DivisionObstructed
        from folres.blowup import point_chart as pc

        # tangent to the x-axis: the z-chart misses its transform
        curve = FormalCurve(
            USeries.identity(8), USeries.monomial(1, 3, 8), USeries.monomial(1, 2, 8)
        )
        with pytest.raises(DivisionObstructed):
            transform_curve(curve, pc("z"))

    def test_xlambda_closed_form_product(self):
        # nonzero coefficients b_{3l+1} equal lam * prod_{j<=l} (3j-1)(3j-2)
        lam = Fraction(1)
        curve = solve_graph_separatrix(field_xlambda(lam, 30), 24)
        prod = Fraction(1)
        for l in range(1, curve.ledger // 3):
            prod *= (3 * l - 1) * (3 * l - 2)
            idx = 3 * l + 1
            if idx <= curve.ledger:
                assert curve.phi2.coeffs[idx] == gr(lam * prod)


class TestTwoByTwoFallback:
    def test_singular_consistent_sets_free_unknown_to_zero(self):
        from folres.separatrix import _solve_two_by_two
        from folres.scalars import GaussianRational as GR

        # both equations control only A, consistently: A = 2, B defaults to 0
        row_a = (3, GR(-2), GR(1), GR(0))
        row_b = (4, GR(-4), GR(2), GR(0))
        A, B = _solve_two_by_two(row_a, row_b, 3)
        assert A == GR(2) and B == GR(0)

    def test_singular_inconsistent_raises(self):
        from folres.errors import Obstructed
        from folres.separatrix import _solve_two_by_two
        from folres.scalars import GaussianRational as GR

        row_a = (3, GR(-2), GR(1), GR(0))
        row_b = (4, GR(-5), GR(2), GR(0))
        with pytest.raises(Obstructed):
            _solve_two_by_two(row_a, row_b, 3)

    def test_one_equation_controls_both_unknowns(self):
        from folres.separatrix import _solve_two_by_two
        from folres.scalars import GaussianRational as GR

        # parallel rows, single constraint A + B = 5: canonical answer B = 0
        row_a = (3, GR(-5), GR(1), GR(1))
        row_b = (4, GR(-10), GR(2), GR(2))
        A, B = _solve_two_by_two(row_a, row_b, 3)
        assert A == GR(5) and B == GR(0)
