import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from voi import BregmanGenerator, Distribution, ResourceProblem
from voi.bregman import (DIVERGENCE_TOL, bregman_divergence, constrained_value,
                         gibbs_solution, project_to_simplex)
from voi.prob import kl_divergence

U3 = np.array([2.0, -1.0, 0.5])
UNIFORM3 = Distribution.uniform(3)


def positive_simplex(dim):
    return st.lists(st.floats(0.05, 1.0), min_size=dim, max_size=dim).map(
        lambda w: np.asarray(w) / np.sum(w))


class TestProjection:
    def test_interior_point_unchanged(self):
        y = np.array([0.2, 0.5, 0.3])
        assert np.max(np.abs(project_to_simplex(y) - y)) == 0.0

    def test_known_values(self):
        assert list(project_to_simplex(np.array([2.0, 0.0]))) == [1.0, 0.0]
        out = project_to_simplex(np.array([-1.0, 0.4, 0.3]))
        assert out[0] == 0.0
        assert np.sum(out) == pytest.approx(1.0, abs=1e-12)
        assert out[1] - out[2] == pytest.approx(0.4 - 0.3, abs=1e-12)

    @given(st.lists(st.floats(-3.0, 3.0), min_size=2, max_size=6))
    @settings(max_examples=200, deadline=None)
    def test_projection_lands_on_simplex(self, raw):
        out = project_to_simplex(np.asarray(raw))
        assert np.all(out >= 0.0)
        assert np.sum(out) == pytest.approx(1.0, abs=1e-9)

    @given(st.lists(st.floats(-2.0, 2.0), min_size=3, max_size=3),
           positive_simplex(3))
    @settings(max_examples=100, deadline=None)
    def test_projection_is_closest_feasible_point(self, raw, other):
        v = np.asarray(raw)
        proj = project_to_simplex(v)
        assert np.sum((v - proj) ** 2) <= np.sum((v - other) ** 2) + 1e-9


class TestGenerators:
    def test_entropy_kind_matches_kl(self):
        a = np.array([0.6, 0.3, 0.1])
        b = np.array([0.2, 0.5, 0.3])
        gen = BregmanGenerator.negative_entropy(3)
        expect = kl_divergence(Distribution(a), Distribution(b))
        assert bregman_divergence(gen, a, b) == pytest.approx(expect, abs=1e-12)

    def test_entropy_divergence_ignores_base(self):
        # Shifting the generator by a linear term (a different base
        # measure) must leave the divergence untouched.
        a = np.array([0.6, 0.3, 0.1])
        b = np.array([0.2, 0.5, 0.3])
        plain = BregmanGenerator.negative_entropy(3)
        tilted = BregmanGenerator.negative_entropy(
            3, base=Distribution(np.array([0.7, 0.2, 0.1])))
        assert bregman_divergence(plain, a, b) == pytest.approx(
            bregman_divergence(tilted, a, b), abs=1e-12)

    def test_euclidean_kind_is_half_squared_distance(self):
        a = np.array([0.6, 0.4])
        b = np.array([0.1, 0.9])
        gen = BregmanGenerator.squared_euclidean(2)
        assert bregman_divergence(gen, a, b) == pytest.approx(
            0.5 * np.sum((a - b) ** 2), abs=1e-15)

    def test_entropy_gradient_rejects_boundary(self):
        gen = BregmanGenerator.negative_entropy(2)
        with pytest.raises(ValueError):
            gen.gradient(np.array([1.0, 0.0]))

    def test_entropy_base_must_be_positive(self):
        with pytest.raises(ValueError):
            BregmanGenerator.negative_entropy(
                2, base=Distribution(np.array([1.0, 0.0])))

    def test_unknown_kind_rejected(self):
        with pytest.raises(ValueError):
            BregmanGenerator(kind="mahalanobis", dimension=2, base=None)

    @given(positive_simplex(3), positive_simplex(3))
    @settings(max_examples=200, deadline=None)
    def test_divergence_nonnegative_and_zero_on_diagonal(self, a, b):
        for gen in (BregmanGenerator.negative_entropy(3),
                    BregmanGenerator.squared_euclidean(3)):
            assert bregman_divergence(gen, a, b) >= 0.0
            assert bregman_divergence(gen, a, a) == pytest.approx(0.0, abs=1e-12)


class TestTilt:
    def test_gibbs_frozen_binary(self):
        out = gibbs_solution(np.array([1.0, 0.0]), Distribution.uniform(2), 1.0)
        e = math.exp(1.0)
        assert out.probs[0] == pytest.approx(e / (e + 1.0), abs=1e-12)
        assert out.probs[1] == pytest.approx(1.0 / (e + 1.0), abs=1e-12)

    def test_gibbs_zero_beta_returns_reference(self):
        ref = Distribution(np.array([0.3, 0.7]))
        out = gibbs_solution(np.array([5.0, -5.0]), ref, 0.0)
        assert np.max(np.abs(out.probs - ref.probs)) == 0.0

    def test_entropy_tilt_at_infinity_restricts_to_argmax(self):
        gen = BregmanGenerator.negative_entropy(3)
        out = gen.tilt(np.array([1.0, 1.0, 0.0]), UNIFORM3.probs, math.inf)
        assert list(out) == [0.5, 0.5, 0.0]

    def test_euclidean_tilt_at_infinity_projects_onto_argmax_face(self):
        gen = BregmanGenerator.squared_euclidean(3)
        out = gen.tilt(U3, UNIFORM3.probs, math.inf)
        assert list(out) == [1.0, 0.0, 0.0]

    def test_euclidean_tilt_is_projected_gradient_step(self):
        gen = BregmanGenerator.squared_euclidean(3)
        beta = 0.05
        out = gen.tilt(U3, UNIFORM3.probs, beta)
        expect = project_to_simplex(UNIFORM3.probs + beta * U3)
        assert np.max(np.abs(out - expect)) == 0.0


class TestResourceProblem:
    def test_rejects_negative_budget(self):
        gen = BregmanGenerator.negative_entropy(3)
        with pytest.raises(ValueError):
            ResourceProblem(utilities=U3, generator=gen,
                            reference=UNIFORM3, lam=-0.1)

    def test_entropy_kind_rejects_boundary_reference(self):
        gen = BregmanGenerator.negative_entropy(2)
        with pytest.raises(ValueError):
            ResourceProblem(utilities=np.array([1.0, 0.0]), generator=gen,
                            reference=Distribution(np.array([1.0, 0.0])),
                            lam=0.1)


class TestConstrainedValue:
    def test_zero_budget_returns_reference(self):
        for gen in (BregmanGenerator.negative_entropy(3),
                    BregmanGenerator.squared_euclidean(3)):
            rp = ResourceProblem(utilities=U3, generator=gen,
                                 reference=UNIFORM3, lam=0.0)
            pt = constrained_value(rp)
            assert pt.value == pytest.approx(float(U3 @ UNIFORM3.probs), abs=1e-12)
            assert pt.beta == 0.0
            assert pt.info == 0.0

    def test_budget_is_spent_exactly_below_saturation(self):
        for gen in (BregmanGenerator.negative_entropy(3),
                    BregmanGenerator.squared_euclidean(3)):
            for lam in (0.01, 0.05, 0.1, 0.2):
                rp = ResourceProblem(utilities=U3, generator=gen,
                                     reference=UNIFORM3, lam=lam)
                pt = constrained_value(rp)
                assert abs(pt.info - lam) <= DIVERGENCE_TOL
                assert bregman_divergence(gen, pt.solution.probs,
                                          UNIFORM3.probs) == pytest.approx(
                    pt.info, abs=1e-12)

    def test_euclidean_interior_closed_form(self):
        # While the optimum stays interior the euclidean solution is the
        # reference plus a centered-payoff step, so the value is
        # <u, z> + sqrt(2 lam) * ||u - mean(u)||.
        gen = BregmanGenerator.squared_euclidean(3)
        centered = U3 - np.mean(U3)
        for lam in (0.005, 0.02):
            rp = ResourceProblem(utilities=U3, generator=gen,
                                 reference=UNIFORM3, lam=lam)
            pt = constrained_value(rp)
            expect = float(U3 @ UNIFORM3.probs) + math.sqrt(2.0 * lam) * \
                float(np.linalg.norm(centered))
            # the divergence lands within 1e-8 of the budget and the value
            # responds at rate ||u - mean|| / sqrt(2 lam), so give the
            # comparison that much head room
            slack = 2e-8 * float(np.linalg.norm(centered)) / math.sqrt(2.0 * lam)
            assert pt.value == pytest.approx(expect, abs=slack)

    def test_entropy_frozen_binary_value(self):
        gen = BregmanGenerator.negative_entropy(2)
        rp = ResourceProblem(utilities=np.array([1.0, 0.0]), generator=gen,
                             reference=Distribution.uniform(2), lam=0.1)
        assert constrained_value(rp).value == pytest.approx(
            0.7197946265543157, abs=1e-7)

    def test_saturation_clamps_with_note(self):
        gen = BregmanGenerator.negative_entropy(3)
        rp = ResourceProblem(utilities=U3, generator=gen,
                             reference=UNIFORM3, lam=5.0)
        pt = constrained_value(rp)
        assert pt.value == pytest.approx(2.0, abs=1e-12)
        assert pt.beta == math.inf
        assert "clamped" in pt.note

    def test_solution_matches_gibbs_at_returned_beta(self):
        gen = BregmanGenerator.negative_entropy(3)
        rp = ResourceProblem(utilities=U3, generator=gen,
                             reference=UNIFORM3, lam=0.15)
        pt = constrained_value(rp)
        expect = gibbs_solution(U3, UNIFORM3, pt.beta)
        assert np.max(np.abs(pt.solution.probs - expect.probs)) < 1e-8

    def test_lower_branch_reflects_upper(self):
        for gen in (BregmanGenerator.negative_entropy(3),
                    BregmanGenerator.squared_euclidean(3)):
            rp = ResourceProblem(utilities=U3, generator=gen,
                                 reference=UNIFORM3, lam=0.07)
            neg = ResourceProblem(utilities=-U3, generator=gen,
                                  reference=UNIFORM3, lam=0.07)
            low = constrained_value(rp, "lower")
            up = constrained_value(neg, "upper")
            assert low.value == pytest.approx(-up.value, abs=1e-12)

    def test_lower_stays_below_upper(self):
        gen = BregmanGenerator.squared_euclidean(3)
        for lam in (0.0, 0.02, 0.1, 0.4):
            rp = ResourceProblem(utilities=U3, generator=gen,
                                 reference=UNIFORM3, lam=lam)
            assert constrained_value(rp, "lower").value <= \
                constrained_value(rp, "upper").value + 1e-12

    def test_unknown_branch_rejected(self):
        gen = BregmanGenerator.negative_entropy(3)
        rp = ResourceProblem(utilities=U3, generator=gen,
                             reference=UNIFORM3, lam=0.1)
        with pytest.raises(ValueError):
            constrained_value(rp, "middle")

    def test_value_monotone_in_budget(self):
        gen = BregmanGenerator.negative_entropy(3)
        values = []
        for lam in np.linspace(0.0, 1.2, 9):
            rp = ResourceProblem(utilities=U3, generator=gen,
                                 reference=UNIFORM3, lam=float(lam))
            values.append(constrained_value(rp).value)
        assert np.all(np.diff(values) >= -1e-12)
