import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spectral_perturb.bounds import (
    BlockSelection,
    BoundCheck,
    BoundReport,
    BoundViolation,
    GapError,
    PreconditionError,
    classical_delta,
    classical_dk_bound,
    corollary_bounds,
    evaluate_symmetric,
    population_gap,
    proof_chain,
    sharp_numerator_bounds,
    svd_factor_check,
    svd_variant_bounds,
    variant_bounds,
)
from spectral_perturb.harness import (
    EnsembleSpec,
    gen_rectangular,
    gen_sharpness_diag,
    gen_sharpness_rotation,
    gen_spiked_symmetric,
)

from conftest import random_frame


def lapack_block(m, r, s):
    w, q = np.linalg.eigh(m)
    order = np.argsort(-w, kind="stable")
    return q[:, order][:, r - 1:s]


def lapack_sin(pop, samp, r, s):
    v, vhat = lapack_block(pop, r, s), lapack_block(samp, r, s)
    return np.linalg.norm(vhat - v @ (v.T @ vhat))


def spiked(seed, p=8, noise=0.1):
    spec = EnsembleSpec("spiked_symmetric", p, (5.0,) + (1.0,) * (p - 1), noise, 1, seed)
    return gen_spiked_symmetric(spec, 0)


class TestSelection:
    def test_d(self):
        assert BlockSelection(2, 4).d == 3

    @pytest.mark.parametrize("r,s", [(0, 1), (3, 2)])
    def test_invalid(self, r, s):
        with pytest.raises(PreconditionError):
            BlockSelection(r, s)

    def test_out_of_range(self):
        with pytest.raises(PreconditionError):
            BlockSelection(1, 5).check(4)


class TestGaps:
    def test_diag_example(self):
        g = population_gap([3, 3, 1, 1], BlockSelection(1, 2))
        assert (g.upper_gap, g.lower_gap, g.population_gap) == (math.inf, 2, 2)

    def test_full_block(self):
        assert population_gap([3, 1], BlockSelection(1, 2)).population_gap == math.inf

    def test_interior(self):
        g = population_gap([5, 4, 4, 2], BlockSelection(2, 3))
        assert (g.upper_gap, g.lower_gap, g.population_gap) == (1, 2, 1)

    def test_unsorted(self):
        with pytest.raises(PreconditionError, match="nonincreasing"):
            population_gap([1, 2], BlockSelection(1, 1))

    def test_delta_two_point(self):
        # brute force: the only excluded sample value is 1.1, interval [3, 3]
        assert classical_delta([3, 1], [2.9, 1.1], BlockSelection(1, 1)) == pytest.approx(1.9)

    def test_delta_full_block(self):
        assert classical_delta([3, 1], [2.9, 1.1], BlockSelection(1, 2)) == math.inf

    def test_delta_diag_example(self):
        # sorted sample spectrum (2, 2, 1.9, 1.9); excluded values are 1.9, 1.9
        pop, samp = gen_sharpness_diag(4, 2, 0.1)
        lam, lamhat = np.sort(np.diag(pop))[::-1], np.sort(np.diag(samp))[::-1]
        brute = min(abs(x - 3.0) for x in lamhat[2:])
        delta = classical_delta(lam, lamhat, BlockSelection(1, 2))
        assert delta == pytest.approx(brute, abs=1e-15) and delta == pytest.approx(1.1)

    def test_delta_inside_interval(self):
        assert classical_delta([3, 2, 1], [2.5, 2.4, 0], BlockSelection(1, 1)) == pytest.approx(0.6)
        assert classical_delta([3, 2, 1], [3, 2.9, 2.5], BlockSelection(1, 2)) == 0

    def test_delta_length_mismatch(self):
        with pytest.raises(PreconditionError):
            classical_delta([3, 1], [3, 2, 1], BlockSelection(1, 1))


class TestClassical:
    def test_identical(self):
        m = np.diag([3.0, 1.0])
        c = classical_dk_bound(m, m, BlockSelection(1, 1))
        assert c.observed == 0 and c.bound == 0 and c.holds

    def test_two_point_instance(self):
        pop, samp = np.diag([3.0, 1.0]), np.diag([2.9, 1.1])
        c = classical_dk_bound(pop, samp, BlockSelection(1, 1))
        assert c.bound == pytest.approx(np.linalg.norm(samp - pop) / 1.9)
        assert c.observed == pytest.approx(lapack_sin(pop, samp, 1, 1), abs=1e-14)
        assert c.holds

    def test_inapplicable_is_not_an_error(self):
        pop, samp = np.diag([3.0, 1.0]), np.diag([3.0, 3.0])
        c = classical_dk_bound(pop, samp, BlockSelection(1, 1))
        assert c.bound is None and c.holds is None and "inapplicable" in c.note

    def test_diag_example_compared_to_variant(self):
        pop, samp = gen_sharpness_diag(4, 2, 0.1)
        sel = BlockSelection(1, 2)
        c = classical_dk_bound(pop, samp, sel)
        v = variant_bounds(pop, samp, sel)["variant_sin"]
        assert c.bound == pytest.approx(math.sqrt(4.42) / 1.1)
        assert c.holds and v.bound < c.bound

    def test_operator_norm(self):
        pop, samp = np.diag([3.0, 1.0]), np.diag([2.9, 1.1])
        c = classical_dk_bound(pop, samp, BlockSelection(1, 1), norm="operator")
        assert c.name == "classical_operator" and c.bound == pytest.approx(0.1 / 1.9)


class TestVariant:
    def test_diag_example(self):
        pop, samp = gen_sharpness_diag(4, 2, 0.1)
        rep = variant_bounds(pop, samp, BlockSelection(1, 2))
        a = rep["variant_align"]
        assert a.observed == pytest.approx(2.0, abs=1e-12)
        assert a.bound == pytest.approx(2.2, rel=1e-12)
        assert a.ratio == pytest.approx(1.1, rel=1e-12)

    def test_rotation_example(self):
        pop, samp = gen_sharpness_rotation(0.01)
        s = variant_bounds(pop, samp, BlockSelection(1, 1))["variant_sin"]
        assert s.observed == pytest.approx(0.01, abs=1e-14)
        assert s.bound == pytest.approx(0.02, abs=1e-14)

    def test_identical(self):
        m = np.diag([3.0, 2.0, 1.0])
        rep = variant_bounds(m, m, BlockSelection(1, 2))
        for c in rep.checks.values():
            assert c.observed == 0 and c.bound == 0 and c.ratio is None

    def test_zero_gap(self):
        with pytest.raises(GapError, match="upper") as info:
            variant_bounds(np.diag([3.0, 3.0, 1.0]), np.diag([3.0, 3.0, 1.0]), BlockSelection(2, 2))
        assert info.value.gap.population_gap == 0

    def test_numerator_matches_formula(self):
        pop, samp = random_instance(5, 6)
        rep = variant_bounds(pop, samp, BlockSelection(1, 2))
        e = samp - pop
        gap = np.sort(np.linalg.eigvalsh(pop))[::-1]
        gap = gap[1] - gap[2]
        num = min(math.sqrt(2) * np.linalg.norm(e, 2), np.linalg.norm(e))
        assert rep["variant_sin"].bound == pytest.approx(2 * num / gap, rel=1e-10)
        assert rep["variant_sin"].observed == pytest.approx(lapack_sin(pop, samp, 1, 2), abs=1e-10)

    def test_violation_raises(self):
        rep = BoundReport(mode="x", sel=BlockSelection(1, 1), dim=2)
        rep.add(BoundCheck("forced", 1.0, 0.5))
        with pytest.raises(BoundViolation) as info:
            rep.raise_on_violation()
        assert info.value.report is rep

    def test_full_block_degenerate(self):
        pop, samp = spiked(2, p=4)
        rep = variant_bounds(pop, samp, BlockSelection(1, 4))
        assert rep.degenerate_full_block and rep["variant_sin"].bound == 0
        assert rep["variant_sin"].observed <= 1e-12


class TestCorollary:
    def test_rotation_example(self):
        pop, samp = gen_sharpness_rotation(0.1)
        rep = corollary_bounds(pop, samp, 1)
        assert rep["corollary_vector"].observed == pytest.approx(math.sqrt(2 - 2 * math.sqrt(0.99)), abs=1e-14)
        assert rep["corollary_vector"].bound == pytest.approx(2 ** 1.5 * 0.2 / 2, abs=1e-14)
        assert rep["corollary_vector"].bound == pytest.approx(0.2828427, abs=1e-7)
        assert rep["corollary_sin"].ratio == pytest.approx(2.0, rel=1e-10)

    def test_identical(self):
        m = np.diag([3.0, 1.0])
        rep = corollary_bounds(m, m, 1)
        assert rep["corollary_sin"].observed == 0 and rep["corollary_sin"].bound == 0

    def test_spiked_seed23(self):
        pop, samp = spiked(23)
        rep = corollary_bounds(pop, samp, 1)
        assert all(c.holds for c in rep.checks.values())
        assert rep["corollary_sin"].observed == pytest.approx(lapack_sin(pop, samp, 1, 1), abs=1e-10)

    def test_gap(self):
        with pytest.raises(GapError):
            corollary_bounds(np.eye(3), np.eye(3), 2)


class TestSharp:
    def test_identical(self):
        m = np.diag([3.0, 1.0])
        assert sharp_numerator_bounds(m, m, BlockSelection(1, 1))["sharp_sin"].bound == 0

    def test_diag_example(self):
        pop, samp = gen_sharpness_diag(4, 2, 0.1)
        rep = sharp_numerator_bounds(pop, samp, BlockSelection(1, 2))
        a = rep["sharp_align"]
        assert a.observed - 1e-8 <= a.bound <= 2.2 + 1e-10

    def test_seed29_ordering(self):
        pop, samp = spiked(29)
        sel = BlockSelection(1, 1)
        vhat = lapack_block(samp, 1, 1)
        lam = np.sort(np.linalg.eigvalsh(pop))[::-1]
        num = np.linalg.norm(vhat * lam[0] - pop @ vhat)
        sharp = sharp_numerator_bounds(pop, samp, sel)["sharp_sin"]
        variant = variant_bounds(pop, samp, sel)["variant_sin"]
        assert sharp.bound == pytest.approx(num / (lam[0] - lam[1]), rel=1e-8)
        assert lapack_sin(pop, samp, 1, 1) <= sharp.bound + 1e-8
        assert sharp.bound <= variant.bound + 1e-10


class TestEvaluate:
    def test_all_checks_present(self):
        pop, samp = spiked(3)
        rep = evaluate_symmetric(pop, samp, BlockSelection(1, 1))
        assert set(rep.checks) == {
            "classical_frobenius", "classical_operator", "variant_sin", "variant_align",
            "sharp_sin", "sharp_align", "sharp_le_variant", "corollary_sin", "corollary_vector"}
        assert not rep.violations()

    def test_gap_failure_recorded(self):
        m = np.diag([3.0, 3.0, 1.0])
        rep = evaluate_symmetric(m, m, BlockSelection(2, 2))
        assert "variant_sin" in rep.inapplicable and rep["variant_sin"].holds is None


class TestProofChain:
    @pytest.mark.parametrize("seed", range(10))
    def test_nondecreasing(self, seed):
        pop, samp = random_instance(seed, 6)
        first, middle, last = proof_chain(pop, samp, BlockSelection(1, 2 if seed % 2 else 1))
        assert first <= middle + 1e-8 and middle <= last + 1e-8


def random_instance(seed, p):
    rng = np.random.default_rng(seed)
    q = random_frame(rng, p, p)
    lam = np.sort(rng.standard_normal(p) * 3)[::-1]
    g = rng.standard_normal((p, p))
    pop = (q * lam) @ q.T
    pop = (pop + pop.T) / 2
    return pop, pop + rng.uniform(0.01, 0.5) * (g + g.T) / 2


class TestProperties:
    @settings(max_examples=80, deadline=None)
    @given(st.integers(0, 2**32 - 1), st.integers(2, 9), st.data())
    def test_soundness(self, seed, p, data):
        r = data.draw(st.integers(1, p))
        s = data.draw(st.integers(r, p))
        pop, samp = random_instance(seed, p)
        rep = evaluate_symmetric(pop, samp, BlockSelection(r, s), strict=False)
        assert not rep.violations()
        sharp, variant = rep["sharp_sin"], rep["variant_sin"]
        if sharp.applicable:
            assert sharp.bound <= variant.bound + 1e-10
            assert rep["variant_sin"].observed <= sharp.bound + 1e-8

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 2**32 - 1), st.floats(0.01, 100))
    def test_scale_invariance(self, seed, c):
        pop, samp = random_instance(seed, 5)
        sel = BlockSelection(1, 2)
        try:
            a = variant_bounds(pop, samp, sel)
        except GapError:
            return
        b = variant_bounds(c * pop, c * samp, sel)
        assert abs(a["variant_sin"].observed - b["variant_sin"].observed) <= 1e-10
        assert b["variant_sin"].bound == pytest.approx(a["variant_sin"].bound, rel=1e-10)


def rect_spec(sigma, p, q, noise, seed, r=1, s=1):
    return EnsembleSpec("rectangular", p, sigma, noise, 1, seed, r=r, s=s, q=q)


class TestSvd:
    def test_identical(self):
        a = np.random.default_rng(0).standard_normal((5, 3))
        rep = svd_variant_bounds(a, a, BlockSelection(1, 1))
        assert rep["svd_sin"].observed <= 1e-14 and rep["svd_sin"].bound == 0

    def test_axis_aligned(self):
        a = np.array([[2.0, 0.0], [0.0, 1.0], [0.0, 0.0]])
        ahat = np.array([[2.1, 0.0], [0.0, 0.9], [0.0, 0.0]])
        rep = svd_variant_bounds(a, ahat, BlockSelection(1, 1))
        c = rep["svd_sin"]
        assert c.observed == 0 and c.bound > 0 and c.holds
        # hand arithmetic: (2*2 + 0.1) * 0.1 * 2 / (4 - 1)
        assert c.bound == pytest.approx(2 * 4.1 * 0.1 / 3, rel=1e-12)

    @pytest.mark.parametrize("side", ["right", "left"])
    def test_seed31(self, side):
        a, ahat = gen_rectangular(rect_spec((3.0, 2.0, 1.0, 0.5), 6, 4, 0.05, 31), 0)
        rep = svd_variant_bounds(a, ahat, BlockSelection(1, 1), side=side)
        assert all(c.holds for c in rep.checks.values())
        assert rep["svd_reduction_sin"].bound <= rep["svd_sin"].bound
        # the reduction route is the symmetric variant on the Gram matrices
        g, gh = (a.T @ a, ahat.T @ ahat) if side == "right" else (a @ a.T, ahat @ ahat.T)
        red = variant_bounds(g, gh, BlockSelection(1, 1))["variant_sin"]
        assert rep["svd_reduction_sin"].bound == pytest.approx(red.bound, rel=1e-8)
        u, sv, vt = np.linalg.svd(a)
        uh, svh, vth = np.linalg.svd(ahat)
        v, vh = (vt[:1].T, vth[:1].T) if side == "right" else (u[:, :1], uh[:, :1])
        assert rep["svd_sin"].observed == pytest.approx(np.linalg.norm(vh - v @ (v.T @ vh)), abs=1e-10)

    def test_seed2_small(self):
        a, ahat = gen_rectangular(rect_spec((3.0, 1.0), 5, 3, 0.01, 2), 0)
        assert not svd_variant_bounds(a, ahat, BlockSelection(1, 1)).violations()

    def test_rank_precondition(self):
        a = np.zeros((4, 3))
        a[0, 0] = 1.0
        with pytest.raises(PreconditionError, match="rank"):
            svd_variant_bounds(a, a, BlockSelection(1, 2))

    def test_rank_deficient_gap_uses_zero_eigenvalues(self):
        # with s = rank(A) < q the Gram matrix still has zero eigenvalues, so
        # the lower gap is sigma_s^2, not infinite; an infinite gap would
        # give bound 0 here while the top singular vector visibly moves
        a = np.array([[1.0, 0.0], [0.0, 0.0]])
        ahat = np.array([[1.0, 0.1], [0.1, 0.0]])
        rep = svd_variant_bounds(a, ahat, BlockSelection(1, 1))
        assert rep.gap.lower_gap == 1.0
        assert rep["svd_sin"].observed > 0.09 and rep["svd_sin"].holds

    def test_gap_precondition(self):
        with pytest.raises(GapError):
            svd_variant_bounds(np.eye(3), np.eye(3), BlockSelection(1, 1))

    def test_factor_inequalities(self):
        rng = np.random.default_rng(4)
        for _ in range(20):
            a = rng.standard_normal((5, 3))
            ahat = a + 0.1 * rng.standard_normal((5, 3))
            op_l, op_r, f_l, f_r = svd_factor_check(a, ahat)
            assert op_l <= op_r + 1e-10 and f_l <= f_r + 1e-10
