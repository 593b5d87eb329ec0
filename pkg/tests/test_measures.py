"""Measures: fidelity, l1, closed forms, optimal ensembles, roof estimator."""

import math

import numpy as np
import pytest

from fidcoh import (
    DimensionError,
    RoofConfig,
    ValidationError,
    c_f_pure,
    c_f_qubit,
    c_f_roof_estimate,
    c_l1,
    dominant_index,
    f_of,
    optimal_qubit_ensemble,
    random_density,
    random_pure,
    rng_from_seed,
    uhlmann_fidelity,
)


def qubit_fidelity_oracle(rho, sigma):
    """Independent closed form: Tr(rho sigma) + 2 sqrt(det rho det sigma)."""
    tr = np.trace(rho @ sigma).real
    dets = np.linalg.det(rho).real * np.linalg.det(sigma).real
    return tr + 2.0 * math.sqrt(max(dets, 0.0))


class TestUhlmannFidelity:
    def test_self_fidelity_is_one(self):
        for seed in range(20):
            rho = random_density(3, 3, seed)
            assert uhlmann_fidelity(rho, rho) == pytest.approx(1.0, abs=1e-10)

    def test_pure_pure_overlap(self):
        psi = np.array([math.sqrt(0.7), math.sqrt(0.3)])
        zero = np.diag([1.0, 0.0])
        proj = np.outer(psi, psi.conj())
        assert uhlmann_fidelity(zero, proj) == pytest.approx(0.7, abs=1e-10)

    def test_matches_qubit_closed_form(self):
        rho = np.array([[0.5, 0.3], [0.3, 0.5]])
        sigma = np.diag([0.5, 0.5])
        assert uhlmann_fidelity(rho, sigma) == pytest.approx(qubit_fidelity_oracle(rho, sigma), abs=1e-10)

    def test_qubit_closed_form_on_random_pairs(self):
        for seed in range(300):
            rho = random_density(2, 1 + seed % 2, (seed, 0))
            sigma = random_density(2, 1 + (seed // 2) % 2, (seed, 1))
            got = uhlmann_fidelity(rho, sigma)
            assert got == pytest.approx(qubit_fidelity_oracle(rho, sigma), abs=1e-9)
            assert got == pytest.approx(uhlmann_fidelity(sigma, rho), abs=1e-10)
            assert -1e-10 <= got <= 1.0 + 1e-10

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            uhlmann_fidelity(np.eye(2) / 2, np.eye(3) / 3)


class TestL1:
    def test_diagonal_scores_zero(self):
        assert c_l1(np.diag([0.3, 0.7])) == 0.0

    def test_example(self):
        assert c_l1(np.array([[0.5, 0.3], [0.3, 0.5]])) == pytest.approx(0.6, abs=1e-15)

    def test_maximally_coherent(self):
        assert c_l1(np.full((2, 2), 0.5)) == pytest.approx(1.0, abs=1e-15)


class TestPureClosedForm:
    def test_basis_state_is_zero(self):
        assert c_f_pure(np.array([1.0, 0.0])) == 0.0

    def test_balanced_superposition(self):
        v = np.array([1.0, 1.0]) / math.sqrt(2)
        assert c_f_pure(v) == pytest.approx(1 / math.sqrt(2), abs=1e-12)

    def test_exact_arithmetic(self):
        v = np.array([math.sqrt(0.7), math.sqrt(0.3)])
        assert c_f_pure(v) == pytest.approx(math.sqrt(0.3), abs=1e-12)

    def test_dominant_index_prefers_smallest_on_ties(self):
        assert dominant_index(np.array([1.0, 1.0]) / math.sqrt(2)) == 0
        assert dominant_index(np.array([math.sqrt(0.3), math.sqrt(0.7)])) == 1

    def test_definition_via_incoherent_grid_qubit(self):
        """Minimizing sqrt(1 - overlap) over diagonal states hits the closed form."""
        for seed in range(25):
            psi = random_pure(2, seed)
            proj = np.outer(psi, psi.conj())
            probs = psi.real**2 + psi.imag**2
            ts = np.linspace(0.0, 1.0, 401)
            overlaps = ts * probs[0] + (1.0 - ts) * probs[1]
            grid_min = np.sqrt(1.0 - overlaps).min()
            cf = c_f_pure(psi)
            assert grid_min >= cf - 1e-6
            assert grid_min <= cf + 1e-12
            # spot-check that the overlap shortcut agrees with the full fidelity
            delta = np.diag([ts[137], 1.0 - ts[137]]).astype(complex)
            assert uhlmann_fidelity(proj, delta) == pytest.approx(overlaps[137], abs=1e-10)

    def test_definition_via_incoherent_grid_qutrit(self):
        steps = 30
        for seed in range(5):
            psi = random_pure(3, seed)
            probs = psi.real**2 + psi.imag**2
            best = np.inf
            for i in range(steps + 1):
                for j in range(steps + 1 - i):
                    diag = np.array([i, j, steps - i - j]) / steps
                    best = min(best, math.sqrt(1.0 - float(diag @ probs)))
            cf = c_f_pure(psi)
            assert best >= cf - 1e-6
            assert best <= cf + 1e-12


class TestFOf:
    def test_endpoints(self):
        assert f_of(0.0) == 0.0
        assert f_of(0.5) == pytest.approx(1 / math.sqrt(2), abs=1e-15)

    def test_exact_value(self):
        assert f_of(0.3) == pytest.approx(math.sqrt(0.1), abs=1e-15)

    def test_clamps_rounding_overshoot(self):
        assert f_of(0.5 + 1e-10) == pytest.approx(1 / math.sqrt(2), abs=1e-12)

    def test_domain_errors(self):
        with pytest.raises(ValidationError):
            f_of(0.51)
        with pytest.raises(ValidationError):
            f_of(-0.01)

    def test_monotone_and_convex(self):
        xs = np.linspace(0.0, 0.5, 201)
        ys = np.array([f_of(float(x)) for x in xs])
        assert np.all(np.diff(ys) >= -1e-15)
        assert np.all(np.diff(ys, 2) >= -1e-10)


class TestQubitClosedForm:
    def test_diagonal_is_zero(self):
        assert c_f_qubit(np.diag([0.3, 0.7])) == 0.0

    def test_example(self):
        assert c_f_qubit(np.array([[0.5, 0.3], [0.3, 0.5]])) == pytest.approx(math.sqrt(0.1), abs=1e-15)

    def test_maximally_coherent(self):
        assert c_f_qubit(np.full((2, 2), 0.5)) == pytest.approx(1 / math.sqrt(2), abs=1e-15)

    def test_rejects_other_dims(self):
        with pytest.raises(DimensionError):
            c_f_qubit(np.eye(3) / 3)

    def test_equals_f_of_half_l1_exactly(self):
        for seed in range(1000):
            rho = random_density(2, 1 + seed % 2, seed)
            assert c_f_qubit(rho) == f_of(c_l1(rho) / 2.0)

    def test_phase_invariance(self):
        for seed in range(100):
            rho = random_density(2, 2, seed)
            rng = rng_from_seed(seed, 999)
            ph = np.exp(1j * rng.uniform(0.0, 2.0 * np.pi, 2))
            conj = rho * np.outer(ph, ph.conj())
            assert abs(c_f_qubit(conj) - c_f_qubit(rho)) <= 1e-9
            assert abs(c_l1(conj) - c_l1(rho)) <= 1e-9


class TestOptimalQubitEnsemble:
    def test_derived_example(self):
        # solve q(1-q) = 0.09 with q >= 1/2: q = 0.9; then
        # 0.5 = p1*0.9 + (1-p1)*0.1 gives p1 = 0.5
        rho = np.array([[0.5, 0.3], [0.3, 0.5]])
        ens = optimal_qubit_ensemble(rho)
        weights = sorted(w for w, _ in ens.members)
        assert weights == pytest.approx([0.5, 0.5], abs=1e-12)
        tops = {round(float(max(abs(v) ** 2)), 12) for _, v in ens.members}
        assert tops == {round(0.9, 12)}
        assert ens.realizes(rho, 1e-12)

    def test_members_share_the_closed_form_value(self):
        for seed in range(100):
            rho = random_density(2, 2, seed)
            canonical = np.abs(rho) * np.sign(np.where(np.eye(2), 1.0, 1.0))
            canonical = np.array(
                [[rho[0, 0].real, abs(rho[0, 1])], [abs(rho[1, 0]), rho[1, 1].real]]
            )
            ens = optimal_qubit_ensemble(canonical)
            target = f_of(abs(canonical[0, 1]))
            for _, psi in ens.members:
                assert c_f_pure(psi) == pytest.approx(target, abs=1e-12)
            assert ens.realizes(canonical, 1e-10)
            assert ens.average_coherence() == pytest.approx(c_f_qubit(canonical), abs=1e-12)

    def test_maximally_coherent_degenerates_to_single_member(self):
        ens = optimal_qubit_ensemble(np.full((2, 2), 0.5))
        assert len(ens.members) == 1
        assert ens.realizes(np.full((2, 2), 0.5), 1e-12)

    def test_incoherent_limit(self):
        ens = optimal_qubit_ensemble(np.diag([0.3, 0.7]))
        assert len(ens.members) == 2
        (w1, v1), (w2, v2) = ens.members
        assert (w1, w2) == pytest.approx((0.3, 0.7), abs=1e-15)
        np.testing.assert_allclose(np.abs(v1), [1.0, 0.0], atol=1e-15)
        np.testing.assert_allclose(np.abs(v2), [0.0, 1.0], atol=1e-15)

    def test_rejects_non_canonical_input(self):
        with pytest.raises(ValidationError, match="canonicalize"):
            optimal_qubit_ensemble(np.array([[0.5, 0.3j], [-0.3j, 0.5]]))


class TestRoofEstimate:
    def test_qubit_example_matches_closed_form(self):
        rho = np.array([[0.5, 0.3], [0.3, 0.5]])
        res = c_f_roof_estimate(rho, RoofConfig(seed=0))
        assert res.value == pytest.approx(math.sqrt(0.1), abs=1e-4)
        assert res.value >= math.sqrt(0.1) - 1e-9

    def test_pure_input_is_exact(self):
        psi = random_pure(3, 8)
        res = c_f_roof_estimate(np.outer(psi, psi.conj()))
        assert res.value == pytest.approx(c_f_pure(psi), abs=1e-12)
        assert len(res.ensemble.members) == 1
        assert res.converged

    def test_incoherent_input_scores_zero(self):
        res = c_f_roof_estimate(np.diag([0.2, 0.3, 0.5]))
        assert res.value <= 1e-6

    def test_result_consistency(self):
        for seed in range(10):
            rho = random_density(2, 2, seed)
            res = c_f_roof_estimate(rho, RoofConfig(seed=seed))
            assert res.ensemble.realizes(rho, 1e-9)
            assert res.value == pytest.approx(res.ensemble.average_coherence(), abs=1e-10)
            assert res.value >= c_f_qubit(rho) - 1e-9

    def test_upper_bound_holds_for_small_configs(self):
        cfg = RoofConfig(ensemble_size=2, restarts=4, max_iterations=20, seed=3)
        for seed in range(10):
            rho = random_density(2, 2, seed)
            res = c_f_roof_estimate(rho, cfg)
            assert res.value >= c_f_qubit(rho) - 1e-9

    def test_deterministic_per_seed(self):
        rho = random_density(2, 2, 17)
        a = c_f_roof_estimate(rho, RoofConfig(seed=5))
        b = c_f_roof_estimate(rho, RoofConfig(seed=5))
        assert a.value == b.value
        assert a.iterations_used == b.iterations_used

    def test_phase_invariance_with_equal_seeds(self):
        for seed in range(5):
            rho = random_density(2, 2, seed)
            rng = rng_from_seed(seed, 77)
            ph = np.exp(1j * rng.uniform(0.0, 2.0 * np.pi, 2))
            conj = rho * np.outer(ph, ph.conj())
            v1 = c_f_roof_estimate(rho, RoofConfig(seed=11)).value
            v2 = c_f_roof_estimate(conj, RoofConfig(seed=11)).value
            assert abs(v1 - v2) <= 1e-9

    def test_ensemble_size_below_rank_rejected(self):
        with pytest.raises(ValidationError, match="ensemble_size"):
            c_f_roof_estimate(random_density(3, 3, 0), RoofConfig(ensemble_size=2))

    def test_qutrit_upper_bounds_any_pure_decomposition_member_average(self):
        # the estimate is an ensemble average itself, so it must reconstruct
        rho = random_density(3, 2, 4)
        res = c_f_roof_estimate(rho, RoofConfig(seed=4))
        assert res.ensemble.realizes(rho, 1e-9)
        assert 0.0 <= res.value <= 1.0
