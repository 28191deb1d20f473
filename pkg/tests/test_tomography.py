import numpy as np
import pytest

from conftest import random_density
from entclone import metrics, tomography as tg
from entclone.cloner import ideal_clone_sigma
from entclone.qmath import bell_state

PHI_DM = bell_state("phi+").to_density()
SIGMA = ideal_clone_sigma()


class TestBornProbability:
    def test_bell_hh(self):
        assert tg.born_probability(PHI_DM, "H", "H") == pytest.approx(0.5)

    def test_bell_hv_perfect_correlation(self):
        assert tg.born_probability(PHI_DM, "H", "V") == pytest.approx(0.0)

    def test_sigma_hh(self):
        assert tg.born_probability(SIGMA, "H", "H") == \
            pytest.approx(13 / 36, abs=1e-12)

    def test_settings_form_scaled_povm(self):
        total = sum(tg.setting_projector(a, b) for a, b in tg.SETTINGS)
        assert np.allclose(total, 9 * np.eye(4))

    def test_probabilities_in_range(self, rng):
        rho = random_density(rng)
        for a, b in tg.SETTINGS:
            p = tg.born_probability(rho, a, b)
            assert -1e-12 <= p <= 1 + 1e-12


class TestSampleCounts:
    def test_deterministic_given_seed(self):
        a = tg.sample_counts(SIGMA, 1000, seed=42)
        b = tg.sample_counts(SIGMA, 1000, seed=42)
        assert a == b

    def test_different_seed_differs(self):
        a = tg.sample_counts(SIGMA, 1000, seed=1)
        b = tg.sample_counts(SIGMA, 1000, seed=2)
        assert a != b

    def test_law_of_large_numbers(self):
        n = 1_000_000
        records = tg.sample_counts(SIGMA, n, seed=9)
        for rec in records:
            p = tg.born_probability(SIGMA, rec.setting_a, rec.setting_b)
            assert rec.count / n == pytest.approx(p, abs=0.005)

    def test_bad_n_raises(self):
        with pytest.raises(ValueError):
            tg.sample_counts(SIGMA, 0, seed=1)


class TestMleReconstruct:
    def test_noiseless_bell_counts(self):
        n = 1_000_000
        records = [
            tg.CountRecord(a, b, round(n * tg.born_probability(PHI_DM, a, b)))
            for a, b in tg.SETTINGS
        ]
        rec = tg.mle_reconstruct(records)
        f = metrics.fidelity_to_pure(rec.rho_hat, metrics.PHI_PLUS)
        assert f >= 0.9999

    def test_sigma_large_n_consistency(self):
        records = tg.sample_counts(SIGMA, 1_000_000, seed=5)
        rec = tg.mle_reconstruct(records)
        assert metrics.uhlmann_fidelity(rec.rho_hat, SIGMA) >= 0.999

    def test_output_always_physical(self, rng):
        # even from very noisy small-count data the reconstruction satisfies
        # the density-matrix invariants (enforced by the constructor)
        records = tg.sample_counts(SIGMA, 20, seed=13)
        rec = tg.mle_reconstruct(records)
        assert rec.rho_hat.num_qubits == 2
        vals = np.linalg.eigvalsh(rec.rho_hat.matrix)
        assert vals.min() >= -1e-9

    def test_loglik_monotone(self):
        records = tg.sample_counts(SIGMA, 4000, seed=3)
        rec = tg.mle_reconstruct(records)
        hist = np.array(rec.log_likelihood_history)
        assert np.all(np.diff(hist) >= 0)
        assert rec.converged

    def test_permutation_invariance(self):
        records = tg.sample_counts(SIGMA, 4000, seed=21)
        rec = tg.mle_reconstruct(records)
        rng = np.random.default_rng(0)
        shuffled = list(records)
        rng.shuffle(shuffled)
        rec2 = tg.mle_reconstruct(shuffled)
        assert np.max(np.abs(rec.rho_hat.matrix - rec2.rho_hat.matrix)) < 1e-10

    def test_statistical_consistency(self):
        # median reconstruction error decreases with counts per setting
        medians = []
        for n in (100, 1000, 10_000, 100_000):
            errs = []
            for seed in range(50):
                records = tg.sample_counts(SIGMA, n, seed=1000 * seed + n)
                rec = tg.mle_reconstruct(records)
                errs.append(metrics.trace_distance(rec.rho_hat, SIGMA))
            medians.append(float(np.median(errs)))
        assert all(a > b for a, b in zip(medians, medians[1:]))

    def test_all_zero_counts_raises(self):
        records = [tg.CountRecord(a, b, 0) for a, b in tg.SETTINGS]
        with pytest.raises(ValueError):
            tg.mle_reconstruct(records)


class TestMonteCarlo:
    def test_deterministic(self):
        records = tg.sample_counts(SIGMA, 4000, seed=8)
        a = tg.monte_carlo_uncertainty(records, 25, seed=4, statistic="fidelity")
        b = tg.monte_carlo_uncertainty(records, 25, seed=4, statistic="fidelity")
        assert a == b

    def test_workers_do_not_change_result(self):
        records = tg.sample_counts(SIGMA, 2000, seed=8)
        serial = tg.monte_carlo_uncertainty(records, 16, seed=4,
                                            statistic="concurrence", workers=1)
        parallel = tg.monte_carlo_uncertainty(records, 16, seed=4,
                                              statistic="concurrence", workers=2)
        assert serial == pytest.approx(parallel, abs=1e-12)

    def test_noiseless_large_n_tiny_std(self):
        n = 1_000_000
        records = [
            tg.CountRecord(a, b, round(n * tg.born_probability(PHI_DM, a, b)))
            for a, b in tg.SETTINGS
        ]
        _, std = tg.monte_carlo_uncertainty(records, 20, seed=2,
                                            statistic="fidelity")
        assert std < 1e-3

    def test_reference_statistics(self):
        records = tg.sample_counts(SIGMA, 4000, seed=8)
        mean, std = tg.monte_carlo_uncertainty(records, 10, seed=4,
                                               statistic="trace_distance")
        assert mean >= 0
        with pytest.raises(ValueError):
            tg.evaluate_statistic("trace_distance", SIGMA, None)

    def test_unknown_statistic(self):
        records = tg.sample_counts(SIGMA, 1000, seed=8)
        with pytest.raises(ValueError):
            tg.monte_carlo_uncertainty(records, 5, seed=1, statistic="magic")


class TestInterchange:
    def test_csv_round_trip(self, tmp_path):
        records = tg.sample_counts(SIGMA, 4000, seed=6, exposure=1.5)
        path = tmp_path / "counts.csv"
        tg.counts_to_csv(records, path)
        back = tg.counts_from_csv(path)
        assert back == records

    def test_csv_header_checked(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("a,b,c\n1,2,3\n")
        with pytest.raises(ValueError):
            tg.counts_from_csv(path)

    def test_matrix_json_round_trip_bit_exact(self, tmp_path):
        records = tg.sample_counts(SIGMA, 4000, seed=6)
        rec = tg.mle_reconstruct(records)
        path = tmp_path / "rho.json"
        tg.matrix_to_json(rec.rho_hat, path)
        back = tg.matrix_from_json(path)
        assert back.labels == rec.rho_hat.labels
        assert np.array_equal(back.matrix, rec.rho_hat.matrix)

    def test_round_trip_preserves_metrics(self, tmp_path):
        path = tmp_path / "sigma.json"
        tg.matrix_to_json(SIGMA, path)
        back = tg.matrix_from_json(path)
        assert abs(metrics.concurrence(back) - metrics.concurrence(SIGMA)) < 1e-12
        assert abs(metrics.witness_expectation(back)
                   - metrics.witness_expectation(SIGMA)) < 1e-12


class TestCountRecord:
    def test_validation(self):
        with pytest.raises(ValueError):
            tg.CountRecord("Q", "H", 5)
        with pytest.raises(ValueError):
            tg.CountRecord("H", "H", -1)
        with pytest.raises(ValueError):
            tg.CountRecord("H", "H", 5, exposure=0.0)
