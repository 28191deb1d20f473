"""One-shot reproduction harness for the published reference numbers.

Each check compares a simulated quantity against its analytic or published
value at an explicit tolerance. `run_paper_checks` returns the full table;
the CLI `paper` command renders it and sets the exit status.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import cloner, metrics, tomography
from .cloner import InputSpec, NetworkConfig
from .qmath import DensityMatrix


@dataclass(frozen=True)
class CheckResult:
    name: str
    computed: float
    expected: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return abs(self.computed - self.expected) <= self.tolerance


def _sigma_entropy() -> float:
    probs = [21 / 36, 5 / 36, 5 / 36, 5 / 36]
    return -sum(p * math.log2(p) for p in probs)


def run_paper_checks(seed: int = 0) -> list[CheckResult]:
    checks: list[CheckResult] = []
    phi = InputSpec("bell_phi_plus")
    sigma = cloner.ideal_clone_sigma()

    # symmetric point R = 1/3: both clones equal sigma, fidelity 7/12
    out = cloner.run_ideal(NetworkConfig(phi, 1 / 3, 1 / 3))
    checks.append(CheckResult(
        "sigma_fixed_point_local_maxdev",
        float(np.max(np.abs(out.rho_local.matrix - sigma.matrix))), 0.0, 1e-9))
    checks.append(CheckResult(
        "sigma_fixed_point_distant_maxdev",
        float(np.max(np.abs(out.rho_distant.matrix - sigma.matrix))), 0.0, 1e-9))
    checks.append(CheckResult(
        "fidelity_local_R_one_third",
        metrics.fidelity_to_pure(out.rho_local, metrics.PHI_PLUS), 7 / 12, 1e-9))
    checks.append(CheckResult(
        "fidelity_distant_R_one_third",
        metrics.fidelity_to_pure(out.rho_distant, metrics.PHI_PLUS), 7 / 12, 1e-9))

    # teleportation endpoints
    half = cloner.run_ideal(NetworkConfig(phi, 0.5, 0.5))
    zero = cloner.run_ideal(NetworkConfig(phi, 0.0, 0.0))
    checks.append(CheckResult(
        "fidelity_local_R_half",
        metrics.fidelity_to_pure(half.rho_local, metrics.PHI_PLUS), 0.25, 1e-9))
    checks.append(CheckResult(
        "fidelity_distant_R_half",
        metrics.fidelity_to_pure(half.rho_distant, metrics.PHI_PLUS), 1.0, 1e-9))
    checks.append(CheckResult(
        "fidelity_local_R_zero",
        metrics.fidelity_to_pure(zero.rho_local, metrics.PHI_PLUS), 1.0, 1e-9))
    checks.append(CheckResult(
        "fidelity_distant_R_zero",
        metrics.fidelity_to_pure(zero.rho_distant, metrics.PHI_PLUS), 0.25, 1e-9))

    # scalar fixed points on sigma
    checks.append(CheckResult(
        "witness_sigma", metrics.witness_expectation(sigma), -1 / 12, 1e-9))
    checks.append(CheckResult(
        "concurrence_sigma", metrics.concurrence(sigma), 1 / 6, 1e-9))
    checks.append(CheckResult(
        "entropy_sigma", metrics.von_neumann_entropy(sigma),
        _sigma_entropy(), 1e-9))
    phi_dm = DensityMatrix(
        np.outer(metrics.PHI_PLUS, np.conj(metrics.PHI_PLUS)), ("a", "b"))
    checks.append(CheckResult(
        "trace_distance_sigma_phi_plus",
        metrics.trace_distance(sigma, phi_dm), 5 / 12, 1e-9))
    checks.append(CheckResult(
        "uhlmann_fidelity_sigma_phi_plus",
        metrics.uhlmann_fidelity(sigma, phi_dm), 7 / 12, 1e-9))

    # HOM calibration
    checks.append(CheckResult(
        "hom_visibility_ideal", cloner.hom_visibility(1 / 3, 1.0), 0.8, 1e-9))
    lam2 = cloner.fit_overlap(0.731, 1 / 3)
    checks.append(CheckResult(
        "hom_visibility_refit", cloner.hom_visibility(1 / 3, lam2), 0.731, 1e-9))

    # Bell-state universality at the symmetric point
    psi = cloner.run_ideal(NetworkConfig(InputSpec("bell_psi_plus"),
                                         1 / 3, 1 / 3))
    psi_target = InputSpec("bell_psi_plus").state().amplitudes
    checks.append(CheckResult(
        "psi_plus_universality",
        metrics.fidelity_to_pure(psi.rho_local, psi_target), 7 / 12, 1e-9))

    # witness identity on random two-qubit states
    rng = np.random.default_rng(seed + 1)
    n = 10_000
    a = rng.standard_normal((n, 4, 4)) + 1j * rng.standard_normal((n, 4, 4))
    rhos = a @ np.conj(np.swapaxes(a, 1, 2))
    rhos /= np.trace(rhos, axis1=1, axis2=2)[:, None, None].real
    from .qmath import SX, SY, SZ, kron
    witness_op = 0.5 * np.eye(4) - np.outer(metrics.PHI_PLUS,
                                            np.conj(metrics.PHI_PLUS))
    direct = np.einsum("nab,ba->n", rhos, witness_op).real
    expanded = 0.25 * (
        1 - np.einsum("nab,ba->n", rhos, kron(SX, SX)).real
        + np.einsum("nab,ba->n", rhos, kron(SY, SY)).real
        - np.einsum("nab,ba->n", rhos, kron(SZ, SZ)).real)
    checks.append(CheckResult(
        "witness_identity_max_deviation",
        float(np.max(np.abs(direct - expanded))), 0.0, 1e-12))

    # second-quantized network against the qubit-level model
    worst = 0.0
    for spec in (phi, InputSpec("bell_psi_plus"),
                 InputSpec("schmidt", theta=math.pi / 8)):
        for r in np.linspace(0, 1, 11):
            a_out = cloner.run_ideal(NetworkConfig(spec, r, r))
            b_out = cloner.run_physical(NetworkConfig(spec, r, r, 1.0))
            worst = max(worst, float(np.max(np.abs(
                a_out.rho_local.matrix - b_out.rho_local.matrix))))
            worst = max(worst, float(np.max(np.abs(
                a_out.rho_distant.matrix - b_out.rho_distant.matrix))))
    checks.append(CheckResult(
        "fock_qubit_equivalence_max_deviation", worst, 0.0, 1e-9))

    # the maximally entangled input is the hardest to clone
    thetas = np.linspace(1e-3, math.pi / 2 - 1e-3, 50)
    fids = []
    for theta in thetas:
        spec = InputSpec("schmidt", theta=float(theta))
        out = cloner.run_ideal(NetworkConfig(spec, 1 / 3, 1 / 3))
        fids.append(metrics.fidelity_to_pure(out.rho_local,
                                             spec.state().amplitudes))
    worst_theta = float(thetas[int(np.argmin(fids))])
    checks.append(CheckResult(
        "worst_case_schmidt_angle", worst_theta, math.pi / 4,
        float(thetas[1] - thetas[0])))

    # noisy model against the measured reflectivity series
    measured = {
        1 / 3: (0.562, 0.530),
        1 / 2: (0.278, 0.783),
        2 / 3: (0.334, 0.493),
    }
    distant_vals = []
    for r, (f_local, f_distant) in measured.items():
        out = cloner.run_physical(NetworkConfig(phi, r, r, lam2))
        fl = metrics.fidelity_to_pure(out.rho_local, metrics.PHI_PLUS)
        fd = metrics.fidelity_to_pure(out.rho_distant, metrics.PHI_PLUS)
        distant_vals.append(fd)
        checks.append(CheckResult(
            f"noisy_fidelity_local_R_{r:.4f}", fl, f_local, 0.05))
        checks.append(CheckResult(
            f"noisy_fidelity_distant_R_{r:.4f}", fd, f_distant, 0.05))
    ordering_ok = distant_vals[0] < distant_vals[1] > distant_vals[2]
    checks.append(CheckResult(
        "noisy_distant_ordering_low_high_low",
        1.0 if ordering_ok else 0.0, 1.0, 0.0))

    # initial-state tomography quality
    counts = tomography.sample_counts(phi_dm, 1e5, seed=seed)
    rec = tomography.mle_reconstruct(counts)
    f = metrics.fidelity_to_pure(rec.rho_hat, metrics.PHI_PLUS)
    # pass/fail is a lower bound here: encoded as distance from 1
    checks.append(CheckResult(
        "tomography_initial_state_fidelity", f, 1.0, 1.0 - 0.991))

    return checks
