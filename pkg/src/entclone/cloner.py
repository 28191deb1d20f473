"""The entanglement broadcasting network.

Six qubits: the pair to be cloned lives on (1, 2); two singlet ancilla pairs
on (3, 4) and (5, 6). A beam splitter of reflectivity R on arms (1, 3) and
another on (2, 5), post-selected on one photon per output arm, implement
partial Bell-state projections. Alice keeps the local pair (1', 2'), Bob the
distant pair (4, 6); arms 3' and 5' are detected but not analyzed.

Two models are provided: `run_ideal` works at the qubit level with the
post-selected two-photon map, `run_physical` builds the second-quantized
network (optionally with partial photon distinguishability) and must agree
with the ideal model exactly when photons are indistinguishable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import fock, metrics
from .fock import BeamSplitterSpec, FockState
from .qmath import DensityMatrix, PureState, bell_state

SWAP = np.array([[1, 0, 0, 0],
                 [0, 0, 1, 0],
                 [0, 1, 0, 0],
                 [0, 0, 0, 1]], dtype=complex)

LOCAL_PAIR = ("1'", "2'")
DISTANT_PAIR = ("4", "6")
_ALL_OUTPUT_ARMS = ("1'", "2'", "3'", "4", "5'", "6")


@dataclass(frozen=True)
class InputSpec:
    """Two-qubit pure input for the cloner.

    kind: 'bell_phi_plus', 'bell_psi_plus', 'bell_psi_minus',
    'schmidt' (with ``theta`` in radians: cos t |HH> + sin t |VV>), or
    'custom' with four amplitudes.
    """

    kind: str
    theta: float | None = None
    amplitudes: tuple[complex, ...] | None = None

    def state(self, labels=("1", "2")) -> PureState:
        if self.kind == "bell_phi_plus":
            return bell_state("phi+", labels)
        if self.kind == "bell_psi_plus":
            return bell_state("psi+", labels)
        if self.kind == "bell_psi_minus":
            return bell_state("psi-", labels)
        if self.kind == "schmidt":
            if self.theta is None:
                raise ValueError("schmidt input needs theta")
            c, s = math.cos(self.theta), math.sin(self.theta)
            return PureState(np.array([c, 0, 0, s], dtype=complex), labels)
        if self.kind == "custom":
            if self.amplitudes is None or len(self.amplitudes) != 4:
                raise ValueError("custom input needs 4 amplitudes")
            return PureState(np.asarray(self.amplitudes, dtype=complex), labels)
        raise ValueError(f"unknown input kind {self.kind!r}")

    @staticmethod
    def from_name(name: str) -> "InputSpec":
        name = name.strip()
        table = {"phi+": "bell_phi_plus", "psi+": "bell_psi_plus",
                 "psi-": "bell_psi_minus"}
        if name in table:
            return InputSpec(table[name])
        if name.startswith("schmidt:"):
            return InputSpec("schmidt", theta=float(name.split(":", 1)[1]))
        raise ValueError(f"unknown input state {name!r}")


@dataclass(frozen=True)
class NetworkConfig:
    input_spec: InputSpec
    r1: float
    r2: float
    overlap_sq: float = 1.0

    def __post_init__(self):
        for name, val in (("r1", self.r1), ("r2", self.r2),
                          ("overlap_sq", self.overlap_sq)):
            if not 0.0 <= val <= 1.0:
                raise ValueError(f"{name} = {val} outside [0, 1]")


@dataclass(frozen=True)
class CloneOutcome:
    """Post-selected outputs: Alice's pair, Bob's pair, and the relative
    success weight. Both matrices are None when post-selection never
    succeeds (success_weight = 0)."""

    rho_local: DensityMatrix | None
    rho_distant: DensityMatrix | None
    success_weight: float


def postselection_operator(r: float) -> np.ndarray:
    """Post-selected two-photon polarization map of one beam splitter.

    Conditioned on one photon per output arm, a beam splitter of
    reflectivity R maps |pq> to (1-R)|pq> - R|qp>, i.e.
    (1-R) I - R SWAP = (1-2R) P_sym + P_anti (up to the global phase fixed
    by the +i reflection convention).
    """
    if not 0.0 <= r <= 1.0:
        raise ValueError(f"reflectivity {r} outside [0, 1]")
    return (1.0 - r) * np.eye(4, dtype=complex) - r * SWAP


def _apply_two_qubit(vec: np.ndarray, op: np.ndarray, i: int, j: int,
                     n: int) -> np.ndarray:
    t = vec.reshape((2,) * n)
    t = np.tensordot(op.reshape(2, 2, 2, 2), t, axes=([2, 3], [i, j]))
    t = np.moveaxis(t, [0, 1], [i, j])
    return t.reshape(-1)


def initial_joint_state(input_spec: InputSpec) -> PureState:
    """|xi> = |phi>_12 |Psi->_34 |Psi->_56 on labels 1..6."""
    phi = input_spec.state(("1", "2"))
    return phi.tensor(bell_state("psi-", ("3", "4"))).tensor(
        bell_state("psi-", ("5", "6")))


def run_ideal(config: NetworkConfig) -> CloneOutcome:
    """Qubit-level network: apply the post-selected maps and reduce.

    Requires overlap_sq = 1 (the ideal model has no distinguishability
    notion).
    """
    if config.overlap_sq != 1.0:
        raise ValueError("run_ideal requires overlap_sq = 1")
    xi = initial_joint_state(config.input_spec)
    vec = xi.amplitudes
    # label order: 1 2 3 4 5 6 -> tensor slots 0..5
    vec = _apply_two_qubit(vec, postselection_operator(config.r1), 0, 2, 6)
    vec = _apply_two_qubit(vec, postselection_operator(config.r2), 1, 4, 6)
    weight = float(np.vdot(vec, vec).real)
    if weight <= 1e-30:
        return CloneOutcome(None, None, 0.0)
    rho = np.outer(vec, np.conj(vec)) / weight
    labels = ("1'", "2'", "3'", "4", "5'", "6")
    full = DensityMatrix(rho, labels)
    return CloneOutcome(full.partial_trace(LOCAL_PAIR),
                        full.partial_trace(DISTANT_PAIR),
                        weight)


def _fock_initial_state(input_spec: InputSpec) -> FockState:
    amps = input_spec.state().amplitudes
    pols = ("H", "V")
    inp_terms = {}
    for i, p in enumerate(pols):
        for j, q in enumerate(pols):
            c = amps[2 * i + j]
            if abs(c) > 0:
                inp_terms[(("1", p, 0), ("2", q, 0))] = c
    inp = FockState(inp_terms)
    s = 1 / math.sqrt(2)

    def singlet(arm_a, arm_b):
        return FockState({
            ((arm_a, "H", 0), (arm_b, "V", 0)): s,
            ((arm_a, "V", 0), (arm_b, "H", 0)): -s,
        })

    return inp.tensor(singlet("3", "4")).tensor(singlet("5", "6"))


def run_physical(config: NetworkConfig) -> CloneOutcome:
    """Second-quantized network with the distinguishability branch model.

    Photons 3 and 5 (from the ancilla sources) each carry squared overlap
    ``overlap_sq`` with the photon they interfere with; the orthogonal
    branches evolve separately and the post-selected density matrices are
    averaged weighted by branch probability times post-selection weight.
    """
    lam = math.sqrt(config.overlap_sq)
    state = _fock_initial_state(config.input_spec)
    branches = fock.dephase_internal(
        state, [("1", "3", lam), ("2", "5", lam)])
    bs1 = BeamSplitterSpec(("1", "3"), ("1'", "3'"), config.r1)
    bs2 = BeamSplitterSpec(("2", "5"), ("2'", "5'"), config.r2)

    dim = 2 ** len(_ALL_OUTPUT_ARMS)
    rho_acc = np.zeros((dim, dim), dtype=complex)
    total = 0.0
    for st, w in branches:
        st = fock.apply_beamsplitter(st, bs1)
        st = fock.apply_beamsplitter(st, bs2)
        rho6, weight = fock.postselect_coincidence(st, _ALL_OUTPUT_ARMS)
        if rho6 is None:
            continue
        rho_acc += w * weight * rho6.matrix
        total += w * weight
    if total <= 1e-30:
        return CloneOutcome(None, None, 0.0)
    full = DensityMatrix(rho_acc / total, _ALL_OUTPUT_ARMS)
    return CloneOutcome(full.partial_trace(LOCAL_PAIR),
                        full.partial_trace(DISTANT_PAIR),
                        total)


def ideal_clone_sigma() -> DensityMatrix:
    """The symmetric-point clone 4/9 |Phi+><Phi+| + 5/36 I on two qubits."""
    phi = metrics.PHI_PLUS
    rho = (4.0 / 9.0) * np.outer(phi, np.conj(phi)) + (5.0 / 36.0) * np.eye(4)
    return DensityMatrix(rho, ("a", "b"))


def ideal_hom_visibility(r: float) -> float:
    """Closed-form HOM visibility 1 - (1-2R)^2 / (R^2 + (1-R)^2)."""
    return 1.0 - (1.0 - 2.0 * r) ** 2 / (r**2 + (1.0 - r) ** 2)


def _hom_coincidence_probability(r: float, lam: float) -> float:
    state = FockState.from_photons([("a", "H", 0), ("b", "H", 0)])
    bs = BeamSplitterSpec(("a", "b"), ("c", "d"), r)
    prob = 0.0
    for st, w in fock.dephase_internal(state, [("a", "b", lam)]):
        _, weight = fock.postselect_coincidence(
            fock.apply_beamsplitter(st, bs), ("c", "d"))
        prob += w * weight
    return prob


def hom_visibility(r: float, overlap_sq: float) -> float:
    """Hong-Ou-Mandel visibility for two photons with squared overlap
    ``overlap_sq`` meeting on a beam splitter of reflectivity R.

    Computed by brute force in the Fock model and cross-checked against the
    closed form overlap_sq * (1 - (1-2R)^2 / (R^2 + (1-R)^2)).
    """
    if not 0.0 <= r <= 1.0:
        raise ValueError(f"reflectivity {r} outside [0, 1]")
    if not 0.0 <= overlap_sq <= 1.0:
        raise ValueError(f"overlap_sq {overlap_sq} outside [0, 1]")
    p_dist = _hom_coincidence_probability(r, 0.0)
    p = _hom_coincidence_probability(r, math.sqrt(overlap_sq))
    v = 1.0 - p / p_dist
    closed = overlap_sq * ideal_hom_visibility(r)
    if abs(v - closed) > 1e-9:
        raise AssertionError(
            f"fock visibility {v} disagrees with closed form {closed}")
    return v


def fit_overlap(v_measured: float, r: float) -> float:
    """Squared overlap reproducing a measured HOM visibility at given R."""
    ideal = ideal_hom_visibility(r)
    if v_measured < 0.0 or v_measured > ideal + 1e-12:
        raise ValueError(
            f"visibility {v_measured} outside physical range [0, {ideal}]")
    if ideal == 0.0:
        return 0.0
    return min(1.0, v_measured / ideal)


def _sweep_point(args) -> tuple[float, float, float, float]:
    input_spec, r, overlap_sq = args
    target = input_spec.state().amplitudes
    out = run_physical(NetworkConfig(input_spec, r, r, overlap_sq))
    if out.rho_local is None:
        return (float(r), float("nan"), float("nan"), 0.0)
    return (
        float(r),
        metrics.fidelity_to_pure(out.rho_local, target),
        metrics.fidelity_to_pure(out.rho_distant, target),
        out.success_weight,
    )


def fidelity_sweep(input_spec: InputSpec, r_grid, overlap_sq: float,
                   workers: int = 1):
    """Run the physical network over a reflectivity grid (R1 = R2 = R).

    Returns a list of (R, F_local, F_distant, success_weight), fidelities
    measured against the pure input state. Grid points are independent and
    fan out over ``workers`` processes when workers > 1.
    """
    tasks = [(input_spec, float(r), overlap_sq) for r in r_grid]
    if workers > 1 and len(tasks) > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_sweep_point, tasks))
    return [_sweep_point(t) for t in tasks]
