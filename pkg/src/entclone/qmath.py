"""Dense complex linear algebra for small qubit registers.

Everything here operates on plain ``numpy`` arrays (complex128), with two
thin wrapper types that carry qubit labels: `PureState` and `DensityMatrix`.
All subsystem operations are label-based rather than index-based, because
the cloning network relabels modes (1 -> 1', 3 -> 3', ...) and raw-index
bookkeeping is the easiest way to silently trace out the wrong qubit.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

HERMITICITY_TOL = 1e-10
TRACE_TOL = 1e-10
EIG_CLAMP = 1e-9       # eigenvalues in [-EIG_CLAMP, 0) are numerical noise
EIG_NEGATIVE_ERR = 1e-6  # below -EIG_NEGATIVE_ERR the matrix is genuinely not PSD

I2 = np.eye(2, dtype=complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)


def kron(*mats: np.ndarray) -> np.ndarray:
    """Kronecker product of one or more matrices, left to right."""
    out = np.asarray(mats[0], dtype=complex)
    for m in mats[1:]:
        out = np.kron(out, np.asarray(m, dtype=complex))
    return out


def dagger(m: np.ndarray) -> np.ndarray:
    return np.conj(m).T


def is_hermitian(m: np.ndarray, tol: float = HERMITICITY_TOL) -> bool:
    return bool(np.max(np.abs(m - dagger(m))) <= tol)


def herm_eig(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix, eigenvalues descending.

    Returns ``(vals, vecs)`` with ``m = vecs @ diag(vals) @ vecs.conj().T``
    and ``vecs[:, k]`` the eigenvector for ``vals[k]``.
    """
    m = np.asarray(m, dtype=complex)
    if not is_hermitian(m):
        raise ValueError("herm_eig requires a Hermitian matrix")
    vals, vecs = np.linalg.eigh(m)
    order = np.argsort(vals)[::-1]
    return vals[order].real, vecs[:, order]


def psd_sqrt(m: np.ndarray) -> np.ndarray:
    """Positive-semidefinite square root of a PSD Hermitian matrix.

    Eigenvalues in ``[-1e-9, 0)`` are clamped to zero; anything below
    ``-1e-6`` raises, since that is no longer numerical noise.
    """
    vals, vecs = herm_eig(m)
    if vals.min() < -EIG_NEGATIVE_ERR:
        raise ValueError(f"matrix is not PSD: min eigenvalue {vals.min():.3e}")
    vals = np.clip(vals, 0.0, None)
    return (vecs * np.sqrt(vals)) @ dagger(vecs)


def trace_norm(m: np.ndarray) -> float:
    """Sum of absolute eigenvalues of a Hermitian matrix."""
    vals, _ = herm_eig(m)
    return float(np.sum(np.abs(vals)))


def _as_labels(labels: Iterable[str]) -> tuple[str, ...]:
    labels = tuple(str(x) for x in labels)
    if len(set(labels)) != len(labels):
        raise ValueError(f"duplicate qubit labels: {labels}")
    return labels


@dataclass(frozen=True)
class PureState:
    """Normalized state vector over a labeled qubit register."""

    amplitudes: np.ndarray
    labels: tuple[str, ...]

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex).ravel()
        labels = _as_labels(self.labels)
        if amps.size != 2 ** len(labels):
            raise ValueError(
                f"{len(labels)} labels but amplitude vector of length {amps.size}"
            )
        if not np.all(np.isfinite(amps.view(float))):
            raise ValueError("non-finite amplitude")
        norm2 = float(np.vdot(amps, amps).real)
        if abs(norm2 - 1.0) > 1e-12:
            raise ValueError(f"state not normalized: |psi|^2 = {norm2!r}")
        object.__setattr__(self, "amplitudes", amps)
        object.__setattr__(self, "labels", labels)

    @property
    def num_qubits(self) -> int:
        return len(self.labels)

    def to_density(self) -> "DensityMatrix":
        rho = np.outer(self.amplitudes, np.conj(self.amplitudes))
        return DensityMatrix(rho, self.labels)

    def tensor(self, other: "PureState") -> "PureState":
        return PureState(np.kron(self.amplitudes, other.amplitudes),
                         self.labels + other.labels)


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, unit-trace, PSD operator on a labeled qubit register."""

    matrix: np.ndarray
    labels: tuple[str, ...]
    validate: bool = field(default=True, compare=False)

    def __post_init__(self):
        mat = np.asarray(self.matrix, dtype=complex)
        labels = _as_labels(self.labels)
        dim = 2 ** len(labels)
        if mat.shape != (dim, dim):
            raise ValueError(f"expected {dim}x{dim} matrix, got {mat.shape}")
        if self.validate:
            if not np.all(np.isfinite(mat.view(float))):
                raise ValueError("non-finite matrix entry")
            if not is_hermitian(mat):
                raise ValueError("density matrix is not Hermitian")
            tr = float(np.trace(mat).real)
            if abs(tr - 1.0) > TRACE_TOL:
                raise ValueError(f"trace = {tr!r}, expected 1")
            min_eig = float(np.linalg.eigvalsh((mat + dagger(mat)) / 2).min())
            if min_eig < -EIG_CLAMP:
                raise ValueError(f"min eigenvalue {min_eig:.3e} below -1e-9")
        object.__setattr__(self, "matrix", mat)
        object.__setattr__(self, "labels", labels)

    @property
    def num_qubits(self) -> int:
        return len(self.labels)

    def partial_trace(self, keep: Sequence[str]) -> "DensityMatrix":
        """Reduced density matrix on the labels in ``keep``.

        The output label order follows this state's label order, not the
        order of ``keep``. Trace is preserved.
        """
        keep_set = set(str(k) for k in keep)
        if not keep_set:
            raise ValueError("keep set must be non-empty")
        unknown = keep_set - set(self.labels)
        if unknown:
            raise KeyError(f"unknown qubit labels: {sorted(unknown)}")

        n = self.num_qubits
        kept_pos = [i for i, lab in enumerate(self.labels) if lab in keep_set]
        traced_pos = [i for i in range(n) if i not in kept_pos]

        t = self.matrix.reshape((2,) * (2 * n))
        # contract each traced row axis with its column partner
        for offset, pos in enumerate(traced_pos):
            t = np.trace(t, axis1=pos - offset,
                         axis2=pos - offset + (n - offset))
        k = len(kept_pos)
        reduced = t.reshape(2 ** k, 2 ** k)
        new_labels = tuple(self.labels[i] for i in kept_pos)
        return DensityMatrix(reduced, new_labels, validate=self.validate)


def bell_state(which: str, labels: Sequence[str] = ("a", "b")) -> PureState:
    """One of the four Bell states: 'phi+', 'phi-', 'psi+', 'psi-'."""
    s = 1 / np.sqrt(2)
    table = {
        "phi+": [s, 0, 0, s],
        "phi-": [s, 0, 0, -s],
        "psi+": [0, s, s, 0],
        "psi-": [0, s, -s, 0],
    }
    if which not in table:
        raise ValueError(f"unknown Bell state {which!r}")
    return PureState(np.array(table[which], dtype=complex), tuple(labels))
