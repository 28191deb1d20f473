"""Simulated two-photon state tomography.

36 polarization settings (all pairs drawn from H, V, D, A, L, R), Poisson
count statistics, maximum-likelihood reconstruction by diluted fixed-point
iteration, and Monte Carlo error bars from Poisson resampling.

Every stochastic operation takes an explicit integer seed; Monte Carlo
resamples draw their streams from ``numpy.random.SeedSequence.spawn`` so the
results are reproducible regardless of evaluation order or parallelism.
"""

from __future__ import annotations

import csv
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import metrics
from .qmath import DensityMatrix

PROJECTOR_LETTERS = ("H", "V", "D", "A", "L", "R")

_s = 1 / np.sqrt(2)
_KETS = {
    "H": np.array([1, 0], dtype=complex),
    "V": np.array([0, 1], dtype=complex),
    "D": np.array([_s, _s], dtype=complex),
    "A": np.array([_s, -_s], dtype=complex),
    "L": np.array([_s, 1j * _s], dtype=complex),
    "R": np.array([_s, -1j * _s], dtype=complex),
}

# all 36 settings in a fixed canonical order
SETTINGS: tuple[tuple[str, str], ...] = tuple(
    (a, b) for a in PROJECTOR_LETTERS for b in PROJECTOR_LETTERS
)

MAX_ITERATIONS = 100_000
LOGLIK_TOL = 1e-10


@dataclass(frozen=True)
class CountRecord:
    setting_a: str
    setting_b: str
    count: int
    exposure: float = 1.0

    def __post_init__(self):
        if self.setting_a not in PROJECTOR_LETTERS or \
                self.setting_b not in PROJECTOR_LETTERS:
            raise ValueError(
                f"unknown setting ({self.setting_a}, {self.setting_b})")
        if self.count < 0:
            raise ValueError("negative count")
        if self.exposure <= 0:
            raise ValueError("exposure must be positive")


@dataclass
class TomographyRecord:
    records: list[CountRecord]
    rho_hat: DensityMatrix
    log_likelihood: float
    converged: bool
    log_likelihood_history: list[float] = field(default_factory=list)
    mc_samples: list[DensityMatrix] | None = field(default=None)


def setting_projector(setting_a: str, setting_b: str) -> np.ndarray:
    ka, kb = _KETS[setting_a], _KETS[setting_b]
    k = np.kron(ka, kb)
    return np.outer(k, np.conj(k))


_PROJECTOR_STACK = np.stack([setting_projector(a, b) for a, b in SETTINGS])


def born_probability(rho, setting_a: str, setting_b: str) -> float:
    """Tr[rho (Pi_a x Pi_b)] for single-photon projectors a, b."""
    m = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho)
    if m.shape != (4, 4):
        raise ValueError("born_probability requires a two-qubit state")
    return float(np.real(np.trace(m @ setting_projector(setting_a, setting_b))))


def sample_counts(rho, n_per_setting: float, seed: int,
                  exposure: float = 1.0) -> list[CountRecord]:
    """Poisson counts for all 36 settings; deterministic given the seed."""
    if n_per_setting <= 0:
        raise ValueError("n_per_setting must be positive")
    rng = np.random.default_rng(seed)
    records = []
    for a, b in SETTINGS:
        mu = n_per_setting * exposure * born_probability(rho, a, b)
        records.append(CountRecord(a, b, int(rng.poisson(mu)), exposure))
    return records


def _unpack(records: list[CountRecord]):
    projs = np.stack([setting_projector(r.setting_a, r.setting_b)
                      for r in records])
    counts = np.array([r.count for r in records], dtype=float)
    exposures = np.array([r.exposure for r in records], dtype=float)
    return projs, counts, exposures


def _poisson_loglik(counts, mu):
    # log factorial terms dropped: constant in rho
    mu = np.clip(mu, 1e-300, None)
    return float(np.sum(counts * np.log(mu) - mu))


def mle_reconstruct(records: list[CountRecord]) -> TomographyRecord:
    """Maximum-likelihood density matrix from the 36 count records.

    Independent Poisson likelihood per setting with the overall rate
    estimated as 4 x mean(count / exposure) (the 36 projectors sum to 9 I,
    so the mean success probability per setting is 1/4). The maximizer is
    found by RrhoR fixed-point iteration with step dilution: a full step is
    tried first and geometrically damped until the log-likelihood improves,
    which keeps iterates PSD with unit trace and the likelihood monotone.
    """
    if len(records) == 0 or all(r.count == 0 for r in records):
        raise ValueError("degenerate data: all counts are zero")
    # canonical ordering makes the result exactly independent of record order
    ordered = sorted(records, key=lambda r: (r.setting_a, r.setting_b))
    projs, counts, exposures = _unpack(ordered)
    n_hat = 4.0 * float(np.mean(counts / exposures))

    rho = np.eye(4, dtype=complex) / 4.0

    def probs(r):
        return np.clip(np.real(np.einsum("jab,ba->j", projs, r)), 1e-12, None)

    def loglik(r):
        return _poisson_loglik(counts, n_hat * exposures * probs(r))

    ll = loglik(rho)
    history = [ll]
    converged = False
    identity = np.eye(4, dtype=complex)
    for _ in range(MAX_ITERATIONS):
        p = probs(rho)
        r_op = np.einsum("j,jab->ab", counts / p, projs) / max(counts.sum(), 1.0)
        improved = False
        eps = 1.0
        while eps > 1e-14:
            step = identity + eps * r_op
            cand = step @ rho @ step.conj().T
            cand /= np.real(np.trace(cand))
            cand_ll = loglik(cand)
            if cand_ll > ll:
                improved = True
                break
            eps *= 0.5
        if not improved:
            converged = True  # no improving step exists at machine precision
            break
        if cand_ll - ll < LOGLIK_TOL:
            rho, ll = cand, cand_ll
            history.append(ll)
            converged = True
            break
        rho, ll = cand, cand_ll
        history.append(ll)

    rho = (rho + rho.conj().T) / 2.0
    rho /= np.real(np.trace(rho))
    return TomographyRecord(list(records),
                            DensityMatrix(rho, ("a", "b")),
                            ll, converged, history)


_STATISTICS = ("fidelity", "concurrence", "entropy", "witness",
               "trace_distance", "uhlmann_fidelity")


def evaluate_statistic(name: str, rho: DensityMatrix,
                       reference: DensityMatrix | None = None) -> float:
    """Named scalar statistic of a reconstructed state.

    'fidelity' and 'witness' are taken against |Phi+>; 'trace_distance' and
    'uhlmann_fidelity' compare against ``reference`` (for Monte Carlo runs,
    the point-estimate reconstruction).
    """
    if name == "fidelity":
        return metrics.fidelity_to_pure(rho, metrics.PHI_PLUS)
    if name == "concurrence":
        return metrics.concurrence(rho)
    if name == "entropy":
        return metrics.von_neumann_entropy(rho)
    if name == "witness":
        return metrics.witness_expectation(rho)
    if name in ("trace_distance", "uhlmann_fidelity"):
        if reference is None:
            raise ValueError(f"statistic {name!r} needs a reference state")
        fn = metrics.trace_distance if name == "trace_distance" \
            else metrics.uhlmann_fidelity
        return fn(rho, reference)
    raise ValueError(f"unknown statistic {name!r}; choose from {_STATISTICS}")


def _mc_single(args):
    counts, exposures, settings, child_seed, statistic, ref_matrix = args
    rng = np.random.default_rng(child_seed)
    resampled = [
        CountRecord(a, b, int(rng.poisson(c)), e)
        for (a, b), c, e in zip(settings, counts, exposures)
    ]
    rec = mle_reconstruct(resampled)
    reference = DensityMatrix(ref_matrix, ("a", "b")) \
        if ref_matrix is not None else None
    return evaluate_statistic(statistic, rec.rho_hat, reference)


def monte_carlo_uncertainty(records: list[CountRecord], n_resamples: int,
                            seed: int, statistic: str,
                            workers: int = 1) -> tuple[float, float]:
    """Poisson-resample the counts, re-reconstruct, and report the sample
    mean and standard deviation of a named statistic.

    Deterministic given the seed; independent of ``workers``.
    """
    if n_resamples < 2:
        raise ValueError("need at least 2 resamples")
    point = mle_reconstruct(records)
    ref = point.rho_hat.matrix if statistic in ("trace_distance",
                                                "uhlmann_fidelity") else None
    counts = [r.count for r in records]
    exposures = [r.exposure for r in records]
    settings = [(r.setting_a, r.setting_b) for r in records]
    children = np.random.SeedSequence(seed).spawn(n_resamples)
    tasks = [(counts, exposures, settings, child, statistic, ref)
             for child in children]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            values = list(pool.map(_mc_single, tasks, chunksize=8))
    else:
        values = [_mc_single(t) for t in tasks]
    values = np.asarray(values, dtype=float)
    return float(values.mean()), float(values.std(ddof=1))


# ---------------------------------------------------------------------------
# CSV / JSON interchange

CSV_HEADER = ["setting_a", "setting_b", "count", "exposure"]


def counts_to_csv(records: list[CountRecord], path) -> None:
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(CSV_HEADER)
        for r in records:
            w.writerow([r.setting_a, r.setting_b, r.count, repr(r.exposure)])


def counts_from_csv(path) -> list[CountRecord]:
    with open(path, newline="") as f:
        reader = csv.DictReader(f)
        if reader.fieldnames != CSV_HEADER:
            raise ValueError(
                f"bad counts CSV header {reader.fieldnames}, expected {CSV_HEADER}")
        return [CountRecord(row["setting_a"], row["setting_b"],
                            int(row["count"]), float(row["exposure"]))
                for row in reader]


def matrix_to_json_dict(rho: DensityMatrix) -> dict:
    return {
        "labels": list(rho.labels),
        "matrix": [[[float(z.real), float(z.imag)] for z in row]
                   for row in rho.matrix],
    }


def matrix_from_json_dict(d: dict) -> DensityMatrix:
    mat = np.array([[complex(re, im) for re, im in row]
                    for row in d["matrix"]])
    return DensityMatrix(mat, tuple(d["labels"]))


def matrix_to_json(rho: DensityMatrix, path) -> None:
    with open(path, "w") as f:
        json.dump(matrix_to_json_dict(rho), f, indent=2)


def matrix_from_json(path) -> DensityMatrix:
    with open(path) as f:
        return matrix_from_json_dict(json.load(f))
