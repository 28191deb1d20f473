"""Second-quantized linear optics on labeled spatial/polarization modes.

A mode is the triple ``(arm, polarization, internal)`` where ``internal`` is a
small integer tagging temporal/spectral distinguishability (0 = reference).
States are kept as sparse polynomials in creation operators: each term is a
sorted monomial of modes with a complex coefficient, meaning
``coeff * prod_m a_m^dagger |vac>``. The Fock-basis amplitude of a monomial
with occupations ``n_m`` is ``coeff * sqrt(prod n_m!)``, which is where the
bosonic bunching factors enter.

The six-photon cloning network never exceeds a few hundred nonzero monomials,
so nothing dense is ever materialized.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter, defaultdict
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .qmath import DensityMatrix

# (arm, polarization, internal)
Mode = tuple[str, str, int]

_PRUNE = 1e-15
_POL_INDEX = {"H": 0, "V": 1}


@dataclass(frozen=True)
class BeamSplitterSpec:
    """Non-polarizing beam splitter routing two input arms to two output arms.

    Acts identically on every polarization and internal label. The reflected
    amplitude carries a factor +i.
    """

    input_arms: tuple[str, str]
    output_arms: tuple[str, str]
    reflectivity: float

    def __post_init__(self):
        if not 0.0 <= self.reflectivity <= 1.0:
            raise ValueError(f"reflectivity {self.reflectivity} outside [0, 1]")
        if set(self.input_arms) & set(self.output_arms):
            raise ValueError("input and output arm pairs must be disjoint")


class FockState:
    """Sparse multi-photon state as a creation-operator polynomial."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[tuple[Mode, ...], complex]):
        clean: dict[tuple[Mode, ...], complex] = {}
        nphot = None
        for mono, coeff in terms.items():
            if abs(coeff) <= _PRUNE:
                continue
            mono = tuple(sorted(mono))
            if nphot is None:
                nphot = len(mono)
            elif len(mono) != nphot:
                raise ValueError("mixed total photon number in one state")
            clean[mono] = clean.get(mono, 0.0) + coeff
        self.terms = {m: c for m, c in clean.items() if abs(c) > _PRUNE}

    @staticmethod
    def from_photons(modes: Iterable[Mode]) -> "FockState":
        """Product state with one photon per listed mode, amplitude 1."""
        return FockState({tuple(sorted(modes)): 1.0 + 0.0j})

    def num_photons(self) -> int:
        return len(next(iter(self.terms))) if self.terms else 0

    def norm_squared(self) -> float:
        total = 0.0
        for mono, coeff in self.terms.items():
            boson = 1.0
            for n in Counter(mono).values():
                boson *= math.factorial(n)
            total += abs(coeff) ** 2 * boson
        return total

    def arms(self) -> set[str]:
        return {m[0] for mono in self.terms for m in mono}

    def superpose(self, other: "FockState", a: complex = 1.0,
                  b: complex = 1.0) -> "FockState":
        out: dict[tuple[Mode, ...], complex] = defaultdict(complex)
        for mono, c in self.terms.items():
            out[mono] += a * c
        for mono, c in other.terms.items():
            out[mono] += b * c
        return FockState(out)

    def tensor(self, other: "FockState") -> "FockState":
        out: dict[tuple[Mode, ...], complex] = defaultdict(complex)
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                out[tuple(sorted(m1 + m2))] += c1 * c2
        return FockState(out)


def apply_beamsplitter(state: FockState, bs: BeamSplitterSpec) -> FockState:
    """Rewrite creation operators through the beam splitter.

    Arm a: a+ -> sqrt(1-R) c+ + i sqrt(R) d+
    Arm b: b+ -> i sqrt(R) c+ + sqrt(1-R) d+

    with (c, d) the output arms; polarization and internal labels ride along
    unchanged. Photon number and norm are preserved.
    """
    a_in, b_in = bs.input_arms
    c_out, d_out = bs.output_arms
    # a vacuum port is legitimate (single-photon splitting); both ports
    # empty means the splitter is wired to arms this state does not have
    if state.terms and not set(bs.input_arms) & state.arms():
        raise KeyError(
            f"neither input arm of {bs.input_arms} carries a photon")
    t = math.sqrt(1.0 - bs.reflectivity)
    r = 1j * math.sqrt(bs.reflectivity)

    out: dict[tuple[Mode, ...], complex] = defaultdict(complex)
    for mono, coeff in state.terms.items():
        choices = []
        for arm, pol, internal in mono:
            if arm == a_in:
                choices.append(((t, (c_out, pol, internal)),
                                (r, (d_out, pol, internal))))
            elif arm == b_in:
                choices.append(((r, (c_out, pol, internal)),
                                (t, (d_out, pol, internal))))
            else:
                choices.append(((1.0, (arm, pol, internal)),))
        for combo in itertools.product(*choices):
            amp = coeff
            modes = []
            for factor, mode in combo:
                amp *= factor
                modes.append(mode)
            if abs(amp) > _PRUNE:
                out[tuple(sorted(modes))] += amp
    return FockState(out)


def postselect_coincidence(
    state: FockState, arms: Sequence[str]
) -> tuple[DensityMatrix | None, float]:
    """Project onto exactly one photon per requested arm and read out polarization.

    Internal labels are traced out. Returns the normalized polarization
    density matrix labeled by ``arms`` plus the squared norm of the kept
    component (relative success probability). A fully rejected state comes
    back as ``(None, 0.0)``.
    """
    arms = [str(a) for a in arms]
    if state.terms and state.num_photons() != len(arms):
        raise ValueError(
            f"state has {state.num_photons()} photons, expected {len(arms)}"
        )
    arm_pos = {a: k for k, a in enumerate(arms)}

    # (pol indices per arm, internal labels per arm) -> amplitude
    kept: dict[tuple[tuple[int, ...], tuple[int, ...]], complex] = defaultdict(complex)
    for mono, coeff in state.terms.items():
        counts = Counter(m[0] for m in mono)
        if any(counts.get(a, 0) != 1 for a in arms):
            continue
        pols = [0] * len(arms)
        internals = [0] * len(arms)
        for arm, pol, internal in mono:
            k = arm_pos[arm]
            pols[k] = _POL_INDEX[pol]
            internals[k] = internal
        kept[(tuple(pols), tuple(internals))] += coeff

    weight = sum(abs(c) ** 2 for c in kept.values())
    if weight <= 0.0:
        return None, 0.0

    dim = 2 ** len(arms)
    rho = np.zeros((dim, dim), dtype=complex)
    # group by internal configuration: the internal label is traced, so only
    # amplitudes with identical internals interfere
    by_internal: dict[tuple[int, ...], dict[int, complex]] = defaultdict(dict)
    for (pols, internals), amp in kept.items():
        idx = 0
        for p in pols:
            idx = 2 * idx + p
        by_internal[internals][idx] = by_internal[internals].get(idx, 0.0) + amp
    for vec in by_internal.values():
        for i, ai in vec.items():
            for j, aj in vec.items():
                rho[i, j] += ai * np.conj(aj)
    rho /= weight
    return DensityMatrix(rho, tuple(arms)), weight


def dephase_internal(
    state: FockState, pairings: Sequence[tuple[str, str, float]]
) -> list[tuple[FockState, float]]:
    """Branch a state over partial photon distinguishability.

    Each pairing ``(arm_a, arm_b, overlap)`` splits the photon in ``arm_b``
    into a component indistinguishable from ``arm_a``'s photon (probability
    overlap^2) and an orthogonal internal mode (probability 1 - overlap^2).
    Branches combine multiplicatively across pairings; downstream evolution
    runs per branch and results are averaged incoherently by weight.

    Orthogonal branches relabel ``arm_b`` photons to internal label k+1 for
    the k-th pairing; reference states are expected to start at internal 0.
    """
    branches: list[tuple[FockState, float]] = [(state, 1.0)]
    for k, (arm_a, arm_b, lam) in enumerate(pairings):
        if not 0.0 <= lam <= 1.0:
            raise ValueError(f"overlap {lam} outside [0, 1]")
        for arm in (arm_a, arm_b):
            if state.terms and arm not in state.arms():
                raise KeyError(f"pairing references unknown arm {arm!r}")
        new_branches: list[tuple[FockState, float]] = []
        for st, w in branches:
            if lam**2 > 0.0:
                new_branches.append((st, w * lam**2))
            if 1.0 - lam**2 > 0.0:
                relabeled = FockState({
                    tuple(sorted(
                        (arm, pol, k + 1 if arm == arm_b else internal)
                        for arm, pol, internal in mono
                    )): c
                    for mono, c in st.terms.items()
                })
                new_branches.append((relabeled, w * (1.0 - lam**2)))
        branches = new_branches
    return branches
