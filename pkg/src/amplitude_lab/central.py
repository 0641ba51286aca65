"""Discrete central decomposition of states and the amplitude sum formula.

Measures over the center are atomic here: a weight vector over the
blocks.  A state splits into normalized block components with scalar
Radon-Nikodym densities, and the transition amplitude of a pair is the
weighted sum of componentwise amplitudes, independently of the chosen
admissible weights.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .algebra import BlockAlgebra, Functional, _check_same_algebra
from .amplitudes import transition_amplitude
from .errors import DomainError, SingularMeasure


@dataclass(frozen=True, eq=False)
class StateDecomposition:
    """Weighted family of block states reassembling a functional.

    weights[k] * radon_nikodym[k] * components[k] summed over blocks
    recovers the original densities.  Blocks without mass carry the
    normalized trace as a placeholder component (their density is 0).
    """

    algebra: BlockAlgebra
    weights: np.ndarray = field(repr=False)
    components: tuple[Functional, ...]
    radon_nikodym: np.ndarray = field(repr=False)

    def reassemble(self) -> Functional:
        densities = []
        for k, comp in enumerate(self.components):
            c = float(self.weights[k] * self.radon_nikodym[k])
            densities.append(c * comp.densities[0])
        return Functional(self.algebra, tuple(densities))


def _validate_weights(mu, num_blocks: int) -> np.ndarray:
    mu = np.asarray(mu, dtype=float)
    if mu.shape != (num_blocks,):
        raise DomainError(f"weight vector must have length {num_blocks}")
    if np.any(mu < -1e-12) or abs(float(np.sum(mu)) - 1.0) > 1e-9:
        raise DomainError("weights must form a probability distribution")
    return np.maximum(mu, 0.0)


def decompose(phi: Functional, mu: Sequence[float] | None = None) -> StateDecomposition:
    """Split a state into block components against atomic central weights.

    With mu omitted, the weights are the central masses of phi itself.
    Explicit weights must not vanish on a block where phi carries mass.
    """
    phi.require_positive()
    masses = phi.block_masses()
    total = float(np.sum(masses))
    if total <= 0.0:
        raise DomainError("cannot decompose the zero functional")
    cut = phi.tol.psd(phi.scale_max())
    if mu is None:
        weights = masses / total
    else:
        weights = _validate_weights(mu, phi.algebra.num_blocks)
        for k, m in enumerate(masses):
            if m > cut and weights[k] <= 0.0:
                raise SingularMeasure(f"weight vanishes on block {k} carrying mass {m:.3e}")
    components = []
    radon = np.zeros(phi.algebra.num_blocks)
    for k, (n, d) in enumerate(zip(phi.algebra.block_dims, phi.densities)):
        block_alg = BlockAlgebra((n,))
        if masses[k] > cut:
            components.append(Functional(block_alg, (d / masses[k],), phi.tol))
            radon[k] = masses[k] / weights[k]
        else:
            components.append(Functional(block_alg, (np.eye(n, dtype=complex) / n,), phi.tol))
            radon[k] = 0.0
    return StateDecomposition(
        algebra=phi.algebra,
        weights=weights,
        components=tuple(components),
        radon_nikodym=radon,
    )


class AmplitudeSumCheck(NamedTuple):
    lhs: float
    rhs: float
    defect: float


def amplitude_sum_check(
    phi: Functional, psi: Functional, mu: Sequence[float] | None = None
) -> AmplitudeSumCheck:
    """Compare the amplitude against its central decomposition sum.

    rhs = sum_k mu_k sqrt(r_phi[k] r_psi[k]) * amplitude(phi_k, psi_k);
    the value does not depend on the admissible weight choice.  With mu
    omitted the central mass of the average state is used, which is
    admissible for both arguments.
    """
    _check_same_algebra(phi, psi)
    if mu is None:
        avg = 0.5 * (phi + psi)
        masses = avg.block_masses()
        total = float(np.sum(masses))
        if total <= 0.0:
            raise DomainError("both functionals are zero")
        mu = masses / total
    dp = decompose(phi, mu)
    dq = decompose(psi, mu)
    rhs = 0.0
    for k in range(phi.algebra.num_blocks):
        scale = dp.weights[k] * np.sqrt(dp.radon_nikodym[k] * dq.radon_nikodym[k])
        if scale > 0.0:
            rhs += scale * transition_amplitude(dp.components[k], dq.components[k])
    lhs = transition_amplitude(phi, psi)
    return AmplitudeSumCheck(lhs=lhs, rhs=float(rhs), defect=abs(lhs - float(rhs)))


def integrate_disjoint_family(
    components: Sequence[Functional], mu: Sequence[float]
) -> tuple[BlockAlgebra, Functional]:
    """Assemble a weighted direct sum of states on a direct-sum algebra.

    Component k contributes its blocks with densities scaled by mu[k];
    decompose inverts the construction when the components are single
    blocks.
    """
    if len(components) == 0:
        raise DomainError("need at least one component")
    mu = _validate_weights(mu, len(components))
    dims: list[int] = []
    densities: list[np.ndarray] = []
    for w, comp in zip(mu, components):
        comp.require_positive()
        dims.extend(comp.algebra.block_dims)
        densities.extend(w * d for d in comp.densities)
    algebra = BlockAlgebra(tuple(dims))
    return algebra, Functional(algebra, tuple(densities), components[0].tol)
