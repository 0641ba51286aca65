"""Block *-algebras, positive functionals, and the Hilbert-Schmidt space.

The ambient algebra is a finite direct sum of full complex matrix blocks
M_{n_1} (+) ... (+) M_{n_m}.  Elements, functionals and square-root
vectors all carry one complex n_k x n_k matrix per block.  Everything is
immutable after construction and all operations are pure functions.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .config import DEFAULT_TOL, Tolerances
from .errors import InvalidAlgebra, NotPositive, ShapeError
from .linalg import herm_eig, herm_trace_norm, hermitize, is_hermitian, range_isometry


def _frozen_blocks(blocks: Iterable[np.ndarray], dims: Sequence[int], dtype=complex):
    out = []
    for n, b in zip(dims, blocks, strict=True):
        arr = np.array(b, dtype=dtype)
        if arr.shape != (n, n):
            raise ShapeError(f"block shape {arr.shape} does not match dimension {n}")
        arr.setflags(write=False)
        out.append(arr)
    return tuple(out)


@dataclass(frozen=True)
class BlockAlgebra:
    """Finite direct sum of full matrix blocks, described by its dimensions."""

    block_dims: tuple[int, ...]

    def __post_init__(self):
        if len(self.block_dims) == 0:
            raise InvalidAlgebra("algebra needs at least one block")
        if any(int(n) < 1 for n in self.block_dims):
            raise InvalidAlgebra(f"block dimensions must be >= 1, got {self.block_dims}")
        object.__setattr__(self, "block_dims", tuple(int(n) for n in self.block_dims))

    @property
    def num_blocks(self) -> int:
        return len(self.block_dims)

    @property
    def element_dim(self) -> int:
        """Total complex dimension of the algebra, sum of n_k^2."""
        return int(sum(n * n for n in self.block_dims))

    @property
    def space_dim(self) -> int:
        """Dimension of the underlying Hilbert space, sum of n_k."""
        return int(sum(self.block_dims))

    def identity(self) -> "BlockOperator":
        return BlockOperator(self, tuple(np.eye(n, dtype=complex) for n in self.block_dims))

    def zero_operator(self) -> "BlockOperator":
        return BlockOperator(self, tuple(np.zeros((n, n), dtype=complex) for n in self.block_dims))

    def zero_functional(self) -> "Functional":
        return Functional(self, tuple(np.zeros((n, n), dtype=complex) for n in self.block_dims))


def make_algebra(dims: Sequence[int]) -> BlockAlgebra:
    """Build the block algebra with the given block side lengths."""
    return BlockAlgebra(tuple(dims))


def _check_same_algebra(a, b) -> None:
    if a.algebra != b.algebra:
        raise ShapeError(f"algebra mismatch: {a.algebra.block_dims} vs {b.algebra.block_dims}")


@dataclass(frozen=True, eq=False)
class BlockOperator:
    """Element of a block algebra: one complex matrix per block."""

    algebra: BlockAlgebra
    blocks: tuple[np.ndarray, ...] = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "blocks", _frozen_blocks(self.blocks, self.algebra.block_dims))

    def adjoint(self) -> "BlockOperator":
        return BlockOperator(self.algebra, tuple(b.conj().T for b in self.blocks))

    def __add__(self, other: "BlockOperator") -> "BlockOperator":
        _check_same_algebra(self, other)
        return BlockOperator(self.algebra, tuple(a + b for a, b in zip(self.blocks, other.blocks)))

    def __sub__(self, other: "BlockOperator") -> "BlockOperator":
        _check_same_algebra(self, other)
        return BlockOperator(self.algebra, tuple(a - b for a, b in zip(self.blocks, other.blocks)))

    def __mul__(self, c: complex) -> "BlockOperator":
        return BlockOperator(self.algebra, tuple(c * b for b in self.blocks))

    __rmul__ = __mul__

    def __matmul__(self, other):
        if isinstance(other, BlockOperator):
            _check_same_algebra(self, other)
            return BlockOperator(
                self.algebra, tuple(a @ b for a, b in zip(self.blocks, other.blocks))
            )
        if isinstance(other, L2Vector):
            _check_same_algebra(self, other)
            return L2Vector(self.algebra, tuple(a @ b for a, b in zip(self.blocks, other.blocks)))
        return NotImplemented

    def norm(self) -> float:
        """Operator (spectral) norm, the max over blocks."""
        return max(float(np.linalg.norm(b, 2)) if b.size else 0.0 for b in self.blocks)


@dataclass(frozen=True, eq=False)
class Functional:
    """Linear functional with one Hermitian density matrix per block.

    Values are phi(x) = sum_k Tr(D_k x_k).  Densities may be signed (for
    differences phi - psi); positivity is checked only by the operations
    that need it.
    """

    algebra: BlockAlgebra
    densities: tuple[np.ndarray, ...] = field(repr=False)
    tol: Tolerances = field(default=DEFAULT_TOL, repr=False, compare=False)

    def __post_init__(self):
        blocks = _frozen_blocks(self.densities, self.algebra.block_dims)
        for d in blocks:
            if not is_hermitian(d, self.tol):
                raise NotPositive("density block is not Hermitian within tolerance")
        # hermitize to kill roundoff drift before any later eigendecomposition
        blocks = tuple(hermitize(d) for d in blocks)
        for d in blocks:
            d.setflags(write=False)
        object.__setattr__(self, "densities", blocks)

    @property
    def mass(self) -> float:
        """Value on the identity, phi(1)."""
        return float(sum(np.trace(d).real for d in self.densities))

    def scale_max(self) -> float:
        """Largest |eigenvalue| over all blocks; the functional's scale."""
        m = 0.0
        for d in self.densities:
            if d.size:
                w, _ = herm_eig(d)
                m = max(m, float(np.max(np.abs(w))))
        return m

    def is_positive(self) -> bool:
        lam = self.scale_max()
        cut = self.tol.psd(lam)
        for d in self.densities:
            if d.size:
                w, _ = herm_eig(d)
                if float(w[0]) < -cut:
                    return False
        return True

    def require_positive(self, what: str = "functional") -> None:
        if not self.is_positive():
            raise NotPositive(f"{what} is not positive semidefinite within tolerance")

    def block_masses(self) -> np.ndarray:
        return np.array([float(np.trace(d).real) for d in self.densities])

    def __add__(self, other: "Functional") -> "Functional":
        _check_same_algebra(self, other)
        return Functional(
            self.algebra, tuple(a + b for a, b in zip(self.densities, other.densities)), self.tol
        )

    def __sub__(self, other: "Functional") -> "Functional":
        _check_same_algebra(self, other)
        return Functional(
            self.algebra, tuple(a - b for a, b in zip(self.densities, other.densities)), self.tol
        )

    def __mul__(self, c: float) -> "Functional":
        return Functional(self.algebra, tuple(c * d for d in self.densities), self.tol)

    __rmul__ = __mul__


@dataclass(frozen=True, eq=False)
class L2Vector:
    """Vector in the Hilbert-Schmidt standard space of a block algebra.

    Inner product <xi|eta> = sum_k Tr(xi_k^* eta_k), conjugate-linear in
    the first argument.
    """

    algebra: BlockAlgebra
    blocks: tuple[np.ndarray, ...] = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "blocks", _frozen_blocks(self.blocks, self.algebra.block_dims))

    def inner(self, other: "L2Vector") -> complex:
        _check_same_algebra(self, other)
        return complex(
            sum(np.sum(a.conj() * b) for a, b in zip(self.blocks, other.blocks))
        )

    def norm(self) -> float:
        return float(np.sqrt(max(self.inner(self).real, 0.0)))

    def adjoint(self) -> "L2Vector":
        return L2Vector(self.algebra, tuple(b.conj().T for b in self.blocks))

    def __add__(self, other: "L2Vector") -> "L2Vector":
        _check_same_algebra(self, other)
        return L2Vector(self.algebra, tuple(a + b for a, b in zip(self.blocks, other.blocks)))

    def __sub__(self, other: "L2Vector") -> "L2Vector":
        _check_same_algebra(self, other)
        return L2Vector(self.algebra, tuple(a - b for a, b in zip(self.blocks, other.blocks)))

    def __mul__(self, c: complex) -> "L2Vector":
        return L2Vector(self.algebra, tuple(c * b for b in self.blocks))

    __rmul__ = __mul__

    def __matmul__(self, other):
        if isinstance(other, BlockOperator):
            _check_same_algebra(self, other)
            return L2Vector(self.algebra, tuple(a @ b for a, b in zip(self.blocks, other.blocks)))
        return NotImplemented


class StateRelation(enum.Enum):
    DISJOINT = "disjoint"
    QUASI_EQUIVALENT = "quasi_equivalent"
    NEITHER = "neither"


def evaluate(phi: Functional, x: BlockOperator) -> complex:
    """Value phi(x) = sum_k Tr(D_k x_k)."""
    _check_same_algebra(phi, x)
    return complex(sum(np.trace(d @ b) for d, b in zip(phi.densities, x.blocks)))


def functional_norm(phi: Functional) -> float:
    """Dual norm on the predual: the sum of blockwise trace norms.

    Densities may be signed, so this computes ||phi - psi|| when applied
    to a difference.
    """
    return float(sum(herm_trace_norm(d) for d in phi.densities))


def support_projection(phi: Functional) -> BlockOperator:
    """Blockwise orthogonal projection onto the range of each density.

    This is the minimal projection p with phi(1 - p) = 0.
    """
    phi.require_positive()
    lam = phi.scale_max()
    blocks = []
    for n, d in zip(phi.algebra.block_dims, phi.densities):
        cut = phi.tol.rank_cut(n, lam)
        v = range_isometry(d, cut)
        blocks.append(v @ v.conj().T)
    return BlockOperator(phi.algebra, tuple(blocks))


def central_support(phi: Functional) -> BlockOperator:
    """Central projection: the identity on every block carrying mass."""
    phi.require_positive()
    lam = phi.scale_max()
    cut = phi.tol.psd(lam)
    blocks = []
    for n, d in zip(phi.algebra.block_dims, phi.densities):
        on = herm_trace_norm(d) > cut
        blocks.append(np.eye(n, dtype=complex) if on else np.zeros((n, n), dtype=complex))
    return BlockOperator(phi.algebra, tuple(blocks))


def _central_pattern(phi: Functional) -> np.ndarray:
    z = central_support(phi)
    return np.array([bool(np.trace(b).real > 0.5) for b in z.blocks])


def classify_pair(phi: Functional, psi: Functional) -> StateRelation:
    """Disjoint (orthogonal central supports), quasi-equivalent (equal), or neither."""
    _check_same_algebra(phi, psi)
    zp = _central_pattern(phi)
    zq = _central_pattern(psi)
    if not np.any(zp & zq):
        return StateRelation.DISJOINT
    if np.array_equal(zp, zq):
        return StateRelation.QUASI_EQUIVALENT
    return StateRelation.NEITHER


def total_rank(phi: Functional) -> int:
    phi.require_positive()
    lam = phi.scale_max()
    r = 0
    for n, d in zip(phi.algebra.block_dims, phi.densities):
        cut = phi.tol.rank_cut(n, lam)
        w, _ = herm_eig(d)
        r += int(np.sum(w > cut))
    return r


def is_pure(phi: Functional) -> bool:
    """True when the densities have total rank one."""
    return total_rank(phi) == 1


def is_faithful(phi: Functional) -> bool:
    """True when every density has full rank."""
    return total_rank(phi) == phi.algebra.space_dim
