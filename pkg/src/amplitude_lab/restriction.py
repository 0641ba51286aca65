"""Unital embeddings of block algebras, restriction, and UCP pullbacks.

A unital embedding of multi-matrix algebras is stored in standard
position: source block l enters target block k as c[k][l] copies of
a_l (x) 1, sections ordered by l, conjugated by an optional unitary per
target block.  Every unital embedding has this form, with the unitary
carrying all the generality.

Restricting a functional along an embedding is the adjoint operation
(blockwise partial traces over the multiplicity indices); restricting a
pair of states along an increasing chain of subalgebras produces a
nonincreasing sequence of transition amplitudes that ends at the ambient
amplitude when the chain exhausts the algebra.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.linalg import block_diag

from .algebra import BlockAlgebra, BlockOperator, Functional
from .amplitudes import transition_amplitude
from .config import DEFAULT_TOL, Tolerances
from .errors import DomainError, InvalidEmbedding, NotUnital, ShapeError, TooLarge
from .linalg import hermitize


@dataclass(frozen=True, eq=False)
class UnitalEmbedding:
    """Unital *-embedding between block algebras in standard position."""

    source: BlockAlgebra
    target: BlockAlgebra
    multiplicity: np.ndarray = field(repr=False)
    unitaries: tuple[np.ndarray, ...] | None = field(default=None, repr=False)
    tol: Tolerances = field(default=DEFAULT_TOL, repr=False, compare=False)

    def __post_init__(self):
        c = np.array(self.multiplicity, dtype=int)
        if c.shape != (self.target.num_blocks, self.source.num_blocks):
            raise InvalidEmbedding(
                f"multiplicity shape {c.shape} does not match "
                f"{self.target.num_blocks} x {self.source.num_blocks}"
            )
        if np.any(c < 0):
            raise InvalidEmbedding("multiplicities must be nonnegative")
        dims_src = np.array(self.source.block_dims)
        for k, n in enumerate(self.target.block_dims):
            if int(c[k] @ dims_src) != n:
                raise InvalidEmbedding(
                    f"target block {k}: sum of c[k][l]*m_l = {int(c[k] @ dims_src)} != {n}"
                )
        c.setflags(write=False)
        object.__setattr__(self, "multiplicity", c)
        if self.unitaries is not None:
            us = []
            for k, (n, u) in enumerate(zip(self.target.block_dims, self.unitaries, strict=True)):
                u = np.array(u, dtype=complex)
                if u.shape != (n, n):
                    raise InvalidEmbedding(f"unitary {k} has shape {u.shape}, expected ({n},{n})")
                if np.max(np.abs(u.conj().T @ u - np.eye(n))) > self.tol.num:
                    raise InvalidEmbedding(f"matrix {k} is not unitary within tolerance")
                u.setflags(write=False)
                us.append(u)
            object.__setattr__(self, "unitaries", tuple(us))

    def _unitary(self, k: int) -> np.ndarray | None:
        return None if self.unitaries is None else self.unitaries[k]

    def _section_offsets(self, k: int) -> list[tuple[int, int]]:
        """(source block l, start offset) of each nonempty section in target block k."""
        out = []
        pos = 0
        for l, m in enumerate(self.source.block_dims):
            c = int(self.multiplicity[k, l])
            if c > 0:
                out.append((l, pos))
                pos += m * c
        return out

    def slot_isometries(self, k: int) -> list[tuple[int, np.ndarray]]:
        """All copy isometries (l, V) into target block k, ordered by (l, copy)."""
        u = self._unitary(k)
        n = self.target.block_dims[k]
        out = []
        for l, start in self._section_offsets(k):
            m = self.source.block_dims[l]
            c = int(self.multiplicity[k, l])
            for j in range(c):
                e = np.zeros((n, m), dtype=complex)
                for p in range(m):
                    e[start + p * c + j, p] = 1.0
                out.append((l, e if u is None else u @ e))
        return out

    def embed(self, a: BlockOperator) -> BlockOperator:
        """Image of a source element under the embedding."""
        if a.algebra != self.source:
            raise ShapeError("operator does not live on the source algebra")
        blocks = []
        for k in range(self.target.num_blocks):
            parts = []
            for l, _ in self._section_offsets(k):
                c = int(self.multiplicity[k, l])
                parts.append(np.kron(a.blocks[l], np.eye(c)))
            mat = block_diag(*parts) if parts else np.zeros((0, 0))
            u = self._unitary(k)
            if u is not None:
                mat = u @ mat @ u.conj().T
            blocks.append(mat)
        return BlockOperator(self.target, tuple(blocks))


def identity_embedding(algebra: BlockAlgebra) -> UnitalEmbedding:
    return UnitalEmbedding(algebra, algebra, np.eye(algebra.num_blocks, dtype=int))


def compose_embeddings(outer: UnitalEmbedding, inner: UnitalEmbedding) -> UnitalEmbedding:
    """Composite embedding outer o inner, back in standard position.

    Multiplicity matrices multiply; the composite unitary is rebuilt from
    the products of copy isometries (ordered by source block, then by
    the outer copy, then the inner copy).
    """
    if inner.target != outer.source:
        raise InvalidEmbedding("inner target and outer source algebras differ")
    c = outer.multiplicity @ inner.multiplicity
    unitaries = []
    for k, n in enumerate(outer.target.block_dims):
        slots: dict[int, list[np.ndarray]] = {l: [] for l in range(inner.source.num_blocks)}
        for j, v_out in outer.slot_isometries(k):
            for l, v_in in inner.slot_isometries(j):
                slots[l].append(v_out @ v_in)
        u = np.zeros((n, n), dtype=complex)
        pos = 0
        for l, m in enumerate(inner.source.block_dims):
            copies = slots[l]
            cc = len(copies)
            assert cc == int(c[k, l])
            for j, w in enumerate(copies):
                # scatter w into the standard slot (section l, copy j)
                for p in range(m):
                    u[:, pos + p * cc + j] = w[:, p]
            pos += m * cc
        unitaries.append(u)
    return UnitalEmbedding(inner.source, outer.target, c, tuple(unitaries), inner.tol)


def restrict(phi: Functional, emb: UnitalEmbedding) -> Functional:
    """Pull a functional on the target back to the source, phi o embed.

    Densities are partial traces over the multiplicity indices of the
    unitarily rotated target densities; mass is preserved.
    """
    if phi.algebra != emb.target:
        raise ShapeError("functional does not live on the target algebra")
    out = [np.zeros((m, m), dtype=complex) for m in emb.source.block_dims]
    for k, d in enumerate(phi.densities):
        u = emb._unitary(k)
        rot = d if u is None else u.conj().T @ d @ u
        for l, start in emb._section_offsets(k):
            m = emb.source.block_dims[l]
            c = int(emb.multiplicity[k, l])
            section = rot[start : start + m * c, start : start + m * c]
            out[l] += np.einsum("pjqj->pq", section.reshape(m, c, m, c))
    return Functional(emb.source, tuple(hermitize(d) for d in out), phi.tol)


@dataclass(frozen=True, eq=False)
class UcpMap:
    """Unital completely positive map between block algebras, in Kraus form.

    kraus[k] is the family for target block k: matrices of shape
    (source space dim, N_k) with sum_i K_i^* K_i = I_{N_k}, acting as
    Phi(a)_k = sum_i K_i^* blockdiag(a) K_i.
    """

    source: BlockAlgebra
    target: BlockAlgebra
    kraus: tuple[tuple[np.ndarray, ...], ...] = field(repr=False)
    tol: Tolerances = field(default=DEFAULT_TOL, repr=False, compare=False)

    def __post_init__(self):
        s = self.source.space_dim
        if len(self.kraus) != self.target.num_blocks:
            raise NotUnital("one Kraus family per target block is required")
        frozen = []
        for k, (n, fam) in enumerate(zip(self.target.block_dims, self.kraus, strict=True)):
            fam = tuple(np.array(m, dtype=complex) for m in fam)
            for m in fam:
                if m.shape != (s, n):
                    raise ShapeError(f"Kraus matrix shape {m.shape}, expected ({s},{n})")
                m.setflags(write=False)
            total = sum(m.conj().T @ m for m in fam)
            if len(fam) == 0 or np.max(np.abs(total - np.eye(n))) > self.tol.num:
                raise NotUnital(f"Kraus family for target block {k} does not sum to identity")
            frozen.append(fam)
        object.__setattr__(self, "kraus", tuple(frozen))

    def apply(self, a: BlockOperator) -> BlockOperator:
        """Phi(a) on the target algebra."""
        if a.algebra != self.source:
            raise ShapeError("operator does not live on the source algebra")
        big = block_diag(*a.blocks)
        blocks = tuple(
            sum(m.conj().T @ big @ m for m in fam) for fam in self.kraus
        )
        return BlockOperator(self.target, blocks)


def embedding_as_ucp(emb: UnitalEmbedding) -> UcpMap:
    """The embedding viewed as a UCP map (Kraus family of copy isometries)."""
    s = emb.source.space_dim
    offsets = np.concatenate([[0], np.cumsum(emb.source.block_dims)])
    families = []
    for k in range(emb.target.num_blocks):
        fam = []
        for l, v in emb.slot_isometries(k):
            kmat = np.zeros((s, emb.target.block_dims[k]), dtype=complex)
            kmat[offsets[l] : offsets[l + 1], :] = v.conj().T
            fam.append(kmat)
        families.append(tuple(fam))
    return UcpMap(emb.source, emb.target, tuple(families), emb.tol)


def ucp_pullback(channel: UcpMap, psi: Functional) -> Functional:
    """Pull a positive functional on the target back along a UCP map.

    The density is sum_i K_i D K_i^* cut down to the source blocks;
    positivity and total mass are preserved, and the transition
    amplitude of a pair can only grow under the pullback.
    """
    if psi.algebra != channel.target:
        raise ShapeError("functional does not live on the target algebra")
    psi.require_positive()
    s = channel.source.space_dim
    acc = np.zeros((s, s), dtype=complex)
    for fam, d in zip(channel.kraus, psi.densities):
        for m in fam:
            acc += m @ d @ m.conj().T
    out = []
    pos = 0
    for n in channel.source.block_dims:
        out.append(hermitize(acc[pos : pos + n, pos : pos + n]))
        pos += n
    return Functional(channel.source, tuple(out), psi.tol)


@dataclass(frozen=True, eq=False)
class SubalgebraChain:
    """Increasing chain A_1 -> A_2 -> ... -> A_T -> ambient."""

    algebras: tuple[BlockAlgebra, ...]
    links: tuple[UnitalEmbedding, ...]
    final: UnitalEmbedding

    def __post_init__(self):
        if len(self.links) != len(self.algebras) - 1:
            raise InvalidEmbedding("need exactly one link between consecutive algebras")
        for n, link in enumerate(self.links):
            if link.source != self.algebras[n] or link.target != self.algebras[n + 1]:
                raise InvalidEmbedding(f"link {n} does not connect A_{n + 1} to A_{n + 2}")
        if self.final.source != self.algebras[-1]:
            raise InvalidEmbedding("final embedding must start at the last chain algebra")

    @property
    def ambient(self) -> BlockAlgebra:
        return self.final.target

    def __len__(self) -> int:
        return len(self.algebras)

    def embedding_to_ambient(self, n: int) -> UnitalEmbedding:
        """Composite embedding A_{n+1} -> ambient (0-based index)."""
        emb = self.final
        for link in reversed(self.links[n:]):
            emb = compose_embeddings(emb, link)
        return emb


def chain_amplitudes(phi: Functional, psi: Functional, chain: SubalgebraChain) -> list[float]:
    """Transition amplitudes of the restrictions along the chain.

    Entry n is the amplitude of the pair restricted to A_{n+1}; the
    sequence is nonincreasing in n and ends at the ambient amplitude
    when the final embedding is the identity.  Restriction is performed
    stepwise from the top, which agrees with restricting along the
    composite embeddings.
    """
    if phi.algebra != chain.ambient or psi.algebra != chain.ambient:
        raise ShapeError("functionals must live on the ambient algebra")
    amps = []
    p, q = restrict(phi, chain.final), restrict(psi, chain.final)
    amps.append(transition_amplitude(p, q))
    for link in reversed(chain.links):
        p, q = restrict(p, link), restrict(q, link)
        amps.append(transition_amplitude(p, q))
    amps.reverse()
    return amps


def build_product_chain(
    site_dims: Sequence[int], cap: int = 10
) -> tuple[BlockAlgebra, SubalgebraChain]:
    """Chain of leading tensor factors inside M_{d_1 ... d_N}.

    A_n is the full matrix algebra on the first n sites embedded as
    a -> a (x) 1 on the rest.
    """
    dims = [int(d) for d in site_dims]
    if len(dims) == 0 or any(d < 1 for d in dims):
        raise DomainError("site dimensions must be positive")
    if len(dims) > cap:
        raise TooLarge(f"{len(dims)} sites exceed the cap of {cap}")
    partial = np.cumprod(dims)
    algebras = tuple(BlockAlgebra((int(p),)) for p in partial)
    links = tuple(
        UnitalEmbedding(algebras[n], algebras[n + 1], np.array([[dims[n + 1]]]))
        for n in range(len(dims) - 1)
    )
    ambient = algebras[-1]
    chain = SubalgebraChain(algebras, links, identity_embedding(ambient))
    return ambient, chain


def product_state(site_densities: Sequence[np.ndarray], tol: Tolerances = DEFAULT_TOL) -> Functional:
    """Tensor product functional on the single-block algebra of all sites."""
    mats = [np.array(d, dtype=complex) for d in site_densities]
    if not mats:
        raise DomainError("need at least one site density")
    acc = mats[0]
    for m in mats[1:]:
        acc = np.kron(acc, m)
    return Functional(BlockAlgebra((acc.shape[0],)), (acc,), tol)


def _check_distribution(p: np.ndarray, name: str) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if p.ndim != 1 or p.size == 0:
        raise DomainError(f"{name} must be a nonempty vector")
    if np.any(p < -1e-12) or abs(float(np.sum(p)) - 1.0) > 1e-9:
        raise DomainError(f"{name} is not a probability distribution")
    return np.maximum(p, 0.0)


def build_lumped_diagonal_chain(p: Sequence[float], q: Sequence[float]) -> SubalgebraChain:
    """Chain of tail-lumped diagonal subalgebras of C^N.

    A_n keeps the first n-1 coordinates and lumps the tail into a single
    unit; restricting a diagonal state sums its tail mass.  Both weight
    vectors are validated as distributions of the same length.
    """
    pv = _check_distribution(np.asarray(p), "p")
    qv = _check_distribution(np.asarray(q), "q")
    if pv.size != qv.size:
        raise DomainError("p and q must have the same length")
    n_total = pv.size
    algebras = tuple(BlockAlgebra((1,) * n) for n in range(1, n_total + 1))
    links = []
    for n in range(1, n_total):
        c = np.zeros((n + 1, n), dtype=int)
        for k in range(n):
            c[k, k] = 1
        c[n, n - 1] = 1
        links.append(UnitalEmbedding(algebras[n - 1], algebras[n], c))
    return SubalgebraChain(algebras, tuple(links), identity_embedding(algebras[-1]))


def diagonal_state(weights: Sequence[float], tol: Tolerances = DEFAULT_TOL) -> Functional:
    """State on C^N with the given diagonal weights."""
    w = np.asarray(weights, dtype=float)
    algebra = BlockAlgebra((1,) * w.size)
    return Functional(algebra, tuple(np.array([[x]], dtype=complex) for x in w), tol)
