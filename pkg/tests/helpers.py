"""Shared oracles for the test suite.

These stay independent of the code paths they check: the closed-form
SPD mean uses plain eigendecompositions, and the kernel Gram is a brute
force double loop over matrix units.
"""

import numpy as np

from amplitude_lab import amplitude_kernel, matrix_units


def eig_fn(h: np.ndarray, fn) -> np.ndarray:
    w, v = np.linalg.eigh(0.5 * (h + h.conj().T))
    return (v * fn(w)) @ v.conj().T


def spd_mean_closed_form(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """A # B = A^{1/2} (A^{-1/2} B A^{-1/2})^{1/2} A^{1/2}, invertible inputs."""
    ar = eig_fn(a, np.sqrt)
    ai = eig_fn(a, lambda w: 1.0 / np.sqrt(w))
    mid = eig_fn(ai @ b @ ai, lambda w: np.sqrt(np.maximum(w, 0.0)))
    return ar @ mid @ ar


def kernel_gram(phi, psi) -> np.ndarray:
    """Gram of the amplitude kernel over the matrix-unit basis, brute force."""
    units = list(matrix_units(phi.algebra))
    d = len(units)
    g = np.zeros((d, d), dtype=complex)
    for i, u in enumerate(units):
        for j, v in enumerate(units):
            g[i, j] = amplitude_kernel(phi, psi, u, v)
    return g


def min_eigval(h: np.ndarray) -> float:
    return float(np.linalg.eigvalsh(0.5 * (h + h.conj().T))[0])
