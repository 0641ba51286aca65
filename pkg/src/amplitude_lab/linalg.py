"""Dense Hermitian linear-algebra helpers.

Every eigendecomposition in the package goes through this module so that
the hermitize-before-eigh policy and the scale-relative tolerances are
applied uniformly.
"""

from __future__ import annotations

import numpy as np

from .config import DEFAULT_TOL, Tolerances
from .errors import NotPositive


def hermitize(a: np.ndarray) -> np.ndarray:
    """Return the Hermitian part (a + a*) / 2."""
    return 0.5 * (a + a.conj().T)


def herm_eig(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of the hermitized input, eigenvalues ascending."""
    w, v = np.linalg.eigh(hermitize(a))
    return w, v


def is_hermitian(a: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> bool:
    scale = float(np.max(np.abs(a))) if a.size else 0.0
    return float(np.max(np.abs(a - a.conj().T))) <= tol.herm(scale) if a.size else True


def check_psd(a: np.ndarray, tol: Tolerances = DEFAULT_TOL, what: str = "matrix") -> None:
    """Raise NotPositive if any eigenvalue falls below -tau_psd."""
    if a.size == 0:
        return
    w, _ = herm_eig(a)
    lam_max = float(np.max(np.abs(w)))
    if float(w[0]) < -tol.psd(lam_max):
        raise NotPositive(f"{what} has eigenvalue {w[0]:.3e} below -{tol.psd(lam_max):.3e}")


def min_eig(a: np.ndarray) -> float:
    """Smallest eigenvalue of the hermitized input."""
    if a.size == 0:
        return 0.0
    w, _ = herm_eig(a)
    return float(w[0])


def clamped_eigs(a: np.ndarray, tol: Tolerances = DEFAULT_TOL, what: str = "matrix"):
    """Eigendecomposition with roundoff eigenvalues clamped to exact 0.

    Negative eigenvalues within -tau_psd are clamped; anything more
    negative raises NotPositive.  Positive eigenvalues below the rank
    cut are zeroed as well, so exact-rank-deficient input stays exactly
    rank deficient (fractional powers would otherwise amplify
    eigenvalue noise to its square root).
    """
    w, v = herm_eig(a)
    lam_max = float(np.max(np.abs(w))) if w.size else 0.0
    if w.size and float(w[0]) < -tol.psd(lam_max):
        raise NotPositive(f"{what} has eigenvalue {w[0]:.3e} below -{tol.psd(lam_max):.3e}")
    w = np.where(w < tol.rank_cut(a.shape[0], lam_max), 0.0, w)
    return w, v


def psd_sqrt(h: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Unique PSD square root of a Hermitian PSD matrix.

    Negative eigenvalues within -tau_psd are clamped to zero before
    rooting; anything more negative raises NotPositive.
    """
    if h.size == 0:
        return h.copy()
    w, v = clamped_eigs(h, tol)
    return hermitize((v * np.sqrt(w)) @ v.conj().T)


def psd_power(h: np.ndarray, s: float, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Fractional power h^s of a Hermitian PSD matrix, s in [0, 1].

    Zero eigenvalues map to 0 for s > 0 and to 1 at s = 0 (so h^0 is the
    identity, matching the endpoint convention of the interpolation
    family).
    """
    if h.size == 0:
        return h.copy()
    w, v = clamped_eigs(h, tol)
    return hermitize((v * np.power(w, s)) @ v.conj().T)


def unitary_power(h: np.ndarray, z: complex, cut: float) -> np.ndarray:
    """h^z for Hermitian positive-definite h and complex exponent z.

    Eigenvalues at or below the cut raise NotPositive (callers enforce
    faithfulness first, so the spectrum should be strictly positive).
    """
    w, v = herm_eig(h)
    if w.size and float(w[0]) <= cut:
        raise NotPositive(f"eigenvalue {w[0]:.3e} not strictly positive (cut {cut:.3e})")
    return (v * np.power(w.astype(complex), z)) @ v.conj().T


def trace_norm(a: np.ndarray) -> float:
    """Sum of singular values; for Hermitian input the sum of |eigenvalues|."""
    if a.size == 0:
        return 0.0
    return float(np.sum(np.linalg.svd(a, compute_uv=False)))


def herm_trace_norm(a: np.ndarray) -> float:
    """Trace norm of a Hermitian matrix via eigenvalues."""
    if a.size == 0:
        return 0.0
    w, _ = herm_eig(a)
    return float(np.sum(np.abs(w)))


def range_isometry(h: np.ndarray, cut: float) -> np.ndarray:
    """Orthonormal columns spanning the range of Hermitian PSD h.

    Eigenvalues strictly above the cut count toward the rank.
    """
    w, v = herm_eig(h)
    keep = w > cut
    return v[:, keep]


def rank_with_cut(h: np.ndarray, cut: float) -> int:
    w, _ = herm_eig(h)
    return int(np.sum(w > cut))
