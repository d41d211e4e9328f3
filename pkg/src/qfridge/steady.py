"""Stationary states of classical rate equations ``dp/dt = W p``."""

from __future__ import annotations

import numpy as np
from scipy.linalg import expm

# populations this negative are rounding noise and get clamped to zero
CLAMP_TOL = 1e-12


class DegenerateGeneratorError(ValueError):
    """The generator has more than one stationary state."""

    def __init__(self, kernel_dim: int):
        super().__init__(
            f"generator kernel has dimension {kernel_dim}; the state graph is "
            "disconnected and the stationary state is not unique"
        )
        self.kernel_dim = kernel_dim


class InvalidGeneratorError(ValueError):
    pass


def add_transition(W: np.ndarray, src: int, dst: int, rate: float) -> None:
    """Add a ``src -> dst`` jump with the given rate to ``W`` in place."""
    W[dst, src] += rate
    W[src, src] -= rate


def check_generator(W: np.ndarray, atol: float = 1e-14) -> None:
    """Raise :class:`InvalidGeneratorError` unless ``W`` is a rate generator.

    Column sums are compared relative to the largest rate in the matrix.
    """
    W = np.asarray(W, dtype=float)
    if W.ndim != 2 or W.shape[0] != W.shape[1]:
        raise InvalidGeneratorError("generator must be square")
    off = W - np.diag(np.diag(W))
    if np.any(off < 0):
        raise InvalidGeneratorError("off-diagonal rates must be non-negative")
    scale = max(np.abs(W).max(), 1.0)
    if np.abs(W.sum(axis=0)).max() > atol * scale:
        raise InvalidGeneratorError("columns of the generator must sum to zero")


def stationary_distribution(W: np.ndarray, rank_tol: float = 1e-12) -> np.ndarray:
    """Normalised kernel vector of the generator ``W``.

    The kernel is found from a singular value decomposition.  Singular values
    below ``rank_tol * sigma_max`` count as zero; if more than one does, the
    steady state is not unique and :class:`DegenerateGeneratorError` is
    raised instead of picking one arbitrarily.
    """
    W = np.asarray(W, dtype=float)
    check_generator(W, atol=1e-10)
    n = W.shape[0]
    if n == 1:
        return np.ones(1)
    _, s, vh = np.linalg.svd(W)
    smax = s[0] if s[0] > 0 else 1.0
    kernel_dim = int(np.sum(s <= rank_tol * smax))
    if kernel_dim != 1:
        raise DegenerateGeneratorError(kernel_dim)
    # Refine with the normalisation row appended; the SVD vector alone loses
    # relative accuracy on exponentially small populations.
    A = np.vstack([W, np.ones(n)])
    b = np.zeros(n + 1)
    b[-1] = 1.0
    p, *_ = np.linalg.lstsq(A, b, rcond=None)
    if np.any(p < -CLAMP_TOL * max(1.0, np.abs(p).max())):
        # lstsq went astray (badly scaled W); fall back to the SVD vector
        p = vh[-1] / vh[-1].sum()
    p = np.where(p < 0, 0.0, p)
    return p / p.sum()


def evolve(W: np.ndarray, p0: np.ndarray, t: float) -> np.ndarray:
    """Populations at time ``t`` from ``p0``, via the matrix exponential."""
    return expm(np.asarray(W, dtype=float) * t) @ np.asarray(p0, dtype=float)
