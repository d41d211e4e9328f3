"""Tunnelling and exchange-correlation self-energies on a frequency grid.

Bosonic Keldysh conventions: ``Sigma^<(w) = -i n(w) K(w)`` and
``Sigma^>(w) = -i (1 + n(w)) K(w)`` so that ``i Sigma^<`` and ``i Sigma^>``
are non-negative and ``Sigma^> - Sigma^< = Sigma^r - Sigma^a = -i K``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from qfridge.baths import BathSpec, bose_occupation, spectral_density, thermal_weight_limit
from qfridge.negf.grid import FrequencyGrid
from qfridge.negf.hilbert import principal_value

# relative height of time-domain tails tolerated at the edge of the FFT window
ALIAS_TOL = 1e-6


class AliasingError(ValueError):
    """Time-domain Green's functions have not decayed inside the FFT window."""


@dataclass
class SelfEnergy:
    retarded: np.ndarray
    lesser: np.ndarray
    greater: np.ndarray

    @property
    def advanced(self) -> np.ndarray:
        return self.retarded.conj()

    def __add__(self, other: "SelfEnergy") -> "SelfEnergy":
        return SelfEnergy(
            self.retarded + other.retarded,
            self.lesser + other.lesser,
            self.greater + other.greater,
        )


def tunneling_self_energy(bath: BathSpec, grid: FrequencyGrid) -> SelfEnergy:
    """Self-energy of a resonator coupled to one filtered bath.

    The retarded part is ``Lambda(w) - i K(w)/2`` where ``Lambda`` is the
    Kramers-Kronig partner ``(1/2pi) P int K(w') / (w - w') dw'``.
    """
    grid.check_resolves(bath)
    w = grid.w
    K = spectral_density(w, bath)
    pos = w > 0
    n = np.zeros_like(w)
    n[pos] = bose_occupation(w[pos], bath.temperature)
    kn = K * n
    kn1 = K * (1.0 + n)
    # K n and K (1 + n) stay finite at w = 0
    zero = ~pos
    kn[zero] = kn1[zero] = thermal_weight_limit(bath) if bath.temperature > 0 else 0.0

    support = int(np.count_nonzero(w < bath.cutoff))
    lam = principal_value(K, grid.spacing, support=support) / (2.0 * math.pi)
    return SelfEnergy(lam - 0.5j * K, -1j * kn, -1j * kn1)


def _to_time(G: np.ndarray, L: int, h: float):
    """``g(t_n)`` and ``g(-t_n)`` on the ``L``-point FFT time mesh.

    ``g(t) = int dw/2pi e^{-i w t} G(w)`` with ``t_n = 2 pi n / (L h)``.
    """
    pad = np.zeros(L, dtype=complex)
    pad[: G.size] = G
    scale = h / (2.0 * math.pi)
    forward = scale * np.fft.fft(pad)
    backward = scale * L * np.fft.ifft(pad)
    return forward, backward


def _check_tails(g: np.ndarray, name: str, tol: float = ALIAS_TOL) -> None:
    L = g.size
    mag = np.abs(g)
    peak = mag.max()
    if peak == 0.0:
        return
    edge = max(1, L // 40)
    mid = L // 2
    tail = mag[mid - edge : mid + edge].max()
    if tail > tol * peak:
        raise AliasingError(
            f"{name}: time-domain tail {tail / peak:.2e} of peak at the window edge "
            f"exceeds {tol:.0e}; refine the frequency grid"
        )


def xc_self_energy(G_j, G_k, delta_z: float, grid: FrequencyGrid, check_tails: bool = True):
    """Exchange-correlation bubble of resonator ``j`` due to resonator ``k``.

    ``G_j`` and ``G_k`` are ``(lesser, greater)`` pairs.  In time,

        Sigma^<(t) = -dz^2 G_j^<(t) G_k^<(t) G_k^>(-t),

    and ``<`` and ``>`` are swapped for the greater component.  The frequency
    samples are zero-padded to ``2M`` so the FFT products reproduce the linear
    double convolution without wrap-around.  Returns ``(Sigma^<, Sigma^>)``.
    """
    jl, jg = (np.asarray(a, dtype=complex) for a in G_j)
    kl, kg = (np.asarray(a, dtype=complex) for a in G_k)
    M = grid.size
    if delta_z == 0.0:
        z = np.zeros(M, dtype=complex)
        return z, z.copy()
    L = 2 * M
    h = grid.spacing
    jl_t, _ = _to_time(jl, L, h)
    jg_t, _ = _to_time(jg, L, h)
    kl_t, kl_mt = _to_time(kl, L, h)
    kg_t, kg_mt = _to_time(kg, L, h)
    if check_tails:
        for name, g in (("G_j^<", jl_t), ("G_j^>", jg_t), ("G_k^<", kl_t), ("G_k^>", kg_t)):
            _check_tails(g, name)
    pref = -(delta_z**2)
    sl_t = pref * jl_t * kl_t * kg_mt
    sg_t = pref * jg_t * kg_t * kl_mt
    # back to frequency: int dt e^{i w t}, dt = 2 pi / (L h)
    back = 2.0 * math.pi / h
    sl = back * np.fft.ifft(sl_t)[:M]
    sg = back * np.fft.ifft(sg_t)[:M]
    return sl, sg
