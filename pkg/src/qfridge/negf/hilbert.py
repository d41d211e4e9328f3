"""Principal-value Hilbert transform of sampled functions."""

from __future__ import annotations

import numpy as np
from scipy.signal import fftconvolve


def _derivative(f: np.ndarray, h: float) -> np.ndarray:
    # five-point stencil in the interior, second order at the two outer rows
    d = np.gradient(f, h, edge_order=2)
    if f.size >= 5:
        d[2:-2] = (f[:-4] - 8 * f[1:-3] + 8 * f[3:-1] - f[4:]) / (12 * h)
    return d


def principal_value(f, h: float, support: int | None = None) -> np.ndarray:
    """``P int f(x') / (x - x') dx'`` at every sample of a uniform grid.

    ``f`` is integrated over its first ``support`` samples (default: all),
    i.e. over ``[x_0, x_{support-1}]``, and the transform is returned on the
    whole grid.  The singular part is subtracted analytically:

        P int f(x')/(x - x') dx' = int (f(x') - f(x)) / (x - x') dx'
                                   + f(x) ln((x - a) / (b - x)),

    and the smooth remainder is summed with trapezoid weights through an FFT
    convolution.  At the singular sample the remainder takes its limit
    ``-f'(x)``.  Outside ``[a, b]`` the nearest endpoint value is subtracted
    instead.  A non-zero value at an endpoint gives a genuine logarithmic
    divergence there; the endpoint sample is regularised with a distance of
    half a grid step.
    """
    f = np.asarray(f, dtype=float)
    n = f.size
    m = n if support is None else int(support)
    if not 2 <= m <= n:
        raise ValueError("support must cover at least two samples")
    x = np.arange(n) * h
    a, b = 0.0, (m - 1) * h

    fs = f[:m]
    wts = np.full(m, h)
    wts[0] = wts[-1] = 0.5 * h

    # subtracted value: f itself inside, endpoint value outside
    ref = np.empty(n)
    ref[:m] = fs
    ref[m:] = fs[-1]

    k = np.arange(-(m - 1), n)
    kernel = np.zeros(k.size)
    nz = k != 0
    kernel[nz] = 1.0 / (k[nz] * h)
    # full convolution index i + (m - 1) pairs output x_i with kernel 1/(x_i - x_j)
    s_f = fftconvolve(wts * fs, kernel)[m - 1 : m - 1 + n]
    s_1 = fftconvolve(wts, kernel)[m - 1 : m - 1 + n]
    out = s_f - ref * s_1

    # singular sample inside the support
    out[:m] -= wts * _derivative(fs, h)

    dist_a = np.maximum(x - a, 0.5 * h)
    dist_b = np.abs(b - x)
    dist_b = np.where(dist_b < 0.5 * h, 0.5 * h, dist_b)
    logs = np.log(dist_a / dist_b)
    # f(a) * ln(x - a) is 0 when f(a) = 0 even at x = a
    with np.errstate(invalid="ignore"):
        term = np.where(ref == 0.0, 0.0, ref * logs)
    return out + term
