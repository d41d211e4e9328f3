"""Uniform frequency grid shared by all Green's functions of a solve."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

# samples per narrowest Lorentzian half width
DEFAULT_POINTS_PER_WIDTH = 10
# grid extends this far past the largest spectral cutoff
DEFAULT_SPAN = 1.5


class ResolutionError(ValueError):
    """The grid spacing does not resolve a filter Lorentzian."""


@dataclass(frozen=True)
class FrequencyGrid:
    """``M`` equally spaced samples on ``[w_min, w_max]``."""

    w_min: float
    w_max: float
    size: int

    def __post_init__(self):
        if self.w_min < 0:
            raise ValueError("grid must start at w >= 0")
        if self.size < 3 or not self.w_max > self.w_min:
            raise ValueError("grid needs at least 3 points on a non-empty interval")

    @property
    def spacing(self) -> float:
        return (self.w_max - self.w_min) / (self.size - 1)

    @cached_property
    def w(self) -> np.ndarray:
        return np.linspace(self.w_min, self.w_max, self.size)

    def integrate(self, f) -> complex:
        """Trapezoidal ``int f(w) dw / (2 pi)``."""
        f = np.asarray(f)
        h = self.spacing
        total = h * (f.sum() - 0.5 * (f[0] + f[-1]))
        return total / (2.0 * math.pi)

    def refined(self, factor: int = 2) -> "FrequencyGrid":
        """Same interval with the spacing divided by ``factor``."""
        return FrequencyGrid(self.w_min, self.w_max, (self.size - 1) * factor + 1)

    def check_resolves(self, bath, points_per_width: int = DEFAULT_POINTS_PER_WIDTH) -> None:
        """Raise :class:`ResolutionError` if the spacing exceeds ``gamma*Omega/points``."""
        if bath.omega <= 0:
            return
        width = bath.gamma * bath.omega
        if self.spacing > width / points_per_width * (1 + 1e-9):
            raise ResolutionError(
                f"grid spacing {self.spacing:.3g} does not resolve bath {bath.label} "
                f"(width {width:.3g}, need <= {width / points_per_width:.3g})"
            )
        if self.w_max < bath.cutoff:
            raise ResolutionError(f"grid ends below the cutoff of bath {bath.label}")

    @classmethod
    def for_baths(
        cls,
        baths,
        points_per_width: int = DEFAULT_POINTS_PER_WIDTH,
        span: float = DEFAULT_SPAN,
    ) -> "FrequencyGrid":
        """Coarsest grid on ``[0, span * max cutoff]`` resolving every filter."""
        w_max = span * max(b.cutoff for b in baths)
        widths = [b.gamma * b.omega for b in baths if b.omega > 0]
        h = min(widths) / points_per_width
        size = int(math.ceil(w_max / h)) + 1
        return cls(0.0, w_max, size)
