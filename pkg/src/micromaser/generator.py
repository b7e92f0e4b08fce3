"""Coarse-grained rate matrix over truncated photon space.

The generator A acts on the photon distribution as dP/dt = A P, with time in
photon lifetimes.  Atomic gain enters through the transit kernel (columns
feed 0, 1 or 2 steps upward), cavity loss through the usual thermal
birth-death rates.  Transitions that would leave the box 0..n_max are
dropped, so the last two columns are slightly lossy; the adaptive truncation
in the solver keeps the occupancy there negligible.
"""

from dataclasses import dataclass

import numpy as np

from .gain import EmissionKernel, build_kernel
from .model import ConfigurationError, ModelSpec


@dataclass
class Bands:
    """Row-aligned bands of a lower-2 / upper-1 banded matrix.

    sub2[i] = A[i, i-2], sub1[i] = A[i, i-1], diag[i] = A[i, i],
    sup1[i] = A[i, i+1]; entries outside the matrix are kept at zero.
    """

    sub2: np.ndarray
    sub1: np.ndarray
    diag: np.ndarray
    sup1: np.ndarray

    @classmethod
    def zeros(cls, size: int) -> "Bands":
        return cls(np.zeros(size), np.zeros(size), np.zeros(size), np.zeros(size))

    def __add__(self, other: "Bands") -> "Bands":
        return Bands(self.sub2 + other.sub2, self.sub1 + other.sub1,
                     self.diag + other.diag, self.sup1 + other.sup1)


@dataclass(frozen=True)
class Generator:
    """Assembled rate matrix with its defining spec."""

    spec: ModelSpec
    n_max: int
    bands: Bands

    def matvec(self, p: np.ndarray) -> np.ndarray:
        """A @ p using the band structure."""
        b = self.bands
        y = b.diag * p
        y[1:] += b.sub1[1:] * p[:-1]
        y[2:] += b.sub2[2:] * p[:-2]
        y[:-1] += b.sup1[:-1] * p[1:]
        return y

    def to_dense(self) -> np.ndarray:
        b = self.bands
        size = self.n_max + 1
        a = np.zeros((size, size))
        idx = np.arange(size)
        a[idx, idx] = b.diag
        a[idx[1:], idx[1:] - 1] = b.sub1[1:]
        a[idx[2:], idx[2:] - 2] = b.sub2[2:]
        a[idx[:-1], idx[:-1] + 1] = b.sup1[:-1]
        return a

    def column_sums(self) -> np.ndarray:
        b = self.bands
        s = b.diag.copy()
        s[:-1] += b.sub1[1:]
        s[:-2] += b.sub2[2:]
        s[1:] += b.sup1[:-1]
        return s

    def max_abs_entry(self) -> float:
        b = self.bands
        return max(np.abs(b.sub2).max(), np.abs(b.sub1).max(),
                   np.abs(b.diag).max(), np.abs(b.sup1).max())


def gain_rates(kernel: EmissionKernel, N: float) -> Bands:
    """Band contribution of the pump: column n loses N(1 - p0(n)) and feeds
    n+1, n+2 with N p1(n), N p2(n)."""
    size = kernel.n_max + 1
    b = Bands.zeros(size)
    b.diag[:] = N * (kernel.p0 - 1.0)
    b.sub1[1:] = N * kernel.p1[:-1]
    b.sub2[2:] = N * kernel.p2[:-2]
    return b


def loss_rates(nbar_th: float, n_max: int) -> Bands:
    """Thermal birth-death contribution: down rate (nbar+1) n, up rate
    nbar (n+1), in units of the photon decay rate."""
    if nbar_th < 0.0:
        raise ValueError(f"nbar_th must be >= 0, got {nbar_th}")
    n = np.arange(n_max + 1, dtype=float)
    b = Bands.zeros(n_max + 1)
    b.diag[:] = -(n + nbar_th + 2.0 * n * nbar_th)
    b.sup1[:-1] = (nbar_th + 1.0) * n[1:]
    b.sub1[1:] = nbar_th * n[1:]  # up-jump into n from n-1 carries weight nbar*n
    return b


def assemble(spec: ModelSpec, n_max: int) -> Generator:
    """Gain plus loss rate matrix for a model at truncation n_max."""
    if n_max < 4:
        raise ConfigurationError(f"n_max must be >= 4, got {n_max}")
    kernel = build_kernel(spec, n_max)
    bands = gain_rates(kernel, spec.N) + loss_rates(spec.nbar_th, n_max)
    return Generator(spec=spec, n_max=n_max, bands=bands)
