"""Per-transit emission kernels.

For an initial photon number k the kernel gives the probabilities p0, p1, p2
that one injection event deposits 0, 1 or 2 photons.  The production path
evolves the initial basis vector of sector m = k + 2 with the dressed-state
propagator U(tau) = sum_j exp(-i lambda_j g tau) v_j v_j^T and reads off the
squared amplitudes; this is exact for any detuning.  A resonant closed form
(dc terms plus interference at the first and second harmonic of the dressed
splitting) is kept as an independent cross-check, and the familiar
sin^2(g tau sqrt(k+1)) single-atom transit probability covers the one-atom
baseline.
"""

from dataclasses import dataclass

import numpy as np

from .model import ONE_ATOM, TWO_PHOTON, ModelSpec
from .sector import build_sector, eigensystem_general


@dataclass(frozen=True)
class EmissionKernel:
    """Tabulated transit probabilities for initial photon numbers 0..n_max."""

    model: str
    gtau: float
    delta: float
    n_max: int
    p0: np.ndarray
    p1: np.ndarray
    p2: np.ndarray

    def deposit_mean(self) -> np.ndarray:
        """Expected photons deposited per event at each initial n."""
        return self.p1 + 2.0 * self.p2


def kernel_unitary(k: int, gtau: float, delta: float = 0.0):
    """Transit probabilities (p0, p1, p2) from the dressed-state propagator."""
    if k < 0:
        raise ValueError(f"photon number must be >= 0, got {k}")
    if gtau == 0.0:
        return 1.0, 0.0, 0.0  # U is the identity; keep it exact
    eig = eigensystem_general(build_sector(k + 2, delta))
    phases = np.exp(-1j * eig.lambdas * gtau)
    # amplitudes <i|U|initial>, the initial state being basis vector 0
    amp = eig.vectors @ (phases * eig.vectors[0, :])
    p = np.minimum(np.abs(amp) ** 2, 1.0)
    return float(p[0]), float(p[1]), float(p[2])


def kernel_closed_form(k, gtau):
    """Resonant transit probabilities from the analytic dressed amplitudes.

    The dc prefactor of the stay probability must be (k+2)/(2k+3), the
    squared zero-mode amplitude; probability conservation at gtau = 0 pins
    it (the sum of the dc weights telescopes to 1).
    """
    k = np.asarray(k, dtype=float)
    s = k + 2.0  # all three outcomes of initial k interfere in sector k+2
    r = np.sqrt(2.0 * (2.0 * s - 1.0))
    x1 = np.sqrt(s / (2.0 * s - 1.0))
    xo = -np.sqrt((s - 1.0) / (4.0 * s - 2.0))  # shared by both split modes
    c1 = np.cos(r * gtau)
    c2 = np.cos(2.0 * r * gtau)

    n = k
    p0 = ((n + 2.0) / (2.0 * n + 3.0) * x1**2
          + (n + 1.0) / (4.0 * n + 6.0) * 2.0 * xo**2
          - 2.0 * np.sqrt((n + 2.0) * (n + 1.0))
          / np.sqrt((2.0 * n + 3.0) * (4.0 * n + 6.0)) * 2.0 * x1 * xo * c1
          + 2.0 * (n + 1.0) / (4.0 * n + 6.0) * xo**2 * c2)

    n = k + 1.0
    p1 = xo**2 - xo**2 * c2

    n = k + 2.0
    p2 = ((n - 1.0) / (2.0 * n - 1.0) * x1**2
          + n / (4.0 * n - 2.0) * 2.0 * xo**2
          + np.sqrt(2.0 * n * (n - 1.0)) / (2.0 * n - 1.0) * 2.0 * x1 * xo * c1
          + 2.0 * n / (4.0 * n - 2.0) * xo**2 * c2)

    if p0.ndim == 0:
        return float(p0), float(p1), float(p2)
    return p0, p1, p2


def kernel_one_atom(k, gtau):
    """Single-atom transit: p1 = sin^2(g tau sqrt(k+1))."""
    k = np.asarray(k, dtype=float)
    p1 = np.sin(gtau * np.sqrt(k + 1.0)) ** 2
    p0 = 1.0 - p1
    if p0.ndim == 0:
        return float(p0), float(p1)
    return p0, p1


def _pair_table(n_max: int, gtau: float, delta: float) -> tuple:
    """Vectorized kernel_unitary over k = 0..n_max (batched 3x3 eigh)."""
    if gtau == 0.0:
        z = np.zeros(n_max + 1)
        return np.ones(n_max + 1), z, z.copy()
    m = np.arange(n_max + 1) + 2
    h = np.zeros((n_max + 1, 3, 3))
    h[:, 0, 0] = -delta
    h[:, 2, 2] = -delta
    c_up = np.sqrt(2.0 * (m - 1))
    c_dn = np.sqrt(2.0 * m)
    h[:, 0, 1] = c_up
    h[:, 1, 0] = c_up
    h[:, 1, 2] = c_dn
    h[:, 2, 1] = c_dn
    lam, vec = np.linalg.eigh(h)
    phases = np.exp(-1j * lam * gtau)
    amp = np.einsum("kij,kj,kj->ki", vec, phases, vec[:, 0, :])
    p = np.minimum(np.abs(amp) ** 2, 1.0)
    return p[:, 0], p[:, 1], p[:, 2]


def build_kernel(spec: ModelSpec, n_max: int) -> EmissionKernel:
    """Tabulate the transit kernel of a model up to initial photon n_max."""
    if n_max < 1:
        raise ValueError(f"n_max must be >= 1, got {n_max}")
    if spec.variant == ONE_ATOM:
        p0, p1 = kernel_one_atom(np.arange(n_max + 1), spec.gtau)
        p2 = np.zeros(n_max + 1)
    else:
        delta = spec.delta if spec.variant == TWO_PHOTON else 0.0
        p0, p1, p2 = _pair_table(n_max, spec.gtau, delta)
    return EmissionKernel(model=spec.variant, gtau=spec.gtau, delta=spec.delta,
                          n_max=n_max, p0=p0, p1=p1, p2=p2)
