"""Excitation sectors of the pair-field interaction.

A fully excited atom pair with k photons lives in the three-dimensional
sector m = k + 2 spanned by {|1, m-2>, |0, m-1>, |-1, m>}, where the first
label is the collective (J = 1) inversion.  The interaction matrix in this
basis, in units of g, is

        [ -delta      sqrt(2(m-1))   0          ]
        [ sqrt(2(m-1))  0            sqrt(2m)   ]
        [ 0            sqrt(2m)     -delta      ]

with delta the one-photon detuning (zero on resonance).  On resonance the
eigensystem is available in closed form; with detuning we diagonalize
numerically.
"""

import math
from dataclasses import dataclass

import numpy as np

MIN_SECTOR = 2


class InvalidSectorError(ValueError):
    """Sector index below the smallest three-dimensional manifold."""


@dataclass(frozen=True)
class SectorHamiltonian:
    m: int
    delta: float
    matrix: np.ndarray  # 3x3 real symmetric, units of g


@dataclass(frozen=True)
class EigenSystem:
    lambdas: np.ndarray  # 3 eigenvalues, units of g
    vectors: np.ndarray  # orthonormal eigenvectors as columns


def build_sector(m: int, delta: float = 0.0) -> SectorHamiltonian:
    """Interaction matrix of sector m (m >= 2) with one-photon detuning."""
    if m < MIN_SECTOR:
        raise InvalidSectorError(f"sector m={m} has no 3-dimensional manifold")
    if delta < 0.0:
        raise ValueError(f"delta must be >= 0, got {delta}")
    c_up = math.sqrt(2.0 * (m - 1))
    c_dn = math.sqrt(2.0 * m)
    h = np.array([[-delta, c_up, 0.0],
                  [c_up, 0.0, c_dn],
                  [0.0, c_dn, -delta]])
    return SectorHamiltonian(m=m, delta=delta, matrix=h)


def eigensystem_resonant(m: int) -> EigenSystem:
    """Closed-form eigensystem of the resonant sector m.

    Eigenvalues are (0, +r, -r) with r = sqrt(2(2m-1)); the zero-eigenvalue
    state has no weight on the middle (singly de-excited) level.
    """
    if m < MIN_SECTOR:
        raise InvalidSectorError(f"sector m={m} has no 3-dimensional manifold")
    r = math.sqrt(2.0 * (2 * m - 1))
    x1 = math.sqrt(m / (2.0 * m - 1))
    z1 = -math.sqrt((m - 1) / (2.0 * m - 1))
    xo = -math.sqrt((m - 1) / (4.0 * m - 2))
    zo = -math.sqrt(m / (4.0 * m - 2))
    inv_sqrt2 = 1.0 / math.sqrt(2.0)
    lambdas = np.array([0.0, r, -r])
    vectors = np.array([[x1, xo, xo],
                        [0.0, -inv_sqrt2, inv_sqrt2],
                        [z1, zo, zo]])
    return EigenSystem(lambdas=lambdas, vectors=vectors)


def eigensystem_general(h: SectorHamiltonian) -> EigenSystem:
    """Numerical eigensystem of a (possibly detuned) sector matrix."""
    lambdas, vectors = np.linalg.eigh(h.matrix)
    return EigenSystem(lambdas=lambdas, vectors=vectors)
