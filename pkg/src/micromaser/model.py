"""Model specification shared by the kernel, generator and solver layers.

All rates are expressed in units of the cavity photon decay rate, i.e. one
time unit is one photon lifetime.  Energies (detuning) are in units of the
single-atom coupling g, and the interaction time enters only through the
dimensionless product g*tau.
"""

import math
from dataclasses import dataclass

DICKE_PAIR = "dicke-pair"
ONE_ATOM = "one-atom"
TWO_PHOTON = "two-photon-detuned"

VARIANTS = (DICKE_PAIR, ONE_ATOM, TWO_PHOTON)


class ConfigurationError(ValueError):
    """Raised for a ModelSpec whose fields are inconsistent."""


@dataclass(frozen=True)
class ModelSpec:
    """One maser configuration.

    variant : which pump model ("dicke-pair", "one-atom", "two-photon-detuned")
    N       : injection events per photon lifetime (pairs for dicke-pair /
              two-photon, atoms for one-atom)
    nbar_th : thermal photon number of the cavity reservoir
    gtau    : dimensionless interaction time g*tau
    delta   : one-photon detuning in units of g (two-photon model only)
    """

    variant: str
    N: float
    nbar_th: float = 0.0
    gtau: float = 0.0
    delta: float = 0.0

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ConfigurationError(f"unknown variant {self.variant!r}")
        # N = 0 is allowed so the pure-thermal limit stays expressible.
        if not (self.N >= 0.0) or not math.isfinite(self.N):
            raise ConfigurationError(f"pump rate N must be >= 0, got {self.N}")
        if not (self.nbar_th >= 0.0):
            raise ConfigurationError(f"nbar_th must be >= 0, got {self.nbar_th}")
        if not (self.gtau >= 0.0):
            raise ConfigurationError(f"gtau must be >= 0, got {self.gtau}")
        if not (self.delta >= 0.0):
            raise ConfigurationError(f"delta must be >= 0, got {self.delta}")
        if self.delta > 0.0 and self.variant != TWO_PHOTON:
            raise ConfigurationError(
                f"nonzero detuning requires the {TWO_PHOTON!r} variant"
            )

    @property
    def D(self) -> float:
        """Pump parameter sqrt(N)*g*tau (derived, never stored)."""
        return math.sqrt(self.N) * self.gtau

    def with_pump_parameter(self, D: float) -> "ModelSpec":
        """Return a copy whose gtau realizes the requested pump parameter."""
        if self.N <= 0.0:
            raise ConfigurationError("pump parameter needs N > 0")
        return ModelSpec(self.variant, self.N, self.nbar_th,
                         D / math.sqrt(self.N), self.delta)
