"""Independent ground-truth routes for validating the linear-system solver.

Three cross-checks that share no code path with solve_truncated:
the product-form stationary distribution of the one-atom model (detailed
balance holds for its pure birth-death chain), explicit time relaxation of
the rate equation, and a seeded Monte Carlo simulation of the physical
injection process.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .backend import Backend, default_backend
from .gain import build_kernel
from .generator import Generator
from .model import ONE_ATOM, ConfigurationError, ModelSpec
from .steady import Moments, NonConvergenceError, PhotonDistribution


def thermal_distribution(nbar_th: float, n_max: int) -> PhotonDistribution:
    """Bose-Einstein occupancy truncated to 0..n_max."""
    if nbar_th == 0.0:
        p = np.zeros(n_max + 1)
        p[0] = 1.0
        return PhotonDistribution(p=p, n_max=n_max)
    q = nbar_th / (1.0 + nbar_th)
    p = q ** np.arange(n_max + 1)
    return PhotonDistribution(p=p / p.sum(), n_max=n_max)


def one_atom_detailed_balance(spec: ModelSpec, n_max: int) -> PhotonDistribution:
    """Product-form steady state of the one-atom maser.

    Balancing the up-flux N sin^2(g tau sqrt(n)) + nbar n from n-1 against
    the down-flux (nbar+1) n gives P_n/P_{n-1} in closed form; accumulated
    in log space so deep trapping-state cutoffs cannot overflow.
    """
    if spec.variant != ONE_ATOM:
        raise ConfigurationError("detailed-balance form only holds for the one-atom model")
    n = np.arange(1, n_max + 1, dtype=float)
    up = spec.nbar_th * n + spec.N * np.sin(spec.gtau * np.sqrt(n)) ** 2
    down = (spec.nbar_th + 1.0) * n
    with np.errstate(divide="ignore"):
        log_ratio = np.log(up) - np.log(down)  # -inf above a trapping cutoff
    log_p = np.concatenate(([0.0], np.cumsum(log_ratio)))
    log_p -= log_p.max()
    p = np.exp(log_p)
    return PhotonDistribution(p=p / p.sum(), n_max=n_max)


def ode_relax(gen: Generator, p0: PhotonDistribution | None = None,
              tol: float = 1e-10, max_steps: int = 20_000_000,
              backend: Backend | None = None) -> PhotonDistribution:
    """Integrate dp/dt = A p to stationarity (uniformized explicit stepping)."""
    be = backend or default_backend()
    if p0 is None:
        p0 = thermal_distribution(gen.spec.nbar_th, gen.n_max)
    if p0.p.size != gen.n_max + 1:
        raise ValueError("initial distribution size does not match generator")
    p = p0.p.copy()
    b = gen.bands
    steps = be.ode_relax(b.sub2, b.sub1, b.diag, b.sup1, p, tol, max_steps, 500)
    if steps < 0:
        raise NonConvergenceError(f"relaxation residual still above {tol} "
                                  f"after {max_steps} steps")
    return PhotonDistribution.from_raw(p)


@dataclass(frozen=True)
class TrajectoryConfig:
    spec: ModelSpec
    seed: int = 0
    t_end: float = 5.0e4        # photon lifetimes
    burn_in: float = field(default=0.0)
    sample_stride: float = 0.0  # batch window for error bars; 0 = auto

    def __post_init__(self):
        if self.burn_in == 0.0:
            object.__setattr__(self, "burn_in", 0.04 * self.t_end)
        if self.sample_stride == 0.0:
            object.__setattr__(self, "sample_stride",
                               (self.t_end - self.burn_in) / 25.0)
        if not (self.t_end > self.burn_in > 0.0):
            raise ConfigurationError("need t_end > burn_in > 0")
        if not (self.sample_stride > 0.0):
            raise ConfigurationError("sample_stride must be > 0")


@dataclass(frozen=True)
class MonteCarloResult:
    dist: PhotonDistribution
    p_stderr: np.ndarray
    mean_n: float
    v: float
    mean_stderr: float
    v_stderr: float
    n_batches: int
    n_table: int

    def moments(self) -> Moments:
        return Moments(mean_n=self.mean_n, v=self.v, n_max_used=self.n_table,
                       residual=math.nan, tail_mass=0.0)


def _batch_moments(row: np.ndarray) -> tuple[float, float]:
    s = row.sum()
    if s <= 0.0:
        return 0.0, 0.0
    n = np.arange(row.size, dtype=float)
    mean = float(n @ row) / s
    var = float((n * n) @ row) / s - mean * mean
    v = math.sqrt(max(var, 0.0) / mean) if mean > 0.0 else 0.0
    return mean, v


def monte_carlo(config: TrajectoryConfig,
                backend: Backend | None = None) -> MonteCarloResult:
    """Seeded trajectory estimate of the stationary photon statistics.

    Injection transits are instantaneous kicks (the flight time is far below
    the photon lifetime), so the state is just the photon number and the
    diagonal dynamics is exact.  Standard errors come from batch means over
    sample_stride windows.  Fixed seed implies bit-identical output.
    """
    be = backend or default_backend()
    spec = config.spec
    span = config.t_end - config.burn_in
    nbatch = int(round(span / config.sample_stride))
    nbatch = max(4, min(nbatch, 512))
    n_table = max(64, int(math.ceil(4.0 * spec.N)))
    while True:
        kernel = build_kernel(spec, n_table)
        occ = np.zeros((nbatch, n_table + 1))
        status = be.mc_run(kernel.p0, kernel.p1, kernel.p2, spec.N,
                           spec.nbar_th, config.seed, config.t_end,
                           config.burn_in, occ)
        if status == 0:
            break
        n_table *= 2  # trajectory escaped the table; redo with more room
        if n_table > 10_000_000:
            raise NonConvergenceError("photon number diverged in Monte Carlo")
    totals = occ.sum(axis=0)
    dist = PhotonDistribution.from_raw(totals)
    blen = span / nbatch
    rows = occ / blen
    p_stderr = rows.std(axis=0, ddof=1) / math.sqrt(nbatch)
    per_batch = np.array([_batch_moments(row) for row in occ])
    mean_n, v = _batch_moments(totals)
    mean_stderr = float(per_batch[:, 0].std(ddof=1)) / math.sqrt(nbatch)
    v_stderr = float(per_batch[:, 1].std(ddof=1)) / math.sqrt(nbatch)
    return MonteCarloResult(dist=dist, p_stderr=p_stderr, mean_n=mean_n, v=v,
                            mean_stderr=mean_stderr, v_stderr=v_stderr,
                            n_batches=nbatch, n_table=n_table)
