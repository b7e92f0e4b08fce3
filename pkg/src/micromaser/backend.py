"""Backend selection: numba-compiled hot loops with a pure-numpy fallback.

The environment variable MICROMASER_BACKEND picks the default ("numba" or
"numpy"); unset, numba is used when importable.  Both backends can coexist
in one process (see benchmarks/), and the Monte Carlo trajectory is
bit-identical across them because numba reproduces the numpy legacy
MT19937 stream.
"""

import os
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import kernels

ENV_VAR = "MICROMASER_BACKEND"


def _numba_available() -> bool:
    try:
        import numba  # noqa: F401
    except ImportError:
        return False
    return True


@dataclass(frozen=True)
class Backend:
    name: str
    gth_solve: Callable     # (sub2, sub1, diag, sup1, x) -> status
    steady_solve: Callable  # (sub2, sub1, diag, sup1, x) -> status
    matvec: Callable        # (sub2, sub1, diag, sup1, p, out) -> None
    ode_relax: Callable     # (sub2, sub1, diag, sup1, p, tol, max_steps, check) -> steps
    mc_run: Callable        # (p0, p1, p2, N, nbar, seed, t_end, burn_in, occ) -> status


def _matvec_numpy(sub2, sub1, diag, sup1, p, out):
    out[:] = diag * p
    out[1:] += sub1[1:] * p[:-1]
    out[2:] += sub2[2:] * p[:-2]
    out[:-1] += sup1[:-1] * p[1:]


def _ode_relax_numpy(sub2, sub1, diag, sup1, p, tol, max_steps, check):
    # slicing twin of kernels.ode_relax_core, same renormalization schedule
    dmax = np.max(-diag)
    if dmax == 0.0:
        return 0
    dt = 1.0 / dmax
    q = np.empty_like(p)
    for step in range(1, max_steps + 1):
        _matvec_numpy(sub2, sub1, diag, sup1, p, q)
        p += dt * q
        if step % check == 0:
            p /= p.sum()
            _matvec_numpy(sub2, sub1, diag, sup1, p, q)
            if np.abs(q).max() < tol:
                return step
    return -1


def _mc_run_numpy(p0, p1, p2, N, nbar, seed, t_end, burn_in, occ):
    # kernels.mc_core seeds the global legacy RandomState; keep callers clean
    state = np.random.get_state()
    try:
        return kernels.mc_core(p0, p1, p2, N, nbar, seed, t_end, burn_in, occ)
    finally:
        np.random.set_state(state)


def _build_numpy() -> Backend:
    return Backend(
        name="numpy",
        gth_solve=kernels.gth_solve_core,
        steady_solve=kernels.steady_solve_core,
        matvec=_matvec_numpy,
        ode_relax=_ode_relax_numpy,
        mc_run=_mc_run_numpy,
    )


def _build_numba() -> Backend:
    from numba import njit

    jit = njit(cache=True)
    return Backend(
        name="numba",
        gth_solve=jit(kernels.gth_solve_core),
        steady_solve=jit(kernels.steady_solve_core),
        matvec=jit(kernels.banded_matvec_core),
        ode_relax=jit(kernels.ode_relax_core),
        mc_run=jit(kernels.mc_core),
    )


_BACKENDS: dict = {}


def make_backend(name: str) -> Backend:
    """Build (and cache) a backend by name."""
    if name not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {name!r}")
    if name == "numba" and not _numba_available():
        raise RuntimeError("numba backend requested but numba is not importable")
    if name not in _BACKENDS:
        _BACKENDS[name] = _build_numba() if name == "numba" else _build_numpy()
    return _BACKENDS[name]


def default_backend() -> Backend:
    name = os.environ.get(ENV_VAR, "").strip().lower()
    if not name:
        name = "numba" if _numba_available() else "numpy"
    return make_backend(name)
