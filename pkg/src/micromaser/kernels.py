"""Hot inner loops, written once in scalar numpy so the same source runs
either plain (numpy backend) or compiled with numba @njit (default backend).
Vectorized numpy twins for the iteration-heavy pieces live in backend.py.
"""

import numpy as np

_TINY_PIVOT = 1e-280


def gth_solve_core(sub2, sub1, diag, sup1, x):
    """Stationary distribution by state censoring, subtraction-free.

    Censoring the photon states from the top down folds each two-step
    up-jump into the one-step rate below it (the censored intermediate's
    only surviving exit is the next lower state), after which the
    stationary weights unfold bottom-up as

        x[k] = (x[k-1] (up1[k-1] + up2[k-1]) + x[k-2] up2[k-2]) / down[k].

    Every operation combines nonnegative terms, so each entry is computed
    to O(K eps) relative accuracy no matter how far it sits below the peak
    (a plain linear solve only bounds the absolute error).  Occasional
    rescaling keeps the unnormalized weights inside double range.
    Returns 0 on success, 1 on a vanishing down-rate (nbar < 0 misuse).
    """
    K = diag.shape[0]
    u1 = np.zeros(K - 1)
    for k in range(K - 1):
        u1[k] = sub1[k + 1]
    for k in range(K - 2):
        u1[k] += sub2[k + 2]
    x[0] = 1.0
    for k in range(1, K):
        dnk = sup1[k - 1]
        if not (dnk > 0.0):
            return 1
        acc = x[k - 1] * u1[k - 1]
        if k >= 2:
            acc += x[k - 2] * sub2[k]
        x[k] = acc / dnk
        if x[k] > 1e250:
            inv = 1.0 / x[k]
            for j in range(k + 1):
                x[j] *= inv
        elif 0.0 < x[k] < 1e-250:
            m = 0.0
            for j in range(k + 1):
                if x[j] > m:
                    m = x[j]
            # rescale the prefix up unless that would overflow its peak
            # (m/x[k] < 1e300, arranged to stay inside double range)
            if m < x[k] * 1e300:
                inv = 1.0 / x[k]
                for j in range(k + 1):
                    x[j] *= inv
    s = 0.0
    for j in range(K):
        s += x[j]
    if not (s > 0.0):
        return 1
    for j in range(K):
        x[j] /= s
    return 0


def steady_solve_core(sub2, sub1, diag, sup1, x):
    """Solve A p = 0 with sum(p) = 1 by bordered banded elimination.

    Rows 0..K-2 of the system are the banded generator rows (lower bandwidth
    2, upper bandwidth 1); the last equation is replaced by the normalization
    row of ones with right-hand side 1.  Eliminating left to right keeps the
    upper bandwidth at 1 and only the dense ones-row accumulates updates.
    Returns 0 on success, 1 on a (near-)zero pivot; the caller falls back to
    a pivoted dense solve in that case.
    """
    K = diag.shape[0]
    d = diag.copy()
    a1 = sub1.copy()
    c = sup1
    w = np.ones(K)
    for j in range(K - 1):
        piv = d[j]
        if not (abs(piv) > _TINY_PIVOT):
            return 1
        if j + 1 <= K - 2:
            d[j + 1] -= (a1[j + 1] / piv) * c[j]
        if j + 2 <= K - 2:
            a1[j + 2] -= (sub2[j + 2] / piv) * c[j]
        w[j + 1] -= (w[j] / piv) * c[j]
    if not (abs(w[K - 1]) > _TINY_PIVOT):
        return 1
    x[K - 1] = 1.0 / w[K - 1]
    for i in range(K - 2, -1, -1):
        # eliminated row i reads d[i] x[i] + c[i] x[i+1] = 0
        x[i] = -c[i] * x[i + 1] / d[i]
    return 0


def banded_matvec_core(sub2, sub1, diag, sup1, p, out):
    """out = A p for the lower-2/upper-1 banded rate matrix."""
    K = diag.shape[0]
    for i in range(K):
        acc = diag[i] * p[i]
        if i >= 1:
            acc += sub1[i] * p[i - 1]
        if i >= 2:
            acc += sub2[i] * p[i - 2]
        if i + 1 < K:
            acc += sup1[i] * p[i + 1]
        out[i] = acc


def ode_relax_core(sub2, sub1, diag, sup1, p, tol, max_steps, check):
    """Relax dp/dt = A p to stationarity with the uniformized Euler step.

    The step dt = 1/max|diag| turns I + dt A into a stochastic matrix, so
    the iteration is unconditionally stable and positivity preserving.
    Renormalizes at every check to absorb the small truncation leak.
    Returns the step count on convergence (max-norm residual below tol),
    -1 otherwise.
    """
    K = diag.shape[0]
    dmax = 0.0
    for i in range(K):
        if -diag[i] > dmax:
            dmax = -diag[i]
    if dmax == 0.0:
        return 0  # generator is empty; any distribution is stationary
    dt = 1.0 / dmax
    q = np.empty(K)
    for step in range(1, max_steps + 1):
        for i in range(K):
            acc = diag[i] * p[i]
            if i >= 1:
                acc += sub1[i] * p[i - 1]
            if i >= 2:
                acc += sub2[i] * p[i - 2]
            if i + 1 < K:
                acc += sup1[i] * p[i + 1]
            q[i] = acc
        for i in range(K):
            p[i] += dt * q[i]
        if step % check == 0:
            s = 0.0
            for i in range(K):
                s += p[i]
            for i in range(K):
                p[i] /= s
            r = 0.0
            for i in range(K):
                acc = diag[i] * p[i]
                if i >= 1:
                    acc += sub1[i] * p[i - 1]
                if i >= 2:
                    acc += sub2[i] * p[i - 2]
                if i + 1 < K:
                    acc += sup1[i] * p[i + 1]
                if abs(acc) > r:
                    r = abs(acc)
            if r < tol:
                return step
    return -1


def mc_core(p0, p1, p2, N, nbar, seed, t_end, burn_in, occ):
    """Jump-process trajectory on the photon number, batched time averages.

    Competing exponential clocks: injection at rate N (deposit 0/1/2 photons
    according to the transit kernel at the current n) and thermal birth-death
    at rates nbar (n+1) up, (nbar+1) n down.  Sojourn times after burn_in are
    accumulated into occ[batch, n].  Exactly two uniforms are consumed per
    event, so a fixed seed fixes the whole trajectory.
    Returns 0 on success, 1 if the photon number reached the kernel table
    end (caller re-tabulates larger and reruns).
    """
    np.random.seed(seed)
    n_table = p0.shape[0] - 1
    nbatch = occ.shape[0]
    blen = (t_end - burn_in) / nbatch
    n = 0
    t = 0.0
    while t < t_end:
        if n + 2 > n_table:
            return 1
        r_dn = (nbar + 1.0) * n
        r_up = nbar * (n + 1.0)
        lam = N + r_dn + r_up
        if lam > 0.0:
            t_next = t - np.log(np.random.random()) / lam
        else:
            t_next = t_end
        lo = t if t > burn_in else burn_in
        hi = t_next if t_next < t_end else t_end
        while lo < hi:
            b = int((lo - burn_in) / blen)
            if b >= nbatch:
                b = nbatch - 1
            bend = burn_in + (b + 1) * blen
            seg = (hi if hi < bend else bend) - lo
            occ[b, n] += seg
            lo += seg
        t = t_next
        if t >= t_end or lam <= 0.0:
            break
        z = np.random.random() * lam
        if z < N * p0[n]:
            pass
        elif z < N * (p0[n] + p1[n]):
            n += 1
        elif z < N:
            n += 2
        elif z < N + r_dn:
            n -= 1
        else:
            n += 1
    return 0
