"""Hot numeric loops, JIT compiled with numba when available.

Each kernel is written once in numpy-compatible form.  At import time
the module selects between the plain function and its ``numba.njit``
compilation; set ``HECONET_DISABLE_NUMBA=1`` (or uninstall numba) to
force the pure-numpy path.  The undecorated functions stay reachable
under a ``_py`` suffix and the compiled ones under ``_jit`` so the two
paths can be compared directly (see ``benchmarks/bench_kernels.py``).
"""

import os
import warnings

import numpy as np

_DISABLE = os.environ.get("HECONET_DISABLE_NUMBA", "").strip().lower() not in ("", "0", "false", "no")

USING_NUMBA = False
if not _DISABLE:
    try:
        import numba

        USING_NUMBA = True
    except ImportError:  # pragma: no cover - depends on environment
        warnings.warn("numba is not importable; falling back to pure-numpy kernels",
                      RuntimeWarning, stacklevel=2)

# Simplex iteration outcomes.
OPTIMAL = 0
UNBOUNDED = 1
BREAKDOWN = 2
ITERATION_LIMIT = 3


def simplex_iterate_py(a, b, c, basis, in_basis, binv, pivot_tol, rc_tol,
                       tie_tol, refactor_every, max_iter):
    """Revised simplex iterations on a standard-form problem.

    min c'w  s.t.  a w = b, w >= 0, starting from the feasible basis
    ``basis`` with inverse ``binv``.  ``basis``, ``in_basis`` and
    ``binv`` are updated in place.  Entering variable: smallest index
    with reduced cost < -rc_tol (Bland).  Leaving variable: minimum
    ratio, ties within tie_tol resolved to the smallest basic variable
    index (Bland).  The basis inverse is maintained by eta updates and
    refactorized from scratch every ``refactor_every`` pivots.

    Returns (status, iterations).
    """
    m, n = a.shape
    iters = 0
    since_refactor = 0
    while iters < max_iter:
        cb = np.empty(m)
        for i in range(m):
            cb[i] = c[basis[i]]
        y = np.dot(cb, binv)
        reduced = c - np.dot(y, a)
        eligible = np.where(np.logical_and(reduced < -rc_tol, ~in_basis))[0]
        if eligible.size == 0:
            return OPTIMAL, iters
        entering = eligible[0]

        acol = np.ascontiguousarray(a[:, entering])
        d = np.dot(binv, acol)
        xb = np.dot(binv, b)

        best = np.inf
        for i in range(m):
            if d[i] > pivot_tol:
                ratio = xb[i] / d[i]
                if ratio < 0.0:
                    ratio = 0.0
                if ratio < best:
                    best = ratio
        if not np.isfinite(best):
            return UNBOUNDED, iters
        leave = -1
        leave_var = n
        for i in range(m):
            if d[i] > pivot_tol:
                ratio = xb[i] / d[i]
                if ratio < 0.0:
                    ratio = 0.0
                if ratio <= best + tie_tol and basis[i] < leave_var:
                    leave = i
                    leave_var = basis[i]
        pivot = d[leave]
        if abs(pivot) <= pivot_tol:
            return BREAKDOWN, iters

        binv[leave, :] *= 1.0 / pivot
        for i in range(m):
            if i != leave and d[i] != 0.0:
                binv[i, :] -= d[i] * binv[leave, :]
        in_basis[basis[leave]] = False
        in_basis[entering] = True
        basis[leave] = entering

        iters += 1
        since_refactor += 1
        if since_refactor >= refactor_every:
            bm = np.empty((m, m))
            for i in range(m):
                bm[:, i] = a[:, basis[i]]
            binv[:, :] = np.linalg.inv(bm)
            since_refactor = 0
    return ITERATION_LIMIT, iters


def esn_trajectory_py(m_plus, m_minus, qb0, qe0, u_plus, u_minus, dt):
    """Roll a timed-net state forward over a firing schedule.

    qb[k+1] = qb[k] + (m_plus u_plus[k] - m_minus u_minus[k]) dt
    qe[k+1] = qe[k] + (u_minus[k] - u_plus[k]) dt

    Returns the (K+1, n_places) and (K+1, n_transitions) trajectories
    including the initial state.
    """
    horizon = u_minus.shape[0]
    qb = np.empty((horizon + 1, qb0.shape[0]))
    qe = np.empty((horizon + 1, qe0.shape[0]))
    qb[0] = qb0
    qe[0] = qe0
    for k in range(horizon):
        qb[k + 1] = qb[k] + dt * (np.dot(m_plus, u_plus[k]) - np.dot(m_minus, u_minus[k]))
        qe[k + 1] = qe[k] + dt * (u_minus[k] - u_plus[k])
    return qb, qe


def nonneg_power_radius_py(a, tol, max_iter):
    """Spectral radius of a nonnegative square matrix by power iteration.

    Iterates on ``a + I`` instead of ``a``: the shift leaves the
    dominant eigenvector unchanged, moves the dominant eigenvalue to
    radius + 1, and makes the iteration converge even on periodic
    structures (the shifted matrix has positive diagonal).  Returns
    (radius, iterations, converged).
    """
    n = a.shape[0]
    if n == 0:
        return 0.0, 0, True
    shifted = a + np.eye(n)
    v = np.full(n, 1.0 / np.sqrt(n))
    est = 1.0
    for it in range(1, max_iter + 1):
        w = np.dot(shifted, v)
        norm = np.linalg.norm(w)
        v = w / norm
        if it > 1 and abs(norm - est) <= tol * max(1.0, norm):
            return norm - 1.0, it, True
        est = norm
    return est - 1.0, max_iter, False


if USING_NUMBA:
    simplex_iterate_jit = numba.njit(cache=True)(simplex_iterate_py)
    esn_trajectory_jit = numba.njit(cache=True)(esn_trajectory_py)
    nonneg_power_radius_jit = numba.njit(cache=True)(nonneg_power_radius_py)
    simplex_iterate = simplex_iterate_jit
    esn_trajectory = esn_trajectory_jit
    nonneg_power_radius = nonneg_power_radius_jit
else:
    simplex_iterate_jit = None
    esn_trajectory_jit = None
    nonneg_power_radius_jit = None
    simplex_iterate = simplex_iterate_py
    esn_trajectory = esn_trajectory_py
    nonneg_power_radius = nonneg_power_radius_py
