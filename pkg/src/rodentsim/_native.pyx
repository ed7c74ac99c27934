# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; the fast twin of ``rodentsim._pykernels``.

Must stay bit-identical to the pure-Python implementation: same uniform
draws (pulled straight from the Generator's bit generator), same double
operations in the same order. See the _pykernels module docstring for
the shared draw conventions.
"""

from cpython.pycapsule cimport PyCapsule_GetPointer
from libc.math cimport exp
from numpy.random cimport bitgen_t

import numpy as np

BACKEND_NAME = "native"


cdef bitgen_t *_bitgen(rng):
    capsule = rng.bit_generator.capsule
    return <bitgen_t *> PyCapsule_GetPointer(capsule, "BitGenerator")


def sequence_codes(rng, active, int length, int max_run):
    """Random stimulus codes with no run of identical values longer than ``max_run``."""
    cdef bitgen_t *bg = _bitgen(rng)
    cdef unsigned char[4] act
    cdef int n = len(active)
    cdef int i
    if not 1 <= n <= 4:
        raise ValueError(f"expected 1..4 active stimulus codes, got {n}")
    for i in range(n):
        act[i] = active[i]
    out = np.empty(length, dtype=np.uint8)
    cdef unsigned char[::1] view = out
    cdef int last = -1
    cdef int run = 0
    cdef int j, code
    cdef double u
    for i in range(length):
        u = bg.next_double(bg.state)
        if run >= max_run:
            j = <int>(u * (n - 1))
            if act[j] >= last:
                # skip over the forbidden code; `act` is sorted
                j += 1
            code = act[j]
        else:
            code = act[<int>(u * n)]
        view[i] = <unsigned char>code
        if code == last:
            run += 1
        else:
            last = code
            run = 1
    return out


def session_trials(rng, double[:, ::1] q, stims, targets, int window_idx,
                   int pending_has, int pending_sidx, int pending_a,
                   double pending_r, double eps, double alpha, double gamma,
                   int n_states):
    """Run the per-trial loop for one block of stimuli; mutates ``q`` in place."""
    cdef bitgen_t *bg = _bitgen(rng)
    cdef const unsigned char[::1] stim_view = stims
    cdef int m = stim_view.shape[0]
    cdef unsigned char[4] tgt
    cdef int i
    for i in range(4):
        tgt[i] = targets[i]
    resp = np.empty(m, dtype=np.uint8)
    outc = np.empty(m, dtype=np.uint8)
    cdef unsigned char[::1] resp_view = resp
    cdef unsigned char[::1] outc_view = outc
    cdef int widx = window_idx
    cdef int has = pending_has
    cdef int psidx = pending_sidx
    cdef int pa = pending_a
    cdef double pr = pending_r
    cdef int s_code, a
    cdef bint correct
    cdef double u1, u2, mx, old, q0, q1, q2, e0, e1, e2, r

    for i in range(m):
        s_code = stim_view[i]
        widx = (widx * 4 + s_code) % n_states

        if has:
            mx = q[widx, 0]
            if q[widx, 1] > mx:
                mx = q[widx, 1]
            if q[widx, 2] > mx:
                mx = q[widx, 2]
            old = q[psidx, pa]
            q[psidx, pa] = old + alpha * (pr + gamma * mx - old)

        u1 = bg.next_double(bg.state)
        u2 = bg.next_double(bg.state)
        if u1 < eps:
            a = <int>(u2 * 3)
        else:
            q0 = q[widx, 0]
            q1 = q[widx, 1]
            q2 = q[widx, 2]
            mx = q0
            if q1 > mx:
                mx = q1
            if q2 > mx:
                mx = q2
            e0 = exp(q0 - mx)
            e1 = exp(q1 - mx)
            e2 = exp(q2 - mx)
            r = u2 * (e0 + e1 + e2)
            if r < e0:
                a = 0
            elif r < e0 + e1:
                a = 1
            else:
                a = 2

        correct = a == tgt[s_code]
        resp_view[i] = <unsigned char>a
        outc_view[i] = 1 if correct else 0
        has = 1
        psidx = widx
        pa = a
        pr = 1.0 if correct else -1.0

    return resp, outc, widx, has, psidx, pa, pr


def window_counts(outc, int delta):
    """Sliding sums of correctness indicators over windows of length ``delta``."""
    cdef const unsigned char[::1] ind = outc
    cdef int m = ind.shape[0]
    if m < delta:
        return np.empty(0, dtype=np.int64)
    cdef int n = m - delta + 1
    out = np.empty(n, dtype=np.int64)
    cdef long long[::1] view = out
    cdef long long c = 0
    cdef int t
    for t in range(delta):
        c += ind[t]
    view[0] = c
    for t in range(1, n):
        c += ind[t + delta - 1] - ind[t - 1]
        view[t] = c
    return out


def mean_match(vals_a, vals_b):
    """Mean two-term L1 distance between aligned window values."""
    cdef const double[::1] va = vals_a
    cdef const double[::1] vb = vals_b
    cdef int n = min(va.shape[0], vb.shape[0])
    if n == 0:
        raise ValueError("mean_match needs at least one aligned position")
    cdef double total = 0.0
    cdef double p, q, d1, d2
    cdef int t
    for t in range(n):
        p = va[t]
        q = vb[t]
        d1 = p - q
        if d1 < 0.0:
            d1 = -d1
        d2 = (1.0 - p) - (1.0 - q)
        if d2 < 0.0:
            d2 = -d2
        # keep the same summation order as the pure-Python twin
        total += d1 + d2
    return total / n
