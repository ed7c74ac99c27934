"""Pure-Python kernels; the reference implementation of the hot loops.

Every function here has a compiled twin in ``rodentsim._native``. The two
must stay interchangeable down to the bit: same uniform-draw order from
the shared ``numpy.random.Generator`` stream, same double-precision
operations in the same order. Any change here must be mirrored there
(`tests/test_backends.py` enforces equality).

Draw conventions, shared by both backends:

* sequence generation consumes exactly one uniform per element;
* the trial loop consumes exactly two uniforms per acted trial (one for
  the explore/exploit decision, one for the action), regardless of
  which branch is taken;
* an index is drawn from ``n`` choices as ``int(u * n)``.
"""

from __future__ import annotations

import math

import numpy as np

BACKEND_NAME = "python"


def sequence_codes(rng, active, length, max_run):
    """Random stimulus codes with no run of identical values longer than ``max_run``.

    Draws uniformly over ``active`` (sorted, de-duplicated by the caller);
    once a run reaches ``max_run``, the next draw is uniform over the
    remaining codes.
    """
    active = [int(c) for c in active]
    n = len(active)
    out = np.empty(length, dtype=np.uint8)
    last = -1
    run = 0
    for i in range(length):
        u = rng.random()
        if run >= max_run:
            j = int(u * (n - 1))
            if active[j] >= last:
                # skip over the forbidden code; `active` is sorted
                j += 1
            code = active[j]
        else:
            code = active[int(u * n)]
        out[i] = code
        if code == last:
            run += 1
        else:
            last = code
            run = 1
    return out


def session_trials(rng, q, stims, targets, window_idx, pending_has,
                   pending_sidx, pending_a, pending_r, eps, alpha, gamma,
                   n_states):
    """Run the per-trial loop for one block of stimuli.

    For each stimulus: shift it into the state window, apply the deferred
    value update for the previous trial (its successor state is only now
    known), pick an action (uniform explore with probability ``eps``,
    otherwise a softmax draw over the state's action values), judge it
    against ``targets`` and queue the +1/-1 reward for the next update.

    ``q`` is mutated in place. Returns the response codes, the outcome
    codes, and the carried-over state (window index plus pending update).
    """
    m = len(stims)
    stim_list = [int(s) for s in stims]
    target_list = [int(t) for t in targets]
    resp = np.empty(m, dtype=np.uint8)
    outc = np.empty(m, dtype=np.uint8)
    widx = int(window_idx)
    has = int(pending_has)
    psidx = int(pending_sidx)
    pa = int(pending_a)
    pr = float(pending_r)
    exp = math.exp

    for i in range(m):
        s_code = stim_list[i]
        widx = (widx * 4 + s_code) % n_states

        if has:
            mx = q[widx, 0]
            if q[widx, 1] > mx:
                mx = q[widx, 1]
            if q[widx, 2] > mx:
                mx = q[widx, 2]
            old = q[psidx, pa]
            q[psidx, pa] = old + alpha * (pr + gamma * mx - old)

        u1 = rng.random()
        u2 = rng.random()
        if u1 < eps:
            a = int(u2 * 3)
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

        correct = a == target_list[s_code]
        resp[i] = a
        outc[i] = 1 if correct else 0
        has = 1
        psidx = widx
        pa = a
        pr = 1.0 if correct else -1.0

    return resp, outc, widx, has, psidx, pa, pr


def window_counts(outc, delta):
    """Sliding sums of correctness indicators over windows of length ``delta``.

    Incremental O(m) recurrence on integer counts; returns an empty array
    when the session is shorter than the window.
    """
    m = len(outc)
    if m < delta:
        return np.empty(0, dtype=np.int64)
    ind = [int(x) for x in outc]
    n = m - delta + 1
    out = np.empty(n, dtype=np.int64)
    c = sum(ind[:delta])
    out[0] = c
    for t in range(1, n):
        c += ind[t + delta - 1] - ind[t - 1]
        out[t] = c
    return out


def mean_match(vals_a, vals_b):
    """Mean two-term L1 distance between aligned window values.

    Each value is the success rate of a two-point (correct/incorrect)
    distribution; the per-position distance is |p-q| + |(1-p)-(1-q)|.
    Alignment stops at the shorter array.
    """
    n = min(len(vals_a), len(vals_b))
    if n == 0:
        raise ValueError("mean_match needs at least one aligned position")
    va = vals_a.tolist()
    vb = vals_b.tolist()
    total = 0.0
    for t in range(n):
        p = va[t]
        q = vb[t]
        total += abs(p - q) + abs((1.0 - p) - (1.0 - q))
    return total / n
