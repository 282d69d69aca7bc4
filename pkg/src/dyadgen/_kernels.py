"""Compiled sampling loops (numba).

Dyads are evaluated column by column: column j holds the dyads (i, j) for
i < j.  Within a column the decisions are conditionally independent given
the state after column j-1 (a row's in-degree never counts same-column
edges, and out-degrees are fixed once the row's own column is done), so
any evaluation order works; ascending i is used throughout.  All
randomness comes from the keyed uniforms in `rng`, which is what makes
the block-parallel evaluation bit-identical to the sequential one.

Edge output arrays are caller-allocated and never reallocated in here:
growing an array inside a jitted loop turns it into a reference-counted
phi variable and costs a multiple of the whole kernel runtime.  On
overflow a kernel bails out with a flag and the caller retries with more
room; results are unaffected because draws are pure functions of the keys.
"""

from __future__ import annotations

import numpy as np
from numba import njit, uint32

from .rng import (
    TAG_BASE,
    TAG_EDGE,
    TAG_HUB,
    TAG_PATH,
    _fill_pairs,
    _fill_uniforms,
    _pair_uniform,
)

# slack for float round-off when checking p <= 1; parameter validation
# already guarantees the exact inequality
_P_SLACK = 1e-9


@njit(cache=True, nogil=True)
def dapa_run(n, alpha, beta, th_in, th_out, k0, k1, checkpoints, elo, ehi):
    """Full sequential affine-model run over columns 2..n.

    Fills caller-provided edge arrays (sorted by column, then row) and
    returns (nedges, deg_in, deg_out, edges_at_checkpoints, bad_prob,
    overflow).  The Philox block for rows (2t, 2t+1) is evaluated once and
    both uniforms are consumed in place.
    """
    deg_in = np.zeros(n + 1, dtype=np.int64)
    deg_out = np.zeros(n + 1, dtype=np.int64)
    buf = np.empty(n + 3, dtype=np.float64)
    x = np.zeros(n + 1, dtype=np.uint8)
    cap = elo.shape[0]
    nedges = 0
    e_at = np.zeros(len(checkpoints), dtype=np.int64)
    ck = 0
    bad = False
    for j in range(2, n + 1):
        inv = 1.0 / (j - 2 + alpha + beta)
        _fill_pairs(buf, 1, j - 1, j, 0, TAG_EDGE, k0, k1)
        dj = 0
        for i in range(1, j):
            p = (alpha + th_in * deg_in[i] + th_out * deg_out[i]) * inv
            if p > 1.0 + _P_SLACK or p < 0.0:
                bad = True
            if buf[i] < p:
                deg_in[i] += 1
                dj += 1
                x[i] = 1
            else:
                x[i] = 0
        deg_out[j] = dj
        if dj > 0:
            if nedges + dj > cap:
                return nedges, deg_in, deg_out, e_at, bad, True
            for i in range(1, j):
                if x[i]:
                    elo[nedges] = i
                    ehi[nedges] = j
                    nedges += 1
        while ck < len(checkpoints) and checkpoints[ck] == j:
            e_at[ck] = nedges
            ck += 1
    return nedges, deg_in, deg_out, e_at, bad, False


@njit(cache=True, nogil=True)
def dapa_block(r_lo, r_hi, c_lo, c_hi, alpha, beta, th_in, th_out, k0, k1,
               deg_in, deg_out, diagonal, elo, ehi):
    """Evaluate the dyad block rows [r_lo, r_hi] x columns [c_lo, c_hi].

    deg_in rows [r_lo, r_hi] are owned exclusively by this call and are
    updated in place.  deg_out is read for those same rows (already final
    thanks to the block dependency rule).  A diagonal block also owns its
    columns' deg_out entries and updates them live, because later columns
    inside the block read them; an off-diagonal block instead returns its
    per-column contributions for the scheduler to merge.
    Returns (nedges, dout_delta, bad_prob, overflow).
    """
    buf = np.empty(r_hi + 3, dtype=np.float64)
    x = np.zeros(r_hi + 1, dtype=np.uint8)
    cap = elo.shape[0]
    nedges = 0
    dout_delta = np.zeros(c_hi - c_lo + 1, dtype=np.int64)
    bad = False
    lo_col = c_lo if c_lo > 2 else 2
    for j in range(lo_col, c_hi + 1):
        ihi = min(r_hi, j - 1)
        if ihi < r_lo:
            continue
        inv = 1.0 / (j - 2 + alpha + beta)
        _fill_pairs(buf, r_lo, ihi, j, 0, TAG_EDGE, k0, k1)
        dj = 0
        for i in range(r_lo, ihi + 1):
            p = (alpha + th_in * deg_in[i] + th_out * deg_out[i]) * inv
            if p > 1.0 + _P_SLACK or p < 0.0:
                bad = True
            if buf[i] < p:
                deg_in[i] += 1
                dj += 1
                x[i] = 1
            else:
                x[i] = 0
        if dj > 0:
            if nedges + dj > cap:
                return nedges, dout_delta, bad, True
            for i in range(r_lo, ihi + 1):
                if x[i]:
                    elo[nedges] = i
                    ehi[nedges] = j
                    nedges += 1
        if diagonal:
            deg_out[j] += dj
        else:
            dout_delta[j - c_lo] = dj
    return nedges, dout_delta, bad, False


@njit(cache=True, nogil=True)
def dapa_node_history(n, node, alpha, beta, th_in, th_out, k0, k1):
    """Degrees of one node without materializing columns past its own.

    Runs the full model through column `node` (fixing the node's
    out-degree), then advances only that node's in-degree through columns
    node+1..n; the in-degree evolution reads nothing but the node's own
    degree counters, so the joint law of (deg_out, deg_in) matches a full
    run with the same seed.
    """
    deg_in = np.zeros(node + 1, dtype=np.int64)
    deg_out = np.zeros(node + 1, dtype=np.int64)
    buf = np.empty(node + 2, dtype=np.float64)
    for j in range(2, node + 1):
        inv = 1.0 / (j - 2 + alpha + beta)
        _fill_uniforms(buf, 1, j - 1, j, 0, TAG_EDGE, k0, k1)
        dj = 0
        for i in range(1, j):
            p = (alpha + th_in * deg_in[i] + th_out * deg_out[i]) * inv
            if buf[i] < p:
                deg_in[i] += 1
                dj += 1
        deg_out[j] = dj
    dout = deg_out[node]
    din = deg_in[node]
    for m in range(node + 1, n + 1):
        p = (alpha + th_in * din + th_out * dout) / (m - 2 + alpha + beta)
        u = _pair_uniform(node, m, 0, TAG_EDGE, k0, k1)
        if u < p:
            din += 1
    return dout, din


@njit(cache=True, nogil=True)
def dorpa_run(n, alpha, beta, th_in, th_out, k0, k1, record, mx, trials, hits,
              elo, ehi, nbr_width):
    """Sequential exponential-link run; every trigger key is evaluated.

    A dyad (i, j) fires if its base trigger fires or any per-parent-edge
    trigger fires; the superposition of the independent exponentials
    reproduces the closed-form edge probability exactly.  Trigger keys are
    never short-circuited so the evaluation count matches the event-driven
    sampler key for key.

    With record=True, per-decision (j, deg_in, deg_out) cells in the dense
    accumulators trials/hits (cell = (j*mx + din)*mx + dout) are updated;
    callers must then guarantee degrees stay below mx.
    Returns (nedges, deg_in, deg_out, base_evals, child_evals, overflow)
    where overflow = 1 for full edge arrays, 2 for full neighbor tables.
    """
    in_nbrs = np.zeros((n + 1, nbr_width), dtype=np.int32)
    out_nbrs = np.zeros((n + 1, nbr_width), dtype=np.int32)
    in_cnt = np.zeros(n + 1, dtype=np.int64)
    out_cnt = np.zeros(n + 1, dtype=np.int64)
    buf = np.empty(n + 2, dtype=np.float64)
    x = np.zeros(n + 1, dtype=np.uint8)
    cap = elo.shape[0]
    nedges = 0
    base_evals = 0
    child_evals = 0
    for j in range(2, n + 1):
        inv = 1.0 / (j + beta)
        pb = 1.0 - np.exp(-alpha * inv)
        ph = 1.0 - np.exp(-th_in * inv)
        pp = 1.0 - np.exp(-th_out * inv)
        _fill_pairs(buf, 1, j - 1, j, 0, TAG_BASE, k0, k1)
        dj = 0
        for i in range(1, j):
            fired = buf[i] < pb
            base_evals += 1
            din = in_cnt[i]
            dout = out_cnt[i]
            for t in range(din):
                k = in_nbrs[i, t]
                child_evals += 1
                if _pair_uniform(j, i, k, TAG_HUB, k0, k1) < ph:
                    fired = True
            for t in range(dout):
                k = out_nbrs[i, t]
                child_evals += 1
                if _pair_uniform(j, i, k, TAG_PATH, k0, k1) < pp:
                    fired = True
            if record:
                cell = (j * mx + din) * mx + dout
                trials[cell] += 1
                if fired:
                    hits[cell] += 1
            if fired:
                x[i] = 1
                dj += 1
            else:
                x[i] = 0
        if dj > 0:
            if nedges + dj > cap:
                return nedges, in_cnt, out_cnt, base_evals, child_evals, 1
            if dj + out_cnt[j] > nbr_width:
                return nedges, in_cnt, out_cnt, base_evals, child_evals, 2
            for i in range(1, j):
                if x[i]:
                    if in_cnt[i] == nbr_width:
                        return nedges, in_cnt, out_cnt, base_evals, child_evals, 2
                    elo[nedges] = i
                    ehi[nedges] = j
                    nedges += 1
                    in_nbrs[i, in_cnt[i]] = j
                    in_cnt[i] += 1
                    out_nbrs[j, out_cnt[j]] = i
                    out_cnt[j] += 1
    return nedges, in_cnt, out_cnt, base_evals, child_evals, 0


@njit(cache=True, nogil=True)
def dorpa_base_pass(n, alpha, beta, k0, k1, elo, ehi):
    """Base triggers for every dyad; fills fired dyads in (column, row) order.

    Returns (count, overflow).
    """
    buf = np.empty(n + 2, dtype=np.float64)
    cap = elo.shape[0]
    cnt = 0
    for j in range(2, n + 1):
        pb = 1.0 - np.exp(-alpha / (j + beta))
        _fill_pairs(buf, 1, j - 1, j, 0, TAG_BASE, k0, k1)
        for i in range(1, j):
            if buf[i] < pb:
                if cnt == cap:
                    return cnt, True
                elo[cnt] = i
                ehi[cnt] = j
                cnt += 1
    return cnt, False


@njit(cache=True, nogil=True)
def dorpa_eval_children(lo, hi, n, beta, th_in, th_out, k0, k1):
    """Trigger draws of one completed parent edge (lo, hi) against all children.

    Hub children are (lo, j) and path children are (hi, j) for j > hi.
    Returns the fired child columns for each family; 2*(n - hi) keys are
    always evaluated regardless of the children's current state.
    """
    m = n - hi
    hub_fired = np.empty(m, dtype=np.int32)
    path_fired = np.empty(m, dtype=np.int32)
    nh = 0
    npth = 0
    ubuf = np.empty(n + 2, dtype=np.float64)
    _fill_pairs(ubuf, hi + 1, n, lo, hi, TAG_HUB, k0, k1)
    for j in range(hi + 1, n + 1):
        ph = 1.0 - np.exp(-th_in / (j + beta))
        if ubuf[j] < ph:
            hub_fired[nh] = j
            nh += 1
    _fill_pairs(ubuf, hi + 1, n, hi, lo, TAG_PATH, k0, k1)
    for j in range(hi + 1, n + 1):
        pp = 1.0 - np.exp(-th_out / (j + beta))
        if ubuf[j] < pp:
            path_fired[npth] = j
            npth += 1
    return hub_fired[:nh], path_fired[:npth]
