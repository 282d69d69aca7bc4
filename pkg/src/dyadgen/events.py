"""Exponential-link (DORPA) samplers: direct sequential and event-driven.

The structural equation gives dyad (i, j) edge probability

    p_ij = 1 - exp(-(alpha + theta_in*d_in + theta_out*d_out) / (j + beta))

which factorizes into independent triggers: a base trigger with rate
alpha/(j+beta) plus one trigger per present parent edge (rate theta_in or
theta_out over the child's denominator).  An edge appears iff any trigger
fires, and the product of the no-fire probabilities telescopes back to the
closed form.  Each trigger owns a fixed RNG key (child column, child row,
other parent node, stream tag), so the direct column sweep and the
asynchronous empty -> active -> completed event propagation consume
identical randomness and agree bit for bit, in any pop order.
"""

from __future__ import annotations

import enum
import math
import random
from collections import deque
from dataclasses import dataclass

import numpy as np
from numba import uint32

from . import _kernels
from .arrows import Arrow, Dyad, classify_relation
from .network import GrowingNetwork, expected_edges_exact
from .params import ModelParams
from .rng import RandomSource, as_random_source, split_seed


class DyadStatus(enum.IntEnum):
    """Monotone event-loop states; an edge exists iff status >= ACTIVE."""

    EMPTY = 0
    ACTIVE = 1
    COMPLETED = 2


@dataclass(frozen=True)
class TriggerKey:
    """Identity of one parent->child trigger draw (Hub or Path arrows only)."""

    parent: Dyad
    child: Dyad
    arrow: Arrow

    def __post_init__(self):
        if self.arrow not in (Arrow.HUB, Arrow.PATH):
            raise ValueError(f"triggers exist only for Hub/Path, got {self.arrow}")
        actual = classify_relation(self.parent, self.child)
        if actual != self.arrow:
            raise ValueError(
                f"{self.parent}->{self.child} is {actual}, not {self.arrow}"
            )


@dataclass(frozen=True)
class TriggerStats:
    """Evaluation counts; identical between the two samplers by construction."""

    base_evals: int
    child_evals: int


def dorpa_edge_prob(i: int, j: int, din: int, dout: int, params: ModelParams) -> float:
    """Closed-form exponential-link probability; in (0, 1) whenever alpha > 0."""
    if not i < j:
        raise ValueError(f"need i < j, got ({i}, {j})")
    rate = params.alpha + params.theta_in * din + params.theta_out * dout
    return -math.expm1(-rate / (j + params.beta))


def _dorpa_capacity(params: ModelParams, n: int) -> int:
    mean = expected_edges_exact(params, n)
    return int(2.0 * mean + 8.0 * math.sqrt(mean + 1.0)) + 1024


def _run_dorpa(params, n, seed, record=False, mx=1, trials=None, hits=None):
    """Invoke the compiled sweep, resizing edge/neighbor buffers on demand."""
    k0, k1 = split_seed(seed)
    cap = min(_dorpa_capacity(params, n), n * (n - 1) // 2)
    width = 128
    if trials is None:
        trials = np.zeros(1, dtype=np.int64)
        hits = np.zeros(1, dtype=np.int64)
    while True:
        elo = np.empty(cap, dtype=np.int32)
        ehi = np.empty(cap, dtype=np.int32)
        nedges, deg_in, deg_out, base_evals, child_evals, overflow = _kernels.dorpa_run(
            n, params.alpha, params.beta, params.theta_in, params.theta_out,
            uint32(k0), uint32(k1), record, mx, trials, hits, elo, ehi, width,
        )
        if overflow == 0:
            return elo[:nedges].copy(), ehi[:nedges].copy(), deg_in, deg_out, base_evals, child_evals
        if record:
            raise RuntimeError("recording run overflowed; accumulators are tainted")
        if overflow == 1:
            cap *= 2
        else:
            width *= 2


def sample_dorpa_sequential(
    params: ModelParams,
    n: int,
    rng: RandomSource | int,
    return_stats: bool = False,
):
    """Column sweep evaluating base plus per-parent triggers for every dyad."""
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    rng = as_random_source(rng)
    elo, ehi, deg_in, deg_out, base_evals, child_evals = _run_dorpa(params, n, rng.seed)
    net = GrowingNetwork(
        n=n, edge_lo=elo, edge_hi=ehi, deg_in=deg_in, deg_out=deg_out,
        params=params, seed=rng.seed, model="dorpa",
    )
    if return_stats:
        return net, TriggerStats(int(base_evals), int(child_evals))
    return net


def dorpa_marginal_counts(
    params: ModelParams, n: int, seeds, max_degree: int = 64
) -> tuple[np.ndarray, np.ndarray]:
    """Pooled (trials, hits) per (column, d_in, d_out) cell over many seeds.

    Cells index a dense (n+1, max_degree, max_degree) grid; degrees at or
    above max_degree abort (raise) rather than alias.  Used to compare
    realized conditional edge frequencies against dorpa_edge_prob.
    """
    mx = max_degree
    trials = np.zeros((n + 1) * mx * mx, dtype=np.int64)
    hits = np.zeros((n + 1) * mx * mx, dtype=np.int64)
    # full-triangle buffers: recording runs must never overflow-and-retry
    cap = n * (n - 1) // 2
    elo = np.empty(cap, dtype=np.int32)
    ehi = np.empty(cap, dtype=np.int32)
    for seed in seeds:
        k0, k1 = split_seed(as_random_source(int(seed)).seed)
        _, deg_in, deg_out, _, _, overflow = _kernels.dorpa_run(
            n, params.alpha, params.beta, params.theta_in, params.theta_out,
            uint32(k0), uint32(k1), True, mx, trials, hits, elo, ehi, n,
        )
        assert overflow == 0
        if deg_in.max() >= mx or deg_out.max() >= mx:
            raise ValueError(f"degree exceeded max_degree={mx}; raise the cap")
    return trials.reshape(n + 1, mx, mx), hits.reshape(n + 1, mx, mx)


def sample_dorpa_events(
    params: ModelParams,
    n: int,
    rng: RandomSource | int,
    pop_order: str = "fifo",
    return_stats: bool = False,
):
    """Asynchronous propagation: base seeds, then parent-driven triggers.

    All dyads start EMPTY; dyads whose base trigger fires gain an edge and
    become ACTIVE.  Popping an active dyad completes it and evaluates the
    trigger keys of all its Hub children (lo, j) and Path children (hi, j),
    j > hi, regardless of child state; a firing child that is still EMPTY
    gains an edge and becomes ACTIVE.  Keys match the sequential sampler,
    so the final edge set is identical for any pop order ("fifo", "lifo",
    or "random").
    """
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    if pop_order not in ("fifo", "lifo", "random"):
        raise ValueError(f"unknown pop_order {pop_order!r}")
    rng = as_random_source(rng)
    k0u, k1u = split_seed(rng.seed)
    k0, k1 = uint32(k0u), uint32(k1u)

    def idx(i, j):
        return (j - 2) * (j - 1) // 2 + i - 1

    status = np.zeros(n * (n - 1) // 2, dtype=np.uint8)
    cap = min(_dorpa_capacity(params, n), n * (n - 1) // 2)
    while True:
        base_lo = np.empty(cap, dtype=np.int32)
        base_hi = np.empty(cap, dtype=np.int32)
        cnt, overflow = _kernels.dorpa_base_pass(
            n, params.alpha, params.beta, k0, k1, base_lo, base_hi
        )
        if not overflow:
            base_lo, base_hi = base_lo[:cnt], base_hi[:cnt]
            break
        cap *= 2
    base_evals = n * (n - 1) // 2
    child_evals = 0
    queue = deque()
    for a, b in zip(base_lo.tolist(), base_hi.tolist()):
        status[idx(a, b)] = DyadStatus.ACTIVE
        queue.append((a, b))
    shuffler = random.Random(rng.seed ^ 0x5EED) if pop_order == "random" else None
    pops = 0
    while queue:
        if pop_order == "fifo":
            lo, hi = queue.popleft()
        elif pop_order == "lifo":
            lo, hi = queue.pop()
        else:
            pos = shuffler.randrange(len(queue))
            queue.rotate(-pos)
            lo, hi = queue.popleft()
            queue.rotate(pos)
        pops += 1
        if pops > n * (n - 1):  # pragma: no cover - monotone statuses forbid this
            raise RuntimeError("event loop failed to terminate")
        status[idx(lo, hi)] = DyadStatus.COMPLETED
        child_evals += 2 * (n - hi)
        if hi == n:
            continue
        hub_js, path_js = _kernels.dorpa_eval_children(
            lo, hi, n, params.beta, params.theta_in, params.theta_out, k0, k1
        )
        for row, js in ((lo, hub_js), (hi, path_js)):
            for j in js.tolist():
                cell = idx(row, j)
                if status[cell] == DyadStatus.EMPTY:
                    status[cell] = DyadStatus.ACTIVE
                    queue.append((row, j))

    cells = np.nonzero(status)[0]
    col_starts = np.array([(j - 2) * (j - 1) // 2 for j in range(2, n + 2)])
    ehi = (np.searchsorted(col_starts, cells, side="right") + 1).astype(np.int32)
    elo = (cells - col_starts[ehi - 2] + 1).astype(np.int32)
    deg_in = np.zeros(n + 1, dtype=np.int64)
    deg_out = np.zeros(n + 1, dtype=np.int64)
    np.add.at(deg_in, elo, 1)
    np.add.at(deg_out, ehi, 1)
    net = GrowingNetwork(
        n=n, edge_lo=elo, edge_hi=ehi, deg_in=deg_in, deg_out=deg_out,
        params=params, seed=rng.seed, model="dorpa",
    )
    if return_stats:
        return net, TriggerStats(int(base_evals), int(child_evals))
    return net
