"""Deterministic block-parallel evaluation of the affine model.

Nodes are cut into contiguous blocks; the dyad grid then splits into
upper-triangular blocks (R, C), R <= C, holding the dyads with row in
node-block R and column in node-block C.  Dyad (i, j) reads only
(a) node i's in-degree accumulated over columns left of j, and
(b) node i's out-degree, fixed once column i is done.
Hence block (R, C) may run as soon as

  * (R, C-1) is done              -- completes every row's in-degree prefix
  * every (R', R), R' <= R is done -- finalizes out-degrees of rows in R

(for the diagonal block (R, R) the second rule covers R' < R; its own
columns are handled internally in ascending order).  Every uniform is a
pure function of the dyad, so the result is bit-identical to the
sequential sampler no matter how blocks land on workers.

With block_size = n/w and w workers the wavefront finishes in 2w - 1
scheduling rounds, matching the advertised 2w communication-round bound.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from numba import uint32

from . import _kernels
from .network import GrowingNetwork, expected_edges_exact
from .params import ModelParams, ParameterError
from .rng import RandomSource, as_random_source, split_seed


@dataclass
class BlockSchedule:
    """Accounting for one block-parallel run."""

    workers: int
    block_size: int
    n_node_blocks: int
    rounds: int = 0
    blocks_total: int = 0
    blocks_per_worker: list = field(default_factory=list)
    # per round: list of (R, C, worker) in deterministic dispatch order
    assignments: list = field(default_factory=list)


def _node_blocks(n: int, block_size: int) -> list[tuple[int, int]]:
    """Contiguous [lo, hi] node ranges of width block_size (last may be short)."""
    blocks = []
    lo = 1
    while lo <= n:
        hi = min(lo + block_size - 1, n)
        blocks.append((lo, hi))
        lo = hi + 1
    return blocks


def sample_parallel(
    params: ModelParams,
    n: int,
    rng: RandomSource | int,
    workers: int,
    block_size: int,
) -> tuple[GrowingNetwork, BlockSchedule]:
    """Block-wavefront sampler; output equals sample_sequential bit for bit."""
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    if workers < 1 or block_size < 1:
        raise ValueError("workers and block_size must be >= 1")
    rng = as_random_source(rng)
    k0, k1 = split_seed(rng.seed)
    nodes = _node_blocks(n, block_size)
    nb = len(nodes)
    blocks = [(r, c) for r in range(nb) for c in range(r, nb)]
    schedule = BlockSchedule(
        workers=workers, block_size=block_size, n_node_blocks=nb,
        blocks_total=len(blocks), blocks_per_worker=[0] * workers,
    )

    deg_in = np.zeros(n + 1, dtype=np.int64)
    deg_out = np.zeros(n + 1, dtype=np.int64)
    done: set[tuple[int, int]] = set()
    edge_chunks: dict[tuple[int, int], tuple[np.ndarray, np.ndarray]] = {}
    bad_flag = False

    def ready(block: tuple[int, int]) -> bool:
        r, c = block
        if c > r and (r, c - 1) not in done:
            return False
        return all((rp, r) in done for rp in range(0, r + (1 if c > r else 0)))

    total_dyads = n * (n - 1) / 2.0
    expected_total = expected_edges_exact(params, n)

    def run_block(block: tuple[int, int]):
        r, c = block
        r_lo, r_hi = nodes[r]
        c_lo, c_hi = nodes[c]
        block_dyads = sum(
            max(0, min(r_hi, j - 1) - r_lo + 1) for j in range(max(c_lo, 2), c_hi + 1)
        )
        cap = int(3.0 * expected_total * block_dyads / total_dyads) + 2048
        # the kernel mutates degree state in place; keep a copy so an
        # overflowed attempt can be rolled back before the retry
        deg_in_save = deg_in[r_lo : r_hi + 1].copy()
        deg_out_save = deg_out[c_lo : c_hi + 1].copy() if r == c else None
        while True:
            elo = np.empty(cap, dtype=np.int32)
            ehi = np.empty(cap, dtype=np.int32)
            nedges, dout_delta, bad, overflow = _kernels.dapa_block(
                r_lo, r_hi, c_lo, c_hi,
                params.alpha, params.beta, params.theta_in, params.theta_out,
                uint32(k0), uint32(k1), deg_in, deg_out, r == c, elo, ehi,
            )
            if not overflow:
                return elo[:nedges].copy(), ehi[:nedges].copy(), dout_delta, bad
            deg_in[r_lo : r_hi + 1] = deg_in_save
            if deg_out_save is not None:
                deg_out[c_lo : c_hi + 1] = deg_out_save
            cap *= 2

    pending = set(blocks)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        while pending:
            batch = sorted(
                (b for b in pending if ready(b)),
                key=lambda rc: (rc[0] + rc[1], rc[1]),
            )[:workers]
            if not batch:  # pragma: no cover - dependency rule guarantees progress
                raise RuntimeError("scheduler deadlock")
            results = list(pool.map(run_block, batch))
            round_log = []
            for slot, (block, (elo, ehi, dout_delta, bad)) in enumerate(
                zip(batch, results)
            ):
                r, c = block
                if bad:
                    bad_flag = True
                edge_chunks[block] = (elo, ehi)
                if r != c:  # diagonal blocks already applied their own columns
                    c_lo, c_hi = nodes[c]
                    deg_out[c_lo : c_hi + 1] += dout_delta
                worker = slot % workers
                schedule.blocks_per_worker[worker] += 1
                round_log.append((r, c, worker))
                pending.discard(block)
                done.add(block)
            schedule.assignments.append(round_log)
            schedule.rounds += 1
    if bad_flag:
        raise ParameterError("edge probability escaped [0, 1] during sampling")

    if edge_chunks:
        elo = np.concatenate([edge_chunks[b][0] for b in blocks])
        ehi = np.concatenate([edge_chunks[b][1] for b in blocks])
    else:  # pragma: no cover
        elo = np.empty(0, dtype=np.int32)
        ehi = np.empty(0, dtype=np.int32)
    order = np.lexsort((elo, ehi))
    net = GrowingNetwork(
        n=n, edge_lo=elo[order], edge_hi=ehi[order],
        deg_in=deg_in, deg_out=deg_out,
        params=params, seed=rng.seed, model="dapa",
    )
    return net, schedule
