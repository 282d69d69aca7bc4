"""Growing-network state, the affine edge probability, and the sequential sampler.

Orientation convention: nodes are numbered by arrival, edges are stored as
(lo, hi) with lo < hi, and column j means the dyads (i, j), i < j, decided
when node j arrives.  deg_in[i] counts edges from later nodes into i (the
(i, k), k > i edges); deg_out[i] counts the edges i made to earlier nodes
((k, i), k < i).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numba import uint32

from . import _kernels
from .params import ModelParams, ParameterError
from .rng import RandomSource, as_random_source, split_seed


class NetworkFormatError(ValueError):
    """Malformed network file; carries the offending 1-based line number."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


@dataclass
class GrowingNetwork:
    """Edge set over nodes 1..n plus maintained degree counters.

    edge_lo/edge_hi are parallel arrays sorted by (hi, lo), i.e. column
    order.  Degree arrays have length n+1 with index 0 unused.  Sampling
    provenance (params, seed, model) rides along so a network file header
    can be written and round-tripped.
    """

    n: int
    edge_lo: np.ndarray
    edge_hi: np.ndarray
    deg_in: np.ndarray
    deg_out: np.ndarray
    params: ModelParams | None = None
    seed: int | None = None
    model: str = "dapa"
    edge_counts_at: list | None = field(default=None, repr=False)

    @property
    def num_edges(self) -> int:
        return len(self.edge_lo)

    @property
    def avg_degree(self) -> float:
        return 2.0 * self.num_edges / self.n

    def degrees(self) -> np.ndarray:
        """Total degree (in + out) per node, shape (n,), node 1 first."""
        return (self.deg_in + self.deg_out)[1:]

    def recomputed_degrees(self) -> tuple[np.ndarray, np.ndarray]:
        """deg_in/deg_out recounted from the edge list (consistency oracle)."""
        deg_in = np.zeros(self.n + 1, dtype=np.int64)
        deg_out = np.zeros(self.n + 1, dtype=np.int64)
        np.add.at(deg_in, self.edge_lo, 1)
        np.add.at(deg_out, self.edge_hi, 1)
        return deg_in, deg_out

    def __eq__(self, other) -> bool:
        if not isinstance(other, GrowingNetwork):
            return NotImplemented
        return (
            self.n == other.n
            and np.array_equal(self.edge_lo, other.edge_lo)
            and np.array_equal(self.edge_hi, other.edge_hi)
            and self.params == other.params
            and self.seed == other.seed
            and self.model == other.model
        )


def expected_edges_exact(params: ModelParams, n: int) -> float:
    """Exact expected edge total at size n, by the one-step mean recursion.

    The expected increment when node m+1 arrives is
    (alpha*m + (theta_in+theta_out)*E(m)) / (m + alpha + beta - 1), linear
    in E, so iterating it yields the exact mean: an independent oracle for
    Monte-Carlo edge counts and a sizing hint for edge buffers.
    """
    e = 0.0
    s = params.theta_sum
    for m in range(1, n):
        e += (params.alpha * m + s * e) / (m + params.alpha + params.beta - 1)
    return e


def _edge_capacity(params: ModelParams, n: int) -> int:
    mean = expected_edges_exact(params, n)
    return int(1.5 * mean + 8.0 * math.sqrt(mean + 1.0)) + 1024


def edge_prob(i: int, j: int, din: int, dout: int, params: ModelParams) -> float:
    """Affine attachment probability for dyad (i, j) given node i's degrees.

    Computes (alpha + theta_in*din + theta_out*dout) * (1 / (j-2+alpha+beta)),
    the exact expression the samplers evaluate.  Raises instead of clamping
    if the value escapes [0, 1]; under the ModelParams bounds and reachable
    degree states that cannot happen.
    """
    if not i < j:
        raise ValueError(f"need i < j, got ({i}, {j})")
    if din < 0 or dout < 0:
        raise ValueError("degrees must be non-negative")
    if din > j - 1 - i or dout > i - 1:
        raise ValueError(
            f"degree state ({din}, {dout}) unreachable for dyad ({i}, {j})"
        )
    p = (params.alpha + params.theta_in * din + params.theta_out * dout) * (
        1.0 / (j - 2 + params.alpha + params.beta)
    )
    if p < 0.0 or p > 1.0 + _kernels._P_SLACK:
        raise ParameterError(f"edge probability {p} outside [0, 1]")
    return min(p, 1.0)


def sample_sequential(
    params: ModelParams,
    n: int,
    rng: RandomSource | int,
    checkpoints: list[int] | None = None,
) -> GrowingNetwork:
    """Reference sampler: columns j = 2..n, rows ascending within a column.

    Deterministic given (params, n, seed).  With `checkpoints` (ascending
    node counts), the cumulative edge count after each checkpoint column is
    stashed on the returned network as `.edge_counts_at` for growth-curve
    work.
    """
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    rng = as_random_source(rng)
    ck = np.asarray(sorted(checkpoints or []), dtype=np.int64)
    if len(ck) and (ck[0] < 2 or ck[-1] > n):
        raise ValueError("checkpoints must lie in [2, n]")
    k0, k1 = split_seed(rng.seed)
    cap = _edge_capacity(params, n)
    while True:
        elo = np.empty(cap, dtype=np.int32)
        ehi = np.empty(cap, dtype=np.int32)
        nedges, deg_in, deg_out, e_at, bad, overflow = _kernels.dapa_run(
            n, params.alpha, params.beta, params.theta_in, params.theta_out,
            uint32(k0), uint32(k1), ck, elo, ehi,
        )
        if not overflow:
            break
        cap *= 2
    elo, ehi = elo[:nedges].copy(), ehi[:nedges].copy()
    if bad:
        raise ParameterError("edge probability escaped [0, 1] during sampling")
    net = GrowingNetwork(
        n=n, edge_lo=elo, edge_hi=ehi, deg_in=deg_in, deg_out=deg_out,
        params=params, seed=rng.seed, model="dapa",
    )
    if len(ck):
        net.edge_counts_at = list(zip(ck.tolist(), e_at.tolist()))
    return net


def recompute_checks(net: GrowingNetwork) -> bool:
    """True iff the maintained degree counters match the edge list."""
    deg_in, deg_out = net.recomputed_degrees()
    return bool(
        np.array_equal(deg_in, net.deg_in) and np.array_equal(deg_out, net.deg_out)
    )


def sample_node_degrees(
    params: ModelParams, n: int, node: int, rng: RandomSource | int
) -> tuple[int, int]:
    """(deg_out, deg_in) of one node at size n, via its marginal history.

    Exact shortcut: the network is materialized only up to the node's own
    column; beyond it the node's in-degree depends on nothing but its own
    counters, so only that trajectory is advanced.
    """
    if not 2 <= node <= n:
        raise ValueError("need 2 <= node <= n")
    rng = as_random_source(rng)
    k0, k1 = split_seed(rng.seed)
    dout, din = _kernels.dapa_node_history(
        n, node, params.alpha, params.beta, params.theta_in, params.theta_out,
        uint32(k0), uint32(k1),
    )
    return int(dout), int(din)


# ---------------------------------------------------------------------------
# edge-list file format
# ---------------------------------------------------------------------------

_HEADER_PREFIX = "dyadgen-net v1"


def _format_header(net: GrowingNetwork) -> str:
    p = net.params
    if p is None or net.seed is None:
        raise ValueError("network lacks sampling provenance; cannot write header")
    return (
        f"{_HEADER_PREFIX} n={net.n} alpha={p.alpha!r} beta={p.beta!r} "
        f"theta_in={p.theta_in!r} theta_out={p.theta_out!r} "
        f"seed={net.seed} model={net.model}"
    )


def write_network(net: GrowingNetwork, path) -> None:
    """Write the header line plus one `i j` line per edge, sorted by (j, i)."""
    order = np.lexsort((net.edge_lo, net.edge_hi))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(_format_header(net) + "\n")
        lo, hi = net.edge_lo[order], net.edge_hi[order]
        for a, b in zip(lo.tolist(), hi.tolist()):
            fh.write(f"{a} {b}\n")


def read_network(path) -> GrowingNetwork:
    """Parse an edge-list file; unsorted or messy edge order is normalized."""
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise NetworkFormatError(1, "empty file, expected header")
    head = lines[0]
    if not head.startswith(_HEADER_PREFIX + " "):
        raise NetworkFormatError(1, f"expected '{_HEADER_PREFIX} ...' header")
    fields = {}
    for token in head[len(_HEADER_PREFIX) + 1 :].split():
        if "=" not in token:
            raise NetworkFormatError(1, f"bad header token {token!r}")
        key, val = token.split("=", 1)
        fields[key] = val
    try:
        n = int(fields["n"])
        params = ModelParams(
            alpha=float(fields["alpha"]),
            beta=float(fields["beta"]),
            theta_in=float(fields["theta_in"]),
            theta_out=float(fields["theta_out"]),
        )
        seed = int(fields["seed"])
        model = fields["model"]
    except KeyError as exc:
        raise NetworkFormatError(1, f"header missing field {exc}") from None
    except (ValueError, ParameterError) as exc:
        raise NetworkFormatError(1, f"bad header value: {exc}") from None
    if model not in ("dapa", "dorpa"):
        raise NetworkFormatError(1, f"unknown model {model!r}")
    lo_list, hi_list = [], []
    for line_no, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split()
        if len(parts) != 2:
            raise NetworkFormatError(line_no, f"expected 'i j', got {line!r}")
        try:
            a, b = int(parts[0]), int(parts[1])
        except ValueError:
            raise NetworkFormatError(line_no, f"non-integer edge {line!r}") from None
        if not (1 <= a < b <= n):
            raise NetworkFormatError(line_no, f"edge ({a}, {b}) out of range")
        lo_list.append(a)
        hi_list.append(b)
    elo = np.asarray(lo_list, dtype=np.int32)
    ehi = np.asarray(hi_list, dtype=np.int32)
    order = np.lexsort((elo, ehi))
    elo, ehi = elo[order], ehi[order]
    pairs = set(zip(elo.tolist(), ehi.tolist()))
    if len(pairs) != len(elo):
        raise NetworkFormatError(1, "duplicate edges in file")
    deg_in = np.zeros(n + 1, dtype=np.int64)
    deg_out = np.zeros(n + 1, dtype=np.int64)
    np.add.at(deg_in, elo, 1)
    np.add.at(deg_out, ehi, 1)
    return GrowingNetwork(
        n=n, edge_lo=elo, edge_hi=ehi, deg_in=deg_in, deg_out=deg_out,
        params=params, seed=seed, model=model,
    )


def write_manifest(path, entries: dict) -> None:
    """Key=value run manifest, one entry per line, insertion order kept."""
    with open(path, "w", encoding="utf-8") as fh:
        for key, val in entries.items():
            fh.write(f"{key}={val}\n")


def read_manifest(path) -> dict:
    out = {}
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if line:
                key, _, val = line.partition("=")
                out[key] = val
    return out
