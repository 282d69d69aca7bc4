"""Algebra of causal arrows between dyads of a growing network.

A dyad is an unordered pair of node indices, stored as (lo, hi) with
lo < hi.  An ordered pair of dyads (parent, child) falls into exactly one
of 13 relative-order patterns.  Eight of them keep every parent node at or
below the child's newest node and are named arrow types (Hub, Path, Old,
New, Far, Mid, Near, Self); the remaining five reach into the child's
future and are rejected (`classify_relation` returns None for those).

Arrow types compose: following an arrow of type X and then one of type Y
lands on a set of possible types.  The full 8x8 composition table is
derived here by brute force over all dyads on a small node range (relative
order among at most 6 distinct nodes is all that matters, so any range of
6 or more nodes gives the same table).  On top of the table sit the
set-composition and transitive-closure operations, the enumeration of the
96 acyclic arrow subsets and their 21 closure classes, and the inclusion
poset of those classes with its Hasse covers.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from itertools import combinations


class Arrow(enum.Enum):
    """The eight dyad-to-dyad arrow types with finite ancestor patterns."""

    HUB = "Hub"
    PATH = "Path"
    OLD = "Old"
    NEW = "New"
    FAR = "Far"
    MID = "Mid"
    NEAR = "Near"
    SELF = "Self"

    def __repr__(self) -> str:
        return self.value

    def __str__(self) -> str:
        return self.value


# Display order used for labels, DOT output and the composition-table CSV.
ARROW_ORDER = (
    Arrow.OLD,
    Arrow.MID,
    Arrow.PATH,
    Arrow.FAR,
    Arrow.HUB,
    Arrow.NEAR,
    Arrow.NEW,
)

#: The seven substantive arrow types (everything except the Self identity).
SUBSTANTIVE = ARROW_ORDER

ArrowSet = frozenset  # alias: arrow sets are plain frozensets of Arrow


@dataclass(frozen=True, order=True)
class Dyad:
    """Unordered node pair, kept in lexicographic order (lo < hi)."""

    lo: int
    hi: int

    def __post_init__(self):
        if not (isinstance(self.lo, int) and isinstance(self.hi, int)):
            raise TypeError(f"dyad nodes must be ints, got {self.lo!r}, {self.hi!r}")
        if not (1 <= self.lo < self.hi):
            raise ValueError(f"dyad needs 1 <= lo < hi, got ({self.lo}, {self.hi})")

    def __str__(self) -> str:
        return f"({self.lo},{self.hi})"


def classify_relation(parent: Dyad, child: Dyad) -> Arrow | None:
    """Arrow type of parent -> child, or None for the five future patterns.

    None is returned exactly when some parent node exceeds child.hi, i.e.
    the parent touches a node newer than anything in the child.
    """
    a, b = parent.lo, parent.hi
    x, y = child.lo, child.hi
    if b > y:
        return None
    if b == y:
        if a == x:
            return Arrow.SELF
        return Arrow.OLD if a < x else Arrow.NEW
    # b < y from here on
    if a == x:
        return Arrow.HUB
    if b == x:
        return Arrow.PATH
    if b < x:
        return Arrow.FAR
    if a < x:
        return Arrow.MID  # a < x < b < y
    return Arrow.NEAR  # x < a < b < y


def all_dyads(n: int) -> list[Dyad]:
    """Every dyad over nodes 1..n, sorted by (hi, lo) (column order)."""
    return [Dyad(i, j) for j in range(2, n + 1) for i in range(1, j)]


class CompositionTable:
    """Total map (Arrow, Arrow) -> frozenset[Arrow], derived by brute force."""

    def __init__(self, entries: dict[tuple[Arrow, Arrow], frozenset]):
        missing = [(x, y) for x in Arrow for y in Arrow if (x, y) not in entries]
        if missing:
            raise ValueError(f"composition table not total, missing {missing}")
        self._entries = dict(entries)

    def __call__(self, x: Arrow, y: Arrow) -> frozenset:
        return self._entries[(x, y)]

    def __eq__(self, other) -> bool:
        return isinstance(other, CompositionTable) and self._entries == other._entries

    def items(self):
        return self._entries.items()


def derive_composition_table(max_node: int = 6) -> CompositionTable:
    """Build the 8x8 composition table from dyad triples over 1..max_node.

    entry(X, Y) collects classify_relation(p, r) over all p -> q -> r with
    classify_relation(p, q) = X and classify_relation(q, r) = Y.  Left
    argument acts first; composition is not commutative.  The result is
    the same for every max_node >= 6 (a composed pair touches at most 6
    distinct nodes).
    """
    if max_node < 6:
        raise ValueError(f"max_node must be >= 6, got {max_node}")
    dyads = all_dyads(max_node)
    by_type: dict[Arrow, list[tuple[Dyad, Dyad]]] = {t: [] for t in Arrow}
    for p in dyads:
        for q in dyads:
            t = classify_relation(p, q)
            if t is not None:
                by_type[t].append((p, q))
    successors: dict[Arrow, dict[Dyad, list[Dyad]]] = {t: {} for t in Arrow}
    for t, pairs in by_type.items():
        for q, r in pairs:
            successors[t].setdefault(q, []).append(r)
    entries = {}
    for x in Arrow:
        for y in Arrow:
            out = set()
            succ = successors[y]
            for p, q in by_type[x]:
                for r in succ.get(q, ()):
                    z = classify_relation(p, r)
                    if z is None:
                        raise AssertionError(
                            f"composition produced a future pattern: {p}->{q}->{r}"
                        )
                    out.add(z)
            entries[(x, y)] = frozenset(out)
    return CompositionTable(entries)


def compose_sets(s: frozenset, t: frozenset, table: CompositionTable) -> frozenset:
    """Union of entry(X, Y) over X in s, Y in t."""
    out: set = set()
    for x in s:
        for y in t:
            out |= table(x, y)
    return frozenset(out)


def transitive_closure(s: frozenset, table: CompositionTable) -> frozenset:
    """Least fixed point of t -> t | compose(t, t) containing s | {Self}.

    Self is adjoined internally as the identity; the result always
    contains it.  The lattice has 8 elements, so the squaring iteration
    terminates in a handful of rounds.
    """
    cur = frozenset(s) | {Arrow.SELF}
    while True:
        nxt = cur | compose_sets(cur, cur, table)
        if nxt == cur:
            return cur
        cur = nxt


@dataclass(frozen=True)
class MetaDagClass:
    """An arrow subset defining one meta-DAG shape; Self is implicit.

    `closed` marks sets known to be fixed points of transitive closure.
    """

    arrows: frozenset
    closed: bool = False

    def __post_init__(self):
        if Arrow.SELF in self.arrows:
            raise ValueError("Self is implicit and never stored")
        if Arrow.OLD in self.arrows and Arrow.NEW in self.arrows:
            raise ValueError("Old and New together create cycles")

    def sorted_arrows(self) -> tuple[Arrow, ...]:
        return tuple(a for a in ARROW_ORDER if a in self.arrows)


def enumerate_deletion_invariant() -> list[MetaDagClass]:
    """The 96 arrow subsets free of the Old+New cycle, smallest first."""
    out = []
    for r in range(len(SUBSTANTIVE) + 1):
        for combo in combinations(SUBSTANTIVE, r):
            if Arrow.OLD in combo and Arrow.NEW in combo:
                continue
            out.append(MetaDagClass(frozenset(combo)))
    return out


def closure_class(cls: MetaDagClass, table: CompositionTable) -> MetaDagClass:
    """Closure of a class, with Self dropped back out of the stored set."""
    closed = transitive_closure(cls.arrows, table) - {Arrow.SELF}
    return MetaDagClass(frozenset(closed), closed=True)


def enumerate_closed_classes(table: CompositionTable) -> list[MetaDagClass]:
    """The 21 distinct closure fixed points of the 96 subsets.

    Sorted by (size, display order) so output is stable.
    """
    seen: dict[frozenset, MetaDagClass] = {}
    for cls in enumerate_deletion_invariant():
        closed = closure_class(cls, table)
        seen.setdefault(closed.arrows, closed)
    return sorted(
        seen.values(),
        key=lambda c: (len(c.arrows), [ARROW_ORDER.index(a) for a in c.sorted_arrows()]),
    )


def generators(cls: MetaDagClass, table: CompositionTable) -> frozenset:
    """Smallest subset whose closure is the class (ties broken canonically)."""
    members = cls.sorted_arrows()
    for r in range(len(members) + 1):
        for combo in combinations(members, r):
            if transitive_closure(frozenset(combo), table) - {Arrow.SELF} == cls.arrows:
                return frozenset(combo)
    raise AssertionError(f"class {cls} is not closed")  # pragma: no cover


def class_label(cls: MetaDagClass, table: CompositionTable) -> str:
    """Human-readable name: generators, then implied members in parens."""
    gens = generators(cls, table)
    gen_part = "/".join(str(a) for a in ARROW_ORDER if a in gens) or "∅"
    implied = "/".join(str(a) for a in ARROW_ORDER if a in cls.arrows - gens)
    return f"{gen_part} ({implied})" if implied else gen_part


@dataclass(frozen=True)
class HassePoset:
    """The 21 closed classes under inclusion, with covering pairs.

    covers holds (child_index, parent_index) pairs forming the transitive
    reduction of the strict-subset order on arrow sets (Self ignored).
    """

    nodes: tuple[MetaDagClass, ...]
    covers: tuple[tuple[int, int], ...] = field(default_factory=tuple)


def build_hasse(classes: list[MetaDagClass]) -> HassePoset:
    """Transitive reduction of subset inclusion over distinct closed classes."""
    sets = [c.arrows for c in classes]
    if len(set(sets)) != len(sets):
        raise ValueError("duplicate classes")
    n = len(sets)
    lt = [[sets[a] < sets[b] for b in range(n)] for a in range(n)]
    covers = []
    for a in range(n):
        for b in range(n):
            if lt[a][b] and not any(lt[a][c] and lt[c][b] for c in range(n)):
                covers.append((a, b))
    return HassePoset(nodes=tuple(classes), covers=tuple(covers))


def parents_of(child: Dyad, arrows: frozenset, n: int) -> list[tuple[Dyad, Arrow]]:
    """All dyads over 1..n whose relation to `child` is in `arrows`.

    Self is reported only when explicitly requested in `arrows`.
    """
    if child.hi > n:
        raise ValueError(f"child {child} exceeds node count {n}")
    out = []
    for p in all_dyads(n):
        rel = classify_relation(p, child)
        if rel is not None and rel in arrows:
            out.append((p, rel))
    out.sort(key=lambda pr: (pr[0].lo, pr[0].hi))
    return out


# ---------------------------------------------------------------------------
# exports: DOT and CSV
# ---------------------------------------------------------------------------

def hasse_dot(poset: HassePoset, table: CompositionTable) -> str:
    """DOT graph of the poset; one node per class, edges child -> parent."""
    lines = ["digraph hasse {", '  rankdir="BT";', '  node [shape=ellipse];']
    for idx, cls in enumerate(poset.nodes):
        label = class_label(cls, table)
        lines.append(f'  c{idx} [label="{label}"];')
    for child, parent in poset.covers:
        lines.append(f"  c{child} -> c{parent};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def meta_dag_dot(arrows: frozenset, n: int) -> str:
    """DOT graph of the materialized meta-DAG over dyads of 1..n.

    One square node per dyad labeled X_ij; one edge per parent relation,
    tagged with the arrow-type name.
    """
    lines = ["digraph metadag {", "  node [shape=box];"]
    for d in all_dyads(n):
        lines.append(f'  d{d.lo}_{d.hi} [label="X_{d.lo}{d.hi}"];')
    for child in all_dyads(n):
        for parent, rel in parents_of(child, arrows, n):
            lines.append(
                f'  d{parent.lo}_{parent.hi} -> d{child.lo}_{child.hi} [label="{rel}"];'
            )
    lines.append("}")
    return "\n".join(lines) + "\n"


def composition_table_csv(table: CompositionTable) -> str:
    """8x8 grid of set literals; rows act first, columns second."""
    order = list(ARROW_ORDER) + [Arrow.SELF]
    header = "first\\second," + ",".join(str(a) for a in order)
    rows = [header]
    for x in order:
        cells = []
        for y in order:
            members = [str(a) for a in order if a in table(x, y)]
            cells.append("{" + "/".join(members) + "}")
        rows.append(str(x) + "," + ",".join(cells))
    return "\n".join(rows) + "\n"
