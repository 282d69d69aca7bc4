"""Arrow classification, composition, closure, enumeration, and poset tests."""

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dyadgen.arrows import (
    ARROW_ORDER,
    Arrow,
    Dyad,
    build_hasse,
    class_label,
    classify_relation,
    closure_class,
    compose_sets,
    composition_table_csv,
    derive_composition_table,
    enumerate_closed_classes,
    enumerate_deletion_invariant,
    generators,
    hasse_dot,
    meta_dag_dot,
    parents_of,
    transitive_closure,
)

A = Arrow


@pytest.fixture(scope="module")
def table():
    return derive_composition_table()


def dyads(n):
    return [Dyad(i, j) for i in range(1, n) for j in range(i + 1, n + 1)]


# ---------------------------------------------------------------------------
# classification
# ---------------------------------------------------------------------------

@pytest.mark.parametrize(
    "parent,child,expected",
    [
        ((1, 2), (1, 3), A.HUB),
        ((2, 3), (1, 4), A.NEAR),
        ((1, 2), (1, 2), A.SELF),
        ((1, 2), (3, 4), A.FAR),
        ((1, 3), (2, 4), A.MID),
        ((1, 3), (2, 3), A.OLD),
        ((2, 3), (1, 3), A.NEW),
        ((1, 2), (2, 3), A.PATH),
        ((3, 4), (1, 2), None),
        ((1, 4), (2, 3), None),
        ((2, 4), (1, 3), None),
        ((3, 4), (1, 2), None),
        ((1, 3), (1, 2), None),
        ((2, 3), (1, 2), None),
    ],
)
def test_classification_patterns(parent, child, expected):
    assert classify_relation(Dyad(*parent), Dyad(*child)) == expected


def test_dyad_validation():
    with pytest.raises(ValueError):
        Dyad(3, 3)
    with pytest.raises(ValueError):
        Dyad(5, 2)
    with pytest.raises(ValueError):
        Dyad(0, 1)


def test_thirteen_patterns_exhaustive():
    """Every ordered dyad pair lands in one of 13 patterns; 5 map to None."""
    seen_types = set()
    for p in dyads(8):
        for c in dyads(8):
            rel = classify_relation(p, c)
            if rel is None:
                assert p.hi > c.hi  # the excluded patterns all reach past the child
            else:
                assert p.hi <= c.hi
                seen_types.add(rel)
    assert seen_types == set(Arrow)


@given(st.integers(1, 40), st.integers(1, 40), st.integers(1, 40), st.integers(1, 40))
def test_classification_total_and_translation_invariant(a, b, c, d):
    nodes = sorted({a, b, c, d})
    if len({a, b}) < 2 or len({c, d}) < 2:
        return
    p = Dyad(min(a, b), max(a, b))
    q = Dyad(min(c, d), max(c, d))
    rel = classify_relation(p, q)
    if p != q:
        assert rel is None or rel != A.SELF
    # shifting all labels preserves the relative-order pattern
    shift = 7
    p2 = Dyad(p.lo + shift, p.hi + shift)
    q2 = Dyad(q.lo + shift, q.hi + shift)
    assert classify_relation(p2, q2) == rel


# ---------------------------------------------------------------------------
# composition table
# ---------------------------------------------------------------------------

def test_anchor_cells(table):
    assert table(A.PATH, A.PATH) == {A.FAR}
    assert table(A.HUB, A.OLD) == {A.MID, A.PATH, A.FAR}
    assert table(A.OLD, A.HUB) == {A.MID}


def test_self_is_identity(table):
    for x in Arrow:
        assert table(A.SELF, x) == {x}
        assert table(x, A.SELF) == {x}


def test_table_stable_across_node_ranges(table):
    assert table == derive_composition_table(6)
    assert table == derive_composition_table(8)


def test_table_rejects_small_ranges():
    with pytest.raises(ValueError):
        derive_composition_table(5)


def test_every_cell_nonempty_and_self_only_from_inverses(table):
    """Each composed pair is realizable; Self arises only from the mutually
    inverse Old/New pair (and Self*Self itself)."""
    self_cells = {(A.OLD, A.NEW), (A.NEW, A.OLD), (A.SELF, A.SELF)}
    for (x, y), out in table.items():
        assert out, f"{x}*{y} empty"
        assert (A.SELF in out) == ((x, y) in self_cells)


def test_compose_sets_examples(table):
    s = frozenset({A.SELF, A.HUB, A.PATH})
    assert compose_sets(s, s, table) == frozenset({A.SELF, A.HUB, A.PATH, A.FAR})
    assert compose_sets(frozenset(), frozenset({A.HUB}), table) == frozenset()
    assert compose_sets(frozenset({A.HUB}), frozenset(), table) == frozenset()
    # closure step for Mid: composing {Self, Mid} with itself brings in
    # Path and Far (the implied members of the Mid class)
    m = frozenset({A.SELF, A.MID})
    assert compose_sets(m, m, table) >= frozenset({A.MID, A.PATH, A.FAR})


# ---------------------------------------------------------------------------
# transitive closure
# ---------------------------------------------------------------------------

def test_closure_examples(table):
    assert transitive_closure(frozenset({A.SELF, A.HUB, A.PATH}), table) == {
        A.SELF, A.HUB, A.PATH, A.FAR,
    }
    assert transitive_closure(frozenset({A.SELF}), table) == {A.SELF}
    assert transitive_closure(frozenset({A.MID}), table) == {A.SELF, A.MID, A.PATH, A.FAR}
    assert transitive_closure(frozenset({A.HUB, A.NEW}), table) == {
        A.SELF, A.HUB, A.NEW, A.NEAR,
    }


def test_closure_lattice_properties(table):
    """Extensive, monotone, idempotent over all 96 inputs (and subset pairs)."""
    all96 = [c.arrows for c in enumerate_deletion_invariant()]
    closures = {s: transitive_closure(s, table) for s in all96}
    for s, cl in closures.items():
        assert s <= cl  # extensive
        assert transitive_closure(cl, table) == cl  # idempotent
        # closure of an acyclic set never invents Old or New
        assert (A.OLD in cl) == (A.OLD in s)
        assert (A.NEW in cl) == (A.NEW in s)
    for s, t in itertools.product(all96, all96):
        if s <= t:
            assert closures[s] <= closures[t]  # monotone


# ---------------------------------------------------------------------------
# enumeration: 96 -> 21
# ---------------------------------------------------------------------------

EXPECTED_21_LABELS = [
    "∅",
    "Old",
    "Far",
    "Hub",
    "Near",
    "New",
    "Old/Far",
    "Path (Far)",
    "Far/Hub",
    "Hub/Near",
    "Near/New",
    "Old/Path (Far)",
    "Mid (Path/Far)",
    "Path/Hub (Far)",
    "Hub/New (Near)",
    "Old/Mid (Path/Far)",
    "Mid/Hub (Path/Far)",
    "Old/Hub (Mid/Path/Far)",
    "Mid/Near (Path/Far/Hub)",
    "Old/Near (Mid/Path/Far/Hub)",
    "Mid/New (Path/Far/Hub/Near)",
]


def test_enumerate_96():
    subsets = enumerate_deletion_invariant()
    assert len(subsets) == 96
    assert len({c.arrows for c in subsets}) == 96
    assert frozenset() in {c.arrows for c in subsets}
    assert frozenset({A.OLD, A.NEW}) not in {c.arrows for c in subsets}


def test_enumerate_21_and_partition(table):
    classes = enumerate_closed_classes(table)
    assert len(classes) == 21
    class_sets = {c.arrows for c in classes}
    assert frozenset({A.OLD, A.NEAR, A.MID, A.PATH, A.FAR, A.HUB}) in class_sets
    for cls in classes:
        assert transitive_closure(cls.arrows, table) - {A.SELF} == cls.arrows
    # each of the 96 maps to exactly one of the 21
    hits = {s: 0 for s in class_sets}
    for sub in enumerate_deletion_invariant():
        hits[closure_class(sub, table).arrows] += 1
    assert sum(hits.values()) == 96
    assert all(v >= 1 for v in hits.values())


def test_class_labels_match_expected(table):
    classes = enumerate_closed_classes(table)
    assert [class_label(c, table) for c in classes] == EXPECTED_21_LABELS


def test_generators_regenerate(table):
    for cls in enumerate_closed_classes(table):
        gens = generators(cls, table)
        assert transitive_closure(gens, table) - {A.SELF} == cls.arrows


# ---------------------------------------------------------------------------
# Hasse poset
# ---------------------------------------------------------------------------

EXPECTED_COVERS = {
    ("∅", "Old"), ("∅", "Far"), ("∅", "Hub"), ("∅", "Near"),
    ("∅", "New"),
    ("Old", "Old/Far"),
    ("Far", "Old/Far"), ("Far", "Path (Far)"), ("Far", "Far/Hub"),
    ("Hub", "Far/Hub"), ("Hub", "Hub/Near"),
    ("Near", "Hub/Near"), ("Near", "Near/New"),
    ("New", "Near/New"),
    ("Old/Far", "Old/Path (Far)"),
    ("Path (Far)", "Old/Path (Far)"), ("Path (Far)", "Mid (Path/Far)"),
    ("Path (Far)", "Path/Hub (Far)"),
    ("Far/Hub", "Path/Hub (Far)"),
    ("Hub/Near", "Mid/Near (Path/Far/Hub)"), ("Hub/Near", "Hub/New (Near)"),
    ("Near/New", "Hub/New (Near)"),
    ("Old/Path (Far)", "Old/Mid (Path/Far)"),
    ("Mid (Path/Far)", "Old/Mid (Path/Far)"), ("Mid (Path/Far)", "Mid/Hub (Path/Far)"),
    ("Path/Hub (Far)", "Mid/Hub (Path/Far)"),
    ("Mid/Hub (Path/Far)", "Old/Hub (Mid/Path/Far)"),
    ("Mid/Hub (Path/Far)", "Mid/Near (Path/Far/Hub)"),
    ("Old/Mid (Path/Far)", "Old/Hub (Mid/Path/Far)"),
    ("Old/Hub (Mid/Path/Far)", "Old/Near (Mid/Path/Far/Hub)"),
    ("Hub/New (Near)", "Mid/New (Path/Far/Hub/Near)"),
    ("Mid/Near (Path/Far/Hub)", "Mid/New (Path/Far/Hub/Near)"),
    ("Mid/Near (Path/Far/Hub)", "Old/Near (Mid/Path/Far/Hub)"),
}


def test_hasse_covers_match_reference(table):
    classes = enumerate_closed_classes(table)
    poset = build_hasse(classes)
    labels = [class_label(c, table) for c in classes]
    got = {(labels[a], labels[b]) for a, b in poset.covers}
    assert got == EXPECTED_COVERS
    assert len(poset.covers) == 33


def test_hasse_is_transitive_reduction(table):
    classes = enumerate_closed_classes(table)
    poset = build_hasse(classes)
    sets = [c.arrows for c in classes]
    n = len(sets)
    # reachability through covers equals strict inclusion
    reach = [[False] * n for _ in range(n)]
    for a, b in poset.covers:
        reach[a][b] = True
    for k in range(n):
        for i in range(n):
            for j in range(n):
                reach[i][j] = reach[i][j] or (reach[i][k] and reach[k][j])
    for i in range(n):
        for j in range(n):
            assert reach[i][j] == (sets[i] < sets[j])
    # no cover is implied by a two-step path
    cover_set = set(poset.covers)
    for a, b in cover_set:
        for c in range(n):
            assert not (sets[a] < sets[c] < sets[b])


def test_hasse_rejects_duplicates(table):
    classes = enumerate_closed_classes(table)
    with pytest.raises(ValueError):
        build_hasse(classes + [classes[0]])


# ---------------------------------------------------------------------------
# parents_of and exports
# ---------------------------------------------------------------------------

def test_parents_of_examples():
    assert parents_of(Dyad(1, 3), frozenset({A.HUB}), 5) == [(Dyad(1, 2), A.HUB)]
    assert parents_of(Dyad(2, 5), frozenset({A.PATH}), 5) == [(Dyad(1, 2), A.PATH)]
    assert parents_of(Dyad(3, 4), frozenset({A.FAR}), 5) == [(Dyad(1, 2), A.FAR)]


def test_parents_of_self_excluded_unless_requested():
    child = Dyad(2, 3)
    plain = parents_of(child, frozenset({A.HUB, A.PATH}), 5)
    assert (child, A.SELF) not in plain
    with_self = parents_of(child, frozenset({A.SELF}), 5)
    assert with_self == [(child, A.SELF)]


def test_parents_of_range_check():
    with pytest.raises(ValueError):
        parents_of(Dyad(2, 9), frozenset({A.HUB}), 5)


def test_hasse_dot_shape(table):
    classes = enumerate_closed_classes(table)
    poset = build_hasse(classes)
    dot = hasse_dot(poset, table)
    assert dot.count("label=") == 21
    assert dot.count("->") == 33


def test_meta_dag_dot_counts(table):
    dot = meta_dag_dot(frozenset({A.HUB, A.PATH}), 5)
    assert dot.count('[label="X_') == 10  # C(5,2) dyads
    edges = sum(
        len(parents_of(c, frozenset({A.HUB, A.PATH}), 5)) for c in dyads(5)
    )
    assert dot.count("->") == edges


def test_composition_csv_shape(table):
    csv = composition_table_csv(table)
    lines = csv.strip().splitlines()
    assert len(lines) == 9  # header + 8 rows
    assert lines[0].startswith("first\\second,")
    assert "{Far}" in csv  # Path*Path cell
