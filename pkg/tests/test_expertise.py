import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracle
from expertrev import config
from expertrev.errors import BudgetExceeded
from expertrev.expertise import (
    Partition,
    Universe,
    World,
    bell,
    enumerate_partitions,
    enumerate_worlds,
    get_universe,
    is_valid,
    partition_equivalent,
    partition_table,
    pi_image,
    refines,
    satisfies,
    world_count,
    world_preceq,
)
from expertrev.propositional import Expert, Signature, Sound, Var, parse_expertise_formula

from test_propositional import expertise_formulas

SIG = Signature(["x", "y"], ["c1", "c2"], ["*", "a", "b"])
SIG3 = Signature(["x", "y", "z"], ["c"], ["*", "a"])


def test_bell_numbers():
    assert [bell(n) for n in range(9)] == [1, 1, 2, 5, 15, 52, 203, 877, 4140]


@pytest.mark.parametrize("n", range(1, 7))
def test_partition_enumeration_is_complete_and_normalised(n):
    parts = list(enumerate_partitions(n))
    assert len(parts) == bell(n)
    assert len({p.rgs for p in parts}) == len(parts)
    assert [p.rgs for p in parts] == sorted(p.rgs for p in parts)
    for p in parts:
        assert p.rgs[0] == 0
        assert all(p.rgs[k] <= max(p.rgs[:k]) + 1 for k in range(1, n))


def set_partitions(items):
    # reference enumeration by recursive insertion
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for smaller in set_partitions(rest):
        for k in range(len(smaller)):
            yield smaller[:k] + [[first] + smaller[k]] + smaller[k + 1:]
        yield [[first]] + smaller


@pytest.mark.parametrize("n", range(1, 6))
def test_partitions_match_recursive_reference(n):
    ref = {frozenset(frozenset(c) for c in p) for p in set_partitions(list(range(n)))}
    ours = {frozenset(oracle.cells(p)) for p in enumerate_partitions(n)}
    assert ours == ref


def test_partition_budget():
    with pytest.raises(BudgetExceeded):
        list(enumerate_partitions(8, budget=100))


def test_unit_and_trivial():
    assert Partition.unit(4).is_unit()
    assert len(Partition.trivial(4)) == 1
    assert Partition.from_cells([[2, 0], [1, 3]], 4) == Partition.normalise([5, 7, 5, 7])


def test_render_uses_bar_notation():
    p = Partition.from_cells([[3, 2], [1, 0]], 4)
    labels = [SIG.valuation_label(k) for k in range(4)]
    assert p.render(SIG) == f"{labels[0]}, {labels[1]} | {labels[2]}, {labels[3]}"


@given(st.integers(0, bell(4) - 1), st.integers(0, 15))
def test_image_table_matches_oracle(k, m):
    table = partition_table(4)
    p = table.partitions[k]
    ms = frozenset(v for v in range(4) if (m >> v) & 1)
    assert set(pi_image(p, m)) == oracle.image(p, ms)
    assert table.image[k, m] == pi_image(p, m).mask


def test_refines_matrix_matches_definition():
    table = partition_table(4)
    for a, b in itertools.product(range(len(table)), repeat=2):
        pa, pb = table.partitions[a], table.partitions[b]
        assert table.refines_matrix[a, b] == oracle.refines(pa, pb) == refines(pa, pb)


def test_universe_size_and_order():
    u = get_universe(SIG)
    assert u.size == world_count(SIG) == 15 * 15 * 16 == 3600
    streamed = list(enumerate_worlds(SIG))
    assert len(streamed) == u.size
    for i in (0, 1, 17, 1234, 3599):
        assert u.world(i) == streamed[i]
        assert u.index_of(streamed[i]) == i
    assert all(oracle.star_unit_ok(w) for w in streamed[::97])


def test_enumerate_worlds_slices():
    ws = list(enumerate_worlds(SIG, 100, 105))
    u = get_universe(SIG)
    assert ws == [u.world(i) for i in range(100, 105)]


def test_world_budget():
    with pytest.raises(BudgetExceeded):
        Universe(SIG, budget=1000)


def test_world_requires_unit_reliable_partition():
    with pytest.raises(ValueError):
        World.make(SIG, {"c1": 0, "c2": 0}, {"*": Partition.trivial(4)})


@settings(max_examples=60, deadline=None)
@given(expertise_formulas(), st.integers(0, 10**9))
def test_vector_truth_matches_scalar_and_oracle(f, i):
    # the generated formulas may name source b, absent from SIG3
    f = parse_expertise_formula(str(f).replace("(b,", "(a,"), SIG3)
    u = get_universe(SIG3)
    j = i % u.size
    w = u.world(j)
    assert bool(u.truth("c", f)[j]) == satisfies(w, "c", f) == oracle.holds(w, "c", f)


def test_vector_truth_exhaustive_small():
    sig = Signature(["x"], ["c", "d"], ["*", "a", "b"])
    u = get_universe(sig)
    worlds = list(u)
    for src in sig.sources:
        for text in ("x", "!x", "x | !x"):
            for f in (Expert(src, parse_expertise_formula(text, sig)), Sound(src, parse_expertise_formula(text, sig))):
                for case in sig.cases:
                    assert list(u.truth(case, f)) == [oracle.holds(w, case, f) for w in worlds]


def test_preceq_and_partition_equivalence():
    u = get_universe(SIG)
    rng = np.random.default_rng(3)
    for i, j in rng.integers(0, u.size, size=(300, 2)):
        w1, w2 = u.world(int(i)), u.world(int(j))
        expected = all(oracle.refines(p, q) for p, q in zip(w1.partitions, w2.partitions))
        assert world_preceq(w1, w2) == expected
        assert partition_equivalent(w1, w2) == (w1.partitions == w2.partitions)


def test_is_valid():
    x = Var("x")
    assert is_valid(Expert("*", x), SIG)
    assert is_valid(Sound("*", x).iff(x), SIG)
    assert not is_valid(Expert("a", x), SIG)


def test_cached_table_respects_budget(monkeypatch):
    partition_table.cache_clear()
    monkeypatch.setattr(config, "PARTITION_BUDGET", 10)
    with pytest.raises(BudgetExceeded):
        partition_table(4)
    monkeypatch.undo()
    partition_table.cache_clear()
    assert len(partition_table(4)) == 15
