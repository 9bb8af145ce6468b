"""Partitions, worlds and satisfaction for the expertise language.

World enumeration order (used by every dense array in the package): worlds
are grouped by their assignment of partitions to the ordinary sources, taken
lexicographically over partition indices with the first ordinary source most
significant; within a group, valuation tuples run lexicographically with the
first case most significant.  The reliable source always has the unit
partition and does not contribute to the index.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterator, Sequence

import numpy as np

from . import config
from .propositional import (
    RELIABLE,
    And,
    Const,
    Expert,
    Formula,
    Iff,
    Implies,
    ModelSet,
    Not,
    Or,
    Signature,
    Sound,
    Var,
    formula_mask,
)


@lru_cache(maxsize=None)
def bell(n: int) -> int:
    """Number of set partitions of an ``n``-element set."""
    row = [1]
    for _ in range(n):
        nxt = [row[-1]]
        for x in row:
            nxt.append(nxt[-1] + x)
        row = nxt
    return row[0]


@dataclass(frozen=True)
class Partition:
    """Set partition of ``range(n)`` as a normalised restricted-growth string.

    ``rgs[v]`` is the cell id of valuation ``v``; ids appear in
    first-occurrence order, so each set partition has exactly one encoding.
    """

    rgs: tuple[int, ...]

    def __post_init__(self):
        top = -1
        for x in self.rgs:
            if x > top + 1 or x < 0:
                raise ValueError(f"not a normalised restricted-growth string: {self.rgs}")
            top = max(top, x)
        if not self.rgs:
            raise ValueError("partition of an empty set")

    @classmethod
    def from_cells(cls, cells: Sequence[Sequence[int]], n: int) -> Partition:
        label = [-1] * n
        for cid, cell in enumerate(cells):
            for v in cell:
                if label[v] != -1:
                    raise ValueError(f"valuation {v} in two cells")
                label[v] = cid
        if -1 in label:
            raise ValueError("cells do not cover every valuation")
        return cls.normalise(label)

    @classmethod
    def normalise(cls, labels: Sequence[int]) -> Partition:
        rename: dict[int, int] = {}
        return cls(tuple(rename.setdefault(x, len(rename)) for x in labels))

    @classmethod
    def unit(cls, n: int) -> Partition:
        return cls(tuple(range(n)))

    @classmethod
    def trivial(cls, n: int) -> Partition:
        """The one-cell partition."""
        return cls((0,) * n)

    @property
    def n(self) -> int:
        return len(self.rgs)

    @cached_property
    def cells(self) -> tuple[int, ...]:
        """Cell masks in cell-id order."""
        masks = [0] * (max(self.rgs) + 1)
        for v, cid in enumerate(self.rgs):
            masks[cid] |= 1 << v
        return tuple(masks)

    def cell_of(self, v: int) -> int:
        return self.cells[self.rgs[v]]

    def __len__(self) -> int:
        return len(self.cells)

    def is_unit(self) -> bool:
        return len(self.cells) == self.n

    def render(self, sig: Signature) -> str:
        return " | ".join(
            ", ".join(sig.valuation_label(v) for v in range(self.n) if (cell >> v) & 1)
            for cell in self.cells
        )


def pi_image(p: Partition, m: ModelSet | int) -> ModelSet:
    """Union of the cells of ``p`` meeting ``m``."""
    mask = m.mask if isinstance(m, ModelSet) else m
    out = 0
    for cell in p.cells:
        if cell & mask:
            out |= cell
    return ModelSet(out, p.n)


def refines(p1: Partition, p2: Partition) -> bool:
    """Every cell of ``p1`` lies inside a cell of ``p2``."""
    if p1.n != p2.n:
        raise ValueError("partitions of different sets")
    return all(p1.cell_of(v) & ~p2.cell_of(v) == 0 for v in range(p1.n))


def enumerate_partitions(n: int, budget: int | None = None) -> Iterator[Partition]:
    """All set partitions of ``range(n)`` in lexicographic RGS order."""
    if n < 1:
        raise ValueError("n must be positive")
    config.check_budget(f"Bell({n}) partitions", bell(n), budget, config.PARTITION_BUDGET)
    a = [0] * n
    top = [0] * n  # top[i] = max(a[:i+1])
    while True:
        yield Partition(tuple(a))
        i = n - 1
        while i > 0 and a[i] == top[i - 1] + 1:
            i -= 1
        if i == 0:
            return
        a[i] += 1
        top[i] = max(top[i - 1], a[i])
        for j in range(i + 1, n):
            a[j] = 0
            top[j] = top[i]


class PartitionTable:
    """All partitions of ``n`` valuations with lookup tables.

    ``image[p, m]`` is the mask of ``Π_p[m]`` for every mask ``m``;
    ``n_cells[p]`` the number of cells.
    """

    def __init__(self, n: int):
        self.n = n
        self.partitions = list(enumerate_partitions(n))
        self.index = {p.rgs: k for k, p in enumerate(self.partitions)}
        size = len(self.partitions)
        cellmask = np.zeros((size, n), dtype=np.int64)
        for k, p in enumerate(self.partitions):
            for v in range(n):
                cellmask[k, v] = p.cell_of(v)
        self.cellmask = cellmask
        image = np.zeros((size, 1 << n), dtype=np.int64)
        for m in range(1, 1 << n):
            low = m & -m
            image[:, m] = image[:, m ^ low] | cellmask[:, low.bit_length() - 1]
        self.image = image
        self.n_cells = np.array([len(p) for p in self.partitions], dtype=np.int64)
        self.unit_index = self.index[tuple(range(n))]
        self.popcount = np.array([bin(m).count("1") for m in range(1 << n)], dtype=np.int64)

    def __len__(self) -> int:
        return len(self.partitions)

    def expert(self, mask: int) -> np.ndarray:
        """Boolean vector over partitions: ``Π[m] = m``."""
        return self.image[:, mask] == mask

    def sound(self, v: int, mask: int) -> np.ndarray:
        """Boolean vector over partitions: ``v ∈ Π[m]``."""
        return ((self.image[:, mask] >> v) & 1).astype(bool)

    @cached_property
    def refines_matrix(self) -> np.ndarray:
        """``R[a, b]`` iff partition ``a`` refines partition ``b``."""
        cm = self.cellmask
        # a refines b iff cell_a(v) ⊆ cell_b(v) for every v
        return np.all((cm[:, None, :] & ~cm[None, :, :]) == 0, axis=2)


@lru_cache(maxsize=None)
def partition_table(n: int) -> PartitionTable:
    config.check_budget(f"Bell({n}) partitions", bell(n), None, config.PARTITION_BUDGET)
    return PartitionTable(n)


@dataclass(frozen=True)
class World:
    """One valuation per case and one partition per source."""

    sig: Signature
    valuations: tuple[int, ...]
    partitions: tuple[Partition, ...]

    def __post_init__(self):
        if len(self.valuations) != len(self.sig.cases):
            raise ValueError("need one valuation per case")
        if len(self.partitions) != len(self.sig.sources):
            raise ValueError("need one partition per source")
        n = self.sig.n_valuations
        if any(not 0 <= v < n for v in self.valuations):
            raise ValueError("valuation index out of range")
        if any(p.n != n for p in self.partitions):
            raise ValueError("partition over the wrong valuation set")
        if not self.partitions[self.sig.source_index(RELIABLE)].is_unit():
            raise ValueError("the reliable source must have the unit partition")

    @classmethod
    def make(cls, sig: Signature, valuations: dict[str, int], partitions: dict[str, Partition]) -> World:
        """Build from name-keyed dicts; unlisted sources get the unit partition."""
        unit = Partition.unit(sig.n_valuations)
        return cls(
            sig,
            tuple(valuations[c] for c in sig.cases),
            tuple(partitions.get(s, unit) for s in sig.sources),
        )

    def valuation(self, case: str) -> int:
        return self.valuations[self.sig.case_index(case)]

    def partition(self, source: str) -> Partition:
        return self.partitions[self.sig.source_index(source)]

    def render(self) -> str:
        vals = " ".join(f"{c}={self.sig.valuation_label(v)}" for c, v in zip(self.sig.cases, self.valuations))
        parts = "  ".join(
            f"{s}: [{p.render(self.sig)}]" for s, p in zip(self.sig.sources, self.partitions) if s != RELIABLE
        )
        return f"{vals}  {parts}".rstrip()


def satisfies(w: World, case: str, f: Formula) -> bool:
    """``W, c ⊨ f`` computed directly from the world's partitions."""
    sig = w.sig
    if isinstance(f, Var):
        return bool((w.valuation(case) >> sig.variable_index(f.name)) & 1)
    if isinstance(f, Const):
        return f.value
    if isinstance(f, Not):
        return not satisfies(w, case, f.arg)
    if isinstance(f, And):
        return satisfies(w, case, f.left) and satisfies(w, case, f.right)
    if isinstance(f, Or):
        return satisfies(w, case, f.left) or satisfies(w, case, f.right)
    if isinstance(f, Implies):
        return not satisfies(w, case, f.left) or satisfies(w, case, f.right)
    if isinstance(f, Iff):
        return satisfies(w, case, f.left) == satisfies(w, case, f.right)
    if isinstance(f, Expert):
        m = formula_mask(f.arg, sig)
        return pi_image(w.partition(f.source), m).mask == m
    if isinstance(f, Sound):
        m = formula_mask(f.arg, sig)
        return w.valuation(case) in pi_image(w.partition(f.source), m)
    raise TypeError(f"unknown formula node {f!r}")


def world_preceq(w1: World, w2: World) -> bool:
    """Every source's partition in ``w1`` refines its partition in ``w2``."""
    return all(refines(a, b) for a, b in zip(w1.partitions, w2.partitions))


def partition_equivalent(w1: World, w2: World) -> bool:
    return w1.partitions == w2.partitions


def world_count(sig: Signature) -> int:
    n = sig.n_valuations
    return n ** len(sig.cases) * bell(n) ** len(sig.ordinary_sources)


def enumerate_worlds(
    sig: Signature, start: int = 0, stop: int | None = None, budget: int | None = None
) -> Iterator[World]:
    """Stream worlds in enumeration order; ``start``/``stop`` slice by index."""
    total = world_count(sig)
    config.check_budget("worlds", total, budget, config.WORLD_BUDGET)
    table = partition_table(sig.n_valuations)
    unit = table.partitions[table.unit_index]
    star = sig.source_index(RELIABLE)
    assignments = itertools.product(table.partitions, repeat=len(sig.ordinary_sources))
    worlds = (
        (vals, parts)
        for parts in assignments
        for vals in itertools.product(range(sig.n_valuations), repeat=len(sig.cases))
    )
    for vals, parts in itertools.islice(worlds, start, stop):
        full = list(parts)
        full.insert(star, unit)
        yield World(sig, vals, tuple(full))


class Universe:
    """Dense enumeration of all worlds of a signature.

    ``vals[w, c]`` is the valuation of world ``w`` at case ``c``;
    ``parts[w, s]`` the partition index of source ``s``;
    ``assignment[w]`` the index of the partition assignment (the group).
    """

    def __init__(self, sig: Signature, budget: int | None = None):
        self.sig = sig
        self.size = world_count(sig)
        config.check_budget("worlds", self.size, budget, config.WORLD_BUDGET)
        self.table = partition_table(sig.n_valuations)
        nv, nc = sig.n_valuations, len(sig.cases)
        nb, no = len(self.table), len(sig.ordinary_sources)
        self.n_tuples = nv**nc
        self.n_assignments = nb**no
        idx = np.arange(self.size, dtype=np.int64)
        self.assignment = idx // self.n_tuples
        tup = idx % self.n_tuples
        self.vals = np.empty((self.size, nc), dtype=np.int64)
        for c in range(nc):
            self.vals[:, c] = (tup // nv ** (nc - 1 - c)) % nv
        self.parts = np.empty((self.size, len(sig.sources)), dtype=np.int64)
        k = 0
        for s, name in enumerate(sig.sources):
            if name == RELIABLE:
                self.parts[:, s] = self.table.unit_index
            else:
                self.parts[:, s] = (self.assignment // nb ** (no - 1 - k)) % nb
                k += 1
        self._sound: dict[tuple[int, int, int], np.ndarray] = {}
        self._expert: dict[tuple[int, int], np.ndarray] = {}

    @property
    def grid_shape(self) -> tuple[int, ...]:
        """Shape that views a world array as ``(assignment, v_c1, v_c2, ...)``."""
        return (self.n_assignments,) + (self.sig.n_valuations,) * len(self.sig.cases)

    def world(self, index: int) -> World:
        t = self.table.partitions
        return World(
            self.sig,
            tuple(int(v) for v in self.vals[index]),
            tuple(t[int(p)] for p in self.parts[index]),
        )

    def index_of(self, w: World) -> int:
        nv, nb = self.sig.n_valuations, len(self.table)
        a = 0
        for s, p in zip(self.sig.sources, w.partitions):
            if s != RELIABLE:
                a = a * nb + self.table.index[p.rgs]
        t = 0
        for v in w.valuations:
            t = t * nv + v
        return a * self.n_tuples + t

    def __iter__(self) -> Iterator[World]:
        return (self.world(i) for i in range(self.size))

    def __len__(self) -> int:
        return self.size

    def sound(self, source: str, case: str, mask: int) -> np.ndarray:
        """Boolean vector over worlds: ``W, case ⊨ S_source(m)``."""
        key = (self.sig.source_index(source), self.sig.case_index(case), mask)
        arr = self._sound.get(key)
        if arr is None:
            s, c, _ = key
            images = self.table.image[self.parts[:, s], mask]
            arr = ((images >> self.vals[:, c]) & 1).astype(bool)
            arr.setflags(write=False)
            self._sound[key] = arr
        return arr

    def expert(self, source: str, mask: int) -> np.ndarray:
        """Boolean vector over worlds: ``E_source(m)`` (case independent)."""
        key = (self.sig.source_index(source), mask)
        arr = self._expert.get(key)
        if arr is None:
            arr = self.table.expert(mask)[self.parts[:, key[0]]]
            arr.setflags(write=False)
            self._expert[key] = arr
        return arr

    def valuation_in(self, case: str, mask: int) -> np.ndarray:
        c = self.sig.case_index(case)
        return ((mask >> self.vals[:, c]) & 1).astype(bool)

    def truth(self, case: str, f: Formula) -> np.ndarray:
        """Boolean vector over worlds: ``W, case ⊨ f``."""
        if f.is_propositional():
            return self.valuation_in(case, formula_mask(f, self.sig))
        if isinstance(f, Expert):
            return self.expert(f.source, formula_mask(f.arg, self.sig))
        if isinstance(f, Sound):
            return self.sound(f.source, case, formula_mask(f.arg, self.sig))
        if isinstance(f, Not):
            return ~self.truth(case, f.arg)
        a, b = self.truth(case, f.left), self.truth(case, f.right)
        if isinstance(f, And):
            return a & b
        if isinstance(f, Or):
            return a | b
        if isinstance(f, Implies):
            return ~a | b
        if isinstance(f, Iff):
            return a == b
        raise TypeError(f"unknown formula node {f!r}")


@lru_cache(maxsize=32)
def get_universe(sig: Signature) -> Universe:
    return Universe(sig)


def is_valid(f: Formula, sig: Signature) -> bool:
    """``f`` holds at every world and every case."""
    u = get_universe(sig)
    return all(bool(u.truth(c, f).all()) for c in sig.cases)
