"""Report sequences and the model-based belief change operators.

An operator maps a report sequence to a pair of world sets: the possible
worlds (knowledge) and, inside it, the most plausible worlds (belief).
Four concrete operators are provided: ``weak-mb``, ``var-based-cond``,
``part-based-cond`` and ``excess-min``.

Scores use exact integers.  In the scalar API ``math.inf`` marks an
infinite score; dense score vectors use the saturating sentinel
:data:`INF_SCORE`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Sequence

import numpy as np

from . import config
from .collection import CaseCollection, WorldSet, mod_of, prop_belief_models
from .errors import BottomReportError, BudgetExceeded, NotApplicable, UnknownNameError
from .expertise import Universe, World, get_universe, pi_image, world_count
from .propositional import (
    RELIABLE,
    Formula,
    ModelSet,
    Signature,
    Sound,
    compact_formula,
    models,
    parse_formula,
)

INF_SCORE = np.int64(1 << 60)

OPERATOR_NAMES = ("weak-mb", "var-based-cond", "part-based-cond", "excess-min")


@dataclass(frozen=True)
class Report:
    """Source ``source`` reports ``formula`` to hold in case ``case``."""

    source: str
    case: str
    formula: Formula
    models: ModelSet

    @classmethod
    def make(cls, sig: Signature, source: str, case: str, formula: Formula | str | int) -> Report:
        sig.source_index(source)
        sig.case_index(case)
        if isinstance(formula, str):
            formula = parse_formula(formula, sig)
        elif isinstance(formula, (int, np.integer)):
            formula = compact_formula(int(formula), sig)
        m = models(formula, sig)
        if not m:
            raise BottomReportError(f"report <{source}, {case}, {formula}> is unsatisfiable")
        return cls(source, case, formula, m)

    @property
    def mask(self) -> int:
        return self.models.mask

    @property
    def key(self) -> tuple[str, str, int]:
        return (self.source, self.case, self.models.mask)

    def __str__(self) -> str:
        return f"<{self.source}, {self.case}, {self.formula}>"

    def to_list(self) -> list[str]:
        return [self.source, self.case, str(self.formula)]


class ReportSequence(Sequence[Report]):
    """Immutable finite sequence of reports over one signature."""

    __slots__ = ("sig", "reports")

    def __init__(self, sig: Signature, reports: Iterable[Report] = ()):
        self.sig = sig
        self.reports = tuple(reports)

    @classmethod
    def of(cls, sig: Signature, triples: Iterable[tuple[str, str, Formula | str | int]]) -> ReportSequence:
        return cls(sig, (Report.make(sig, s, c, f) for s, c, f in triples))

    def __len__(self) -> int:
        return len(self.reports)

    def __getitem__(self, i):
        if isinstance(i, slice):
            return ReportSequence(self.sig, self.reports[i])
        return self.reports[i]

    def __iter__(self) -> Iterator[Report]:
        return iter(self.reports)

    def __add__(self, other: ReportSequence | Report) -> ReportSequence:
        if isinstance(other, Report):
            return ReportSequence(self.sig, self.reports + (other,))
        return ReportSequence(self.sig, self.reports + other.reports)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, ReportSequence) and self.sig == other.sig and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    @property
    def key(self) -> tuple[tuple[str, str, int], ...]:
        return tuple(r.key for r in self.reports)

    def restrict(self, case: str) -> frozenset[tuple[str, int]]:
        """The ``case``-reports as a set of ``(source, mask)`` pairs."""
        return frozenset((r.source, r.mask) for r in self.reports if r.case == case)

    def __str__(self) -> str:
        return "(" + ", ".join(str(r) for r in self.reports) + ")"

    __repr__ = __str__

    def to_list(self) -> list[list[str]]:
        return [r.to_list() for r in self.reports]


def soundness_collection(seq: ReportSequence) -> CaseCollection:
    """For each case, the soundness statements of its reports."""
    entries: dict[str, set] = {}
    for r in seq:
        entries.setdefault(r.case, set()).add(Sound(r.source, r.formula))
    return CaseCollection(seq.sig, entries)


def star_consistent(seq: ReportSequence) -> bool:
    """Reports of the reliable source are jointly satisfiable per case."""
    common = {c: seq.sig.full_mask for c in seq.sig.cases}
    for r in seq:
        if r.source == RELIABLE:
            common[r.case] &= r.mask
    return all(common.values())


# --------------------------------------------------------------------------
# Outputs


@dataclass(frozen=True)
class OperatorOutput:
    """Possible worlds ``possible ⊇ plausible``."""

    possible: WorldSet
    plausible: WorldSet

    def _set(self, which: str) -> WorldSet:
        if which == "plausible":
            return self.plausible
        if which == "possible":
            return self.possible
        raise ValueError(f"unknown world set {which!r}")

    def holds(self, case: str, f: Formula, which: str = "plausible") -> bool:
        return self._set(which).all_satisfy(case, f)

    def prop_models(self, case: str, which: str = "plausible") -> ModelSet:
        return prop_belief_models(self._set(which), case)

    @property
    def possible_count(self) -> int:
        return len(self.possible)

    @property
    def plausible_count(self) -> int:
        return len(self.plausible)


def in_knowledge(out, case: str, f: Formula) -> bool:
    """``f ∈ K_case``: ``f`` holds at ``case`` in every possible world."""
    return out.holds(case, f, "possible")


def in_belief(out, case: str, f: Formula) -> bool:
    """``f ∈ B_case``: ``f`` holds at ``case`` in every plausible world."""
    return out.holds(case, f, "plausible")


# --------------------------------------------------------------------------
# Rankings and scores


class RankFunction:
    """Total preorder on worlds given by an integer rank (lower is more plausible).

    ``vectorized(universe)`` may supply the rank of every world at once; it
    must agree with ``func`` world by world.
    """

    def __init__(self, func: Callable[[World], int], vectorized=None, name: str | None = None):
        self.func = func
        self.vectorized = vectorized
        self.name = name or getattr(func, "__name__", "rank")
        self._cache: dict[int, tuple[Universe, np.ndarray]] = {}

    def __call__(self, w: World) -> int:
        return self.func(w)

    def array(self, universe: Universe) -> np.ndarray:
        hit = self._cache.get(id(universe))
        arr = hit[1] if hit is not None and hit[0] is universe else None
        if arr is None:
            if self.vectorized is not None:
                arr = np.asarray(self.vectorized(universe), dtype=np.int64)
            else:
                arr = np.fromiter((self.func(w) for w in universe), dtype=np.int64, count=universe.size)
            arr.setflags(write=False)
            self._cache[id(universe)] = (universe, arr)
        return arr

    def __repr__(self) -> str:
        return f"RankFunction({self.name})"


def var_rank(w: World) -> int:
    """Minus the number of (source, variable) pairs with expertise."""
    sig = w.sig
    total = 0
    for p in w.partitions:
        for v in sig.variables:
            m = sig.variable_mask(v)
            total += pi_image(p, m).mask == m
    return -total


def part_rank(w: World) -> int:
    """Minus the total number of cells over all sources."""
    return -sum(len(p) for p in w.partitions)


def _var_rank_vector(u: Universe) -> np.ndarray:
    table = u.table
    per_partition = np.zeros(len(table), dtype=np.int64)
    for v in u.sig.variables:
        per_partition += table.expert(u.sig.variable_mask(v))
    return -per_partition[u.parts].sum(axis=1)


def _part_rank_vector(u: Universe) -> np.ndarray:
    return -u.table.n_cells[u.parts].sum(axis=1)


VAR_RANK = RankFunction(var_rank, _var_rank_vector, "var-rank")
PART_RANK = RankFunction(part_rank, _part_rank_vector, "part-rank")
CONSTANT_RANK = RankFunction(lambda w: 0, lambda u: np.zeros(u.size, dtype=np.int64), "constant")


def _saturate(values) -> np.ndarray:
    return np.minimum(np.asarray(values, dtype=np.int64), INF_SCORE)


def _to_score_vector(values: Iterable) -> np.ndarray:
    return _saturate([INF_SCORE if x == math.inf else x for x in values])


class ScoreFunction:
    """Prior implausibility plus per-report disagreement, values in ℕ ∪ {∞}."""

    def __init__(
        self,
        prior: Callable[[World], int | float],
        disagreement: Callable[[World, Report], int | float],
        prior_vector=None,
        disagreement_vector=None,
        name: str = "score",
    ):
        self.prior = prior
        self.disagreement = disagreement
        self.prior_vector = prior_vector
        self.disagreement_vector = disagreement_vector
        self.name = name

    def prior_values(self, u: Universe) -> np.ndarray:
        if self.prior_vector is not None:
            return _saturate(self.prior_vector(u))
        return _to_score_vector(self.prior(w) for w in u)

    def disagreement_values(self, u: Universe, r: Report) -> np.ndarray:
        if self.disagreement_vector is not None:
            return _saturate(self.disagreement_vector(u, r))
        return _to_score_vector(self.disagreement(w, r) for w in u)

    def total(self, w: World, seq: ReportSequence) -> int | float:
        """``r_σ(W)`` for a single world, with ``∞ + n = ∞``."""
        total = self.prior(w)
        for r in seq:
            total += self.disagreement(w, r)
        return total

    def __repr__(self) -> str:
        return f"ScoreFunction({self.name})"


def excess_min_d(w: World, r: Report) -> int | float:
    """Size of the excess ``Π_i[φ] \\ mods0(φ)`` when the report is sound, else ∞."""
    image = pi_image(w.partition(r.source), r.models)
    if w.valuation(r.case) not in image:
        return math.inf
    return len(image - r.models)


def _excess_vector(u: Universe, r: Report) -> np.ndarray:
    s = u.sig.source_index(r.source)
    images = u.table.image[u.parts[:, s], r.mask]
    excess = u.table.popcount[images & ~r.mask]
    return np.where(u.sound(r.source, r.case, r.mask), excess, INF_SCORE)


EXCESS_MIN = ScoreFunction(
    lambda w: 0,
    excess_min_d,
    lambda u: np.zeros(u.size, dtype=np.int64),
    _excess_vector,
    "excess-min",
)


# --------------------------------------------------------------------------
# Dense evaluation


def _resolve(seq: ReportSequence, universe: Universe | None) -> Universe:
    return get_universe(seq.sig) if universe is None else universe


def possible_worlds(seq: ReportSequence, universe: Universe | None = None,
                    prior: CaseCollection | None = None) -> WorldSet:
    """Worlds where every report is sound (intersected with the prior's models)."""
    u = _resolve(seq, universe)
    arr = np.ones(u.size, dtype=bool)
    for r in seq:
        arr &= u.sound(r.source, r.case, r.mask)
    if prior is not None and not prior.is_empty():
        arr &= mod_of(prior, u).array
    return WorldSet(u, arr)


def weak_mb(seq: ReportSequence, universe: Universe | None = None,
            prior: CaseCollection | None = None) -> OperatorOutput:
    x = possible_worlds(seq, universe, prior)
    return OperatorOutput(x, x)


def _argmin(x: WorldSet, values: np.ndarray) -> WorldSet:
    if not x:
        return x
    best = values[x.array].min()
    return WorldSet(x.universe, x.array & (values == best))


def conditioning(seq: ReportSequence, rank: RankFunction, universe: Universe | None = None,
                 prior: CaseCollection | None = None) -> OperatorOutput:
    """Plausible worlds are the rank-minimal possible worlds."""
    x = possible_worlds(seq, universe, prior)
    return OperatorOutput(x, _argmin(x, rank.array(x.universe)))


def score_based(seq: ReportSequence, score: ScoreFunction, universe: Universe | None = None,
                prior: CaseCollection | None = None) -> OperatorOutput:
    """Possible worlds have finite total score; plausible ones minimise it."""
    u = _resolve(seq, universe)
    total = score.prior_values(u)
    for r in seq:
        total = _saturate(total + score.disagreement_values(u, r))
    finite = total < INF_SCORE
    if prior is not None and not prior.is_empty():
        finite &= mod_of(prior, u).array
    x = WorldSet(u, finite)
    return OperatorOutput(x, _argmin(x, total))


# --------------------------------------------------------------------------
# Operator objects


class Operator:
    """A belief change operator bound to one signature, with memoised outputs.

    Subclasses implement :meth:`compute`.  ``evaluate`` caches by the
    semantic key of the sequence (sources, cases and model masks).
    """

    name = "operator"
    is_conditioning = False

    def __init__(self, sig: Signature, prior: CaseCollection | None = None, engine: str = "auto"):
        if engine not in ("auto", "brute", "decomposed"):
            raise ValueError(f"unknown engine {engine!r}")
        self.sig = sig
        self.prior = prior
        self.engine = engine
        self._cache: dict = {}

    @property
    def universe(self) -> Universe:
        return get_universe(self.sig)

    def uses_decomposition(self) -> bool:
        if self.engine == "decomposed":
            return True
        if self.engine == "brute":
            return False
        size = world_count(self.sig)
        if size > config.WORLD_BUDGET and self.prior is not None and not self.prior.is_empty():
            raise BudgetExceeded("worlds (prior knowledge needs dense evaluation)", size, config.WORLD_BUDGET)
        return size > config.WORLD_BUDGET

    def evaluate(self, seq: ReportSequence):
        if seq.sig != self.sig:
            raise ValueError("sequence over a different signature")
        out = self._cache.get(seq.key)
        if out is None:
            out = self.compute(seq)
            self._cache[seq.key] = out
        return out

    __call__ = evaluate

    def compute(self, seq: ReportSequence):
        raise NotImplementedError

    def clear_cache(self) -> None:
        self._cache.clear()

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.name!r})"


class WeakMB(Operator):
    name = "weak-mb"

    def compute(self, seq):
        if self.uses_decomposition():
            from .decomposed import decomposed_eval

            return decomposed_eval(seq, self.name)
        return weak_mb(seq, self.universe, self.prior)


class ConditioningOperator(Operator):
    is_conditioning = True

    def __init__(self, sig, rank: RankFunction, name: str | None = None, **kwargs):
        super().__init__(sig, **kwargs)
        self.rank = rank
        self.name = name or f"cond[{rank.name}]"

    def compute(self, seq):
        if self.uses_decomposition():
            from .decomposed import decomposed_eval

            return decomposed_eval(seq, self.name)
        return conditioning(seq, self.rank, self.universe, self.prior)


class ScoreBasedOperator(Operator):
    def __init__(self, sig, score: ScoreFunction, name: str | None = None, **kwargs):
        super().__init__(sig, **kwargs)
        self.score = score
        self.name = name or f"score[{score.name}]"

    def compute(self, seq):
        if self.uses_decomposition():
            from .decomposed import decomposed_eval

            return decomposed_eval(seq, self.name)
        return score_based(seq, self.score, self.universe, self.prior)


def make_operator(name: str, sig: Signature, prior: CaseCollection | None = None,
                  engine: str = "auto") -> Operator:
    """Instantiate one of :data:`OPERATOR_NAMES`."""
    if engine == "decomposed" and prior is not None and not prior.is_empty():
        raise NotApplicable("the decomposed engine does not support prior knowledge")
    if name == "weak-mb":
        return WeakMB(sig, prior=prior, engine=engine)
    if name == "var-based-cond":
        return ConditioningOperator(sig, VAR_RANK, name, prior=prior, engine=engine)
    if name == "part-based-cond":
        return ConditioningOperator(sig, PART_RANK, name, prior=prior, engine=engine)
    if name == "excess-min":
        return ScoreBasedOperator(sig, EXCESS_MIN, name, prior=prior, engine=engine)
    raise UnknownNameError("operator", name)
