"""Heuristic and exact maximization of distance-separated permutation sets.

Three engines share one candidate representation (an int16 matrix, one row
per permutation or prefix string, in lexicographic order):

* a greedy scan that keeps every candidate compatible with what it already
  accepted (the elimination form is equivalent and vectorizes well),
* a restarted randomized variant that seeds each run with a few random
  pairwise-compatible rows before the greedy scan finishes the job,
* an exact branch-and-bound maximum (weight) clique over the distance graph.
"""

from __future__ import annotations

import itertools
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from math import ceil

import numpy as np

from . import _bitset_clique
from .core import (
    Alphabet,
    DomainError,
    InfeasibleError,
    PermutationArray,
    VerificationError,
    verify,
)

# candidate counts above these caps are refused rather than attempted
GREEDY_LENGTH_CAP = 9
EXACT_CLIQUE_VERTEX_CAP = 5_100

_ADJ_OP_BUDGET = 40_000_000


@dataclass(frozen=True)
class SearchConfig:
    """Knobs for the randomized searches.

    `initial_random_count` of None means one random seed row per thousand
    candidates.  The time budget is checked between restarts, so results are
    reproducible for a fixed seed whenever the budget is not the binding
    constraint.
    """

    seed: int = 0
    restarts: int = 50
    time_budget: float = 60.0
    initial_random_count: int | None = None
    shuffle_completion: bool = False

    def __post_init__(self):
        if self.restarts < 1:
            raise DomainError("restarts must be >= 1")
        if self.time_budget <= 0:
            raise DomainError("time budget must be positive")


@dataclass
class DistanceGraph:
    """Graph whose vertices are symbol rows and whose edges join rows at
    distance >= d.  `vertex_transitive` marks graphs closed under position
    permutation (all permutations of one alphabet), where every vertex lies
    on some maximum clique."""

    n: int
    d: int
    vertices: tuple[tuple[int, ...], ...]
    weights: tuple[int, ...] | None = None
    vertex_transitive: bool = False

    def __post_init__(self):
        self._matrix = None

    @classmethod
    def from_permutations(cls, alphabet: Alphabet, d: int) -> "DistanceGraph":
        rows = itertools.permutations(alphabet.symbols)
        return cls(
            n=max(alphabet.symbols),
            d=d,
            vertices=tuple(rows),
            vertex_transitive=True,
        )

    @classmethod
    def from_strings(
        cls,
        n: int,
        m: int,
        d: int,
        weights: tuple[int, ...] | None = None,
        symbol_filter: tuple[int, ...] | None = None,
    ) -> "DistanceGraph":
        """All m-symbol injective strings over [1..n], optionally restricted
        to strings whose symbols all lie in `symbol_filter`."""
        symbols = tuple(range(1, n + 1)) if symbol_filter is None else tuple(sorted(symbol_filter))
        if not 1 <= m <= len(symbols):
            raise DomainError(f"need 1 <= m <= {len(symbols)}, got m={m}")
        rows = tuple(itertools.permutations(symbols, m))
        if weights is not None and len(weights) != len(rows):
            raise DomainError("one weight per vertex required")
        return cls(n=n, d=d, vertices=rows, weights=weights)

    @property
    def vertex_count(self) -> int:
        return len(self.vertices)

    def values_matrix(self) -> np.ndarray:
        return np.array(self.vertices, dtype=np.int16)

    def adjacency_matrix(self) -> np.ndarray:
        if self._matrix is None:
            self._matrix = _adjacency(self.values_matrix(), self.d)
        return self._matrix

    def adjacent(self, i: int, j: int) -> bool:
        if i == j:
            return False
        a, b = self.vertices[i], self.vertices[j]
        return max(abs(x - y) for x, y in zip(a, b)) >= self.d


def _adjacency(cands: np.ndarray, d: int) -> np.ndarray:
    n_c = len(cands)
    rows = np.zeros((n_c, n_c), dtype=bool)
    step = max(1, _ADJ_OP_BUDGET // max(1, n_c * cands.shape[1]))
    for lo in range(0, n_c, step):
        hi = min(n_c, lo + step)
        dist = np.abs(cands[lo:hi, None, :].astype(np.int32) - cands[None, :, :]).max(axis=2)
        rows[lo:hi] = dist >= d
    np.fill_diagonal(rows, False)
    return rows


def _greedy_scan(cands: np.ndarray, order: np.ndarray, d: int) -> list[int]:
    """Indices accepted by scanning `order` and keeping every row at distance
    >= d from all rows kept so far.  Duplicate index occurrences are no-ops."""
    work = cands.astype(np.int32)
    alive = np.ones(len(work), dtype=bool)
    chosen: list[int] = []
    for i in order:
        if not alive[i]:
            continue
        chosen.append(int(i))
        dist = np.abs(work - work[i]).max(axis=1)
        alive &= dist >= d
    return chosen


def _candidate_rows(alphabet: Alphabet) -> np.ndarray:
    if len(alphabet) > GREEDY_LENGTH_CAP:
        raise InfeasibleError(
            f"alphabet of {len(alphabet)} symbols exceeds the exhaustive scan cap "
            f"({GREEDY_LENGTH_CAP}); no full enumeration at desk scale"
        )
    return np.array(list(itertools.permutations(alphabet.symbols)), dtype=np.int16)


def greedy_lex(
    alphabet: Alphabet,
    d: int,
    seed_set: PermutationArray | None = None,
    length_cap: int = GREEDY_LENGTH_CAP,
) -> PermutationArray:
    """Maximal array built by the lexicographic scan: starting from the seed
    set, every permutation of the alphabet is considered in lex order and
    kept whenever it stays at distance >= d from everything kept before."""
    if d < 1:
        raise DomainError("need d >= 1")
    if len(alphabet) > length_cap:
        raise InfeasibleError(
            f"alphabet of {len(alphabet)} symbols exceeds the scan cap ({length_cap})"
        )
    cands = _candidate_rows(alphabet)
    seed_rows: list[tuple[int, ...]] = []
    if seed_set is not None and len(seed_set) > 0:
        if seed_set.alphabet != alphabet:
            raise DomainError("seed set uses a different alphabet")
        report = verify(seed_set)
        if not report.valid or seed_set.declared_distance < d:
            raise DomainError("seed set is not a valid array at the requested distance")
        seed_rows = [m.values for m in seed_set]
    row_index = {tuple(r): i for i, r in enumerate(cands.tolist())}
    seed_idx = [row_index[r] for r in seed_rows]
    order = np.concatenate(
        [np.array(seed_idx, dtype=np.int64), np.arange(len(cands), dtype=np.int64)]
    )
    chosen = _greedy_scan(cands, order, d)
    out = PermutationArray.from_values((tuple(cands[i]) for i in chosen), d)
    report = verify(out)
    if not report.valid:  # pragma: no cover - scan guarantees validity
        raise VerificationError(f"search produced an invalid array: {report.reason}", report.witness)
    return out


def _one_restart(
    cands: np.ndarray,
    d: int,
    seed_seq: np.random.SeedSequence,
    init_count: int,
    shuffle_completion: bool,
) -> list[int]:
    rng = np.random.default_rng(seed_seq)
    n_c = len(cands)
    picked: list[int] = []
    attempts = 0
    while len(picked) < init_count and attempts < 50 * init_count + 100:
        attempts += 1
        j = int(rng.integers(n_c))
        if j in picked:
            continue
        row = cands[j].astype(np.int32)
        if all(int(np.abs(cands[p].astype(np.int32) - row).max()) >= d for p in picked):
            picked.append(j)
    tail = rng.permutation(n_c) if shuffle_completion else np.arange(n_c, dtype=np.int64)
    order = np.concatenate([np.array(picked, dtype=np.int64), tail])
    return _greedy_scan(cands, order, d)


def _best_subset_search(cands: np.ndarray, d: int, config: SearchConfig, threads: int = 1) -> list[int]:
    """Restarted randomized greedy over the candidate rows; returns the best
    index set found.  Restart 0 always runs the plain lexicographic scan, so
    the result never falls below the deterministic greedy baseline.  Ties in
    size resolve to the lexicographically smallest row set."""
    n_c = len(cands)
    init_count = config.initial_random_count
    if init_count is None:
        init_count = ceil(n_c / 1000)
    root = np.random.SeedSequence(config.seed)
    children = root.spawn(config.restarts)

    def run(idx: int) -> list[int]:
        count = 0 if idx == 0 else init_count
        return _one_restart(cands, d, children[idx], count, config.shuffle_completion)

    started = time.monotonic()
    results: list[list[int]] = []
    if threads <= 1:
        for idx in range(config.restarts):
            results.append(run(idx))
            if time.monotonic() - started > config.time_budget:
                break
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            pending = [pool.submit(run, idx) for idx in range(config.restarts)]
            for fut in pending:
                results.append(fut.result())

    def sort_key(idxs: list[int]):
        rows = sorted(tuple(cands[i]) for i in idxs)
        return (-len(idxs), rows)

    return min(results, key=sort_key)


def random_greedy(
    alphabet: Alphabet,
    d: int,
    config: SearchConfig | None = None,
    threads: int = 1,
) -> PermutationArray:
    """Best array over `config.restarts` randomized greedy runs.

    Each run draws `initial_random_count` random pairwise-compatible
    permutations, then completes greedily scanning all permutations in lex
    order (or a seeded shuffle when `shuffle_completion` is set).  The first
    run uses no random seeds at all.  Output is deterministic for a fixed
    (seed, config, alphabet, d) provided the time budget does not cut the
    restart loop short.
    """
    if d < 1:
        raise DomainError("need d >= 1")
    config = config or SearchConfig()
    cands = _candidate_rows(alphabet)
    chosen = _best_subset_search(cands, d, config, threads=threads)
    out = PermutationArray.from_values((tuple(cands[i]) for i in chosen), d)
    report = verify(out)
    if not report.valid:  # pragma: no cover - construction guarantees validity
        raise VerificationFailure(report)
    return out


def exact_clique(graph: DistanceGraph, cap: int = EXACT_CLIQUE_VERTEX_CAP) -> tuple[tuple[int, ...], ...]:
    """A maximum clique of the distance graph, as a tuple of vertex rows.

    Branch and bound with greedy-coloring bounds over degeneracy-ordered
    bitsets; with unit weights on a vertex-transitive graph the search is
    rooted at the first vertex, which some maximum clique always contains.
    """
    n_v = graph.vertex_count
    if n_v == 0:
        return ()
    if n_v > cap:
        raise InfeasibleError(
            f"{n_v} vertices exceed the exact-clique cap ({cap}); "
            "use the randomized searches instead"
        )
    rows = graph.adjacency_matrix()
    cands = graph.values_matrix()
    weights = None
    uniform = True
    if graph.weights is not None:
        weights = np.asarray(graph.weights, dtype=np.int64)
        if np.any(weights < 0):
            raise DomainError("vertex weights must be non-negative")
        uniform = bool(np.all(weights == weights[0]))
    # warm start: plain greedy scan, by descending weight when weighted
    if weights is None:
        warm_order = np.arange(n_v, dtype=np.int64)
    else:
        warm_order = np.argsort(-weights, kind="stable").astype(np.int64)
    warm = _greedy_scan(cands, warm_order, graph.d)
    fix = 0 if (graph.vertex_transitive and uniform) else None
    _, idxs = _bitset_clique.solve_max_clique(rows, weights, warm=warm, fix_vertex=fix)
    return tuple(graph.vertices[i] for i in idxs)


def exact_max_pa(alphabet: Alphabet, d: int, cap: int = EXACT_CLIQUE_VERTEX_CAP) -> PermutationArray:
    """Provably maximum array over the alphabet at distance d, by exact
    clique search over all permutations."""
    if d < 1:
        raise DomainError("need d >= 1")
    graph = DistanceGraph.from_permutations(alphabet, d)
    members = exact_clique(graph, cap=cap)
    out = PermutationArray.from_values(members, d)
    report = verify(out)
    if not report.valid:  # pragma: no cover
        raise VerificationFailure(report)
    return out


def weighted_clique_lower_bound(
    n: int,
    m: int,
    d: int,
    weight_fn,
    exact: bool = True,
    config: SearchConfig | None = None,
    symbol_filter: tuple[int, ...] | None = None,
    cap: int = EXACT_CLIQUE_VERTEX_CAP,
):
    """Maximum-weight set of pairwise distance-d prefix strings, where each
    prefix carries the size of the suffix family it can head.

    Exact mode solves max weight clique on the prefix graph; otherwise a
    restarted weight-biased greedy gives a lower bound.  Returns
    (PrefixSet, total weight).  The total is a valid lower bound on the
    maximum array size over [1..n] at distance d when weight_fn(prefix) is a
    valid lower bound on the suffix count for that prefix's complement.
    """
    from .prefix import PrefixSet, verify_prefix_set

    if not 1 <= m <= n:
        raise DomainError(f"need 1 <= m <= n, got m={m}, n={n}")
    graph = DistanceGraph.from_strings(n, m, d, symbol_filter=symbol_filter)
    weights = tuple(int(weight_fn(v)) for v in graph.vertices)
    if any(w < 0 for w in weights):
        raise DomainError("weights must be non-negative")
    graph.weights = weights
    if exact:
        members = exact_clique(graph, cap=cap)
        row_index = {v: i for i, v in enumerate(graph.vertices)}
        total = sum(weights[row_index[v]] for v in members)
    else:
        config = config or SearchConfig()
        cands = graph.values_matrix()
        w_arr = np.array(weights, dtype=np.int64)
        root = np.random.SeedSequence(config.seed)
        children = root.spawn(config.restarts)
        best: list[int] = []
        best_w = -1
        started = time.monotonic()
        for idx in range(config.restarts):
            rng = np.random.default_rng(children[idx])
            # descending weight with random tie-breaking; run 0 is unshuffled
            noise = np.zeros(len(cands)) if idx == 0 else rng.random(len(cands))
            order = np.lexsort((noise, -w_arr))
            got = _greedy_scan(cands, order, d)
            got_w = int(w_arr[got].sum())
            if got_w > best_w:
                best, best_w = got, got_w
            if time.monotonic() - started > config.time_budget:
                break
        members = tuple(sorted(graph.vertices[i] for i in best))
        total = best_w
    ps = PrefixSet(n=n, m=m, d=d, members=tuple(sorted(members)))
    report = verify_prefix_set(ps)
    if not report.valid:  # pragma: no cover
        raise VerificationFailure(report)
    return ps, total
