"""Permutations over integer alphabets and the max-absolute-difference metric.

The distance between two equal-length symbol sequences is the largest
per-position absolute difference of their values.  An array of permutations
whose pairwise distances all reach a declared threshold is the central object
here; the rest of the package either builds such arrays or reasons about how
large they can be.

Alphabets need not be contiguous: the recursive constructions constantly work
over complements like [1..11]-{6}, so distances always compare raw symbol
values, never ranks.  All types are immutable after construction and safe to
share across workers.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator

import numpy as np


class DomainError(ValueError):
    """Arguments outside an operation's stated domain."""


class ComparabilityError(DomainError):
    """Two sequences cannot be compared position-wise."""


class InfeasibleError(RuntimeError):
    """The instance is too large for the requested exact method."""


class VerificationError(RuntimeError):
    """A certified object failed its distance re-check."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


@dataclass(frozen=True)
class Alphabet:
    """Ordered set of distinct positive integers."""

    symbols: tuple[int, ...]

    def __post_init__(self):
        syms = tuple(int(s) for s in self.symbols)
        object.__setattr__(self, "symbols", syms)
        if not syms:
            raise DomainError("alphabet must contain at least one symbol")
        if syms[0] < 1:
            raise DomainError(f"symbols must be >= 1, got {syms[0]}")
        if any(b <= a for a, b in zip(syms, syms[1:])):
            raise DomainError("symbols must be strictly increasing")

    @classmethod
    def contiguous(cls, n: int) -> "Alphabet":
        """The alphabet [1..n]."""
        if n < 1:
            raise DomainError(f"need n >= 1, got {n}")
        return cls(tuple(range(1, n + 1)))

    def complement(self, n: int) -> "Alphabet":
        """Symbols of [1..n] not in this alphabet."""
        if self.symbols[-1] > n:
            raise DomainError(f"alphabet exceeds universe [1..{n}]")
        present = set(self.symbols)
        rest = tuple(s for s in range(1, n + 1) if s not in present)
        if not rest:
            raise DomainError(f"complement of {self.symbols} in [1..{n}] is empty")
        return Alphabet(rest)

    def is_contiguous(self) -> bool:
        return self.symbols == tuple(range(1, len(self.symbols) + 1))

    def __len__(self) -> int:
        return len(self.symbols)

    def __iter__(self) -> Iterator[int]:
        return iter(self.symbols)

    def __contains__(self, symbol: int) -> bool:
        return symbol in set(self.symbols)


@dataclass(frozen=True)
class Permutation:
    """A sequence of distinct symbols; a bijection onto its own symbol set."""

    values: tuple[int, ...]

    def __post_init__(self):
        vals = tuple(int(v) for v in self.values)
        object.__setattr__(self, "values", vals)
        if not vals:
            raise DomainError("permutation must have length >= 1")
        if min(vals) < 1:
            raise DomainError("symbols must be >= 1")
        if len(set(vals)) != len(vals):
            raise DomainError(f"repeated symbol in {vals}")

    @property
    def alphabet(self) -> Alphabet:
        return Alphabet(tuple(sorted(self.values)))

    @classmethod
    def identity(cls, alphabet: Alphabet) -> "Permutation":
        """Symbols in increasing order, the scan-first permutation."""
        return cls(alphabet.symbols)

    def __len__(self) -> int:
        return len(self.values)


def chebyshev_distance(a: Permutation, b: Permutation) -> int:
    """Largest per-position absolute difference between two permutations.

    The two must have equal length and identical alphabets; permutations over
    different symbol sets are not position-wise comparable.
    """
    if len(a.values) != len(b.values):
        raise ComparabilityError(f"length mismatch: {len(a.values)} vs {len(b.values)}")
    if sorted(a.values) != sorted(b.values):
        raise ComparabilityError("permutations use different alphabets")
    return max(abs(x - y) for x, y in zip(a.values, b.values))


@dataclass(frozen=True)
class PermutationArray:
    """Deduplicated, lexicographically sorted set of permutations with a
    declared minimum pairwise distance.

    Construction never checks distances (verify does); it only normalizes the
    member list so serialization is canonical.
    """

    members: tuple[Permutation, ...]
    declared_distance: int

    def __post_init__(self):
        if self.declared_distance < 1:
            raise DomainError("declared distance must be >= 1")
        seen = {}
        for m in self.members:
            seen[m.values] = m
        ordered = tuple(seen[v] for v in sorted(seen))
        object.__setattr__(self, "members", ordered)

    @classmethod
    def from_values(cls, rows: Iterable[tuple[int, ...]], d: int) -> "PermutationArray":
        return cls(tuple(Permutation(tuple(r)) for r in rows), d)

    @property
    def alphabet(self) -> Alphabet | None:
        return self.members[0].alphabet if self.members else None

    def values_matrix(self) -> np.ndarray:
        """Members as an int16 matrix, one row per permutation."""
        if not self.members:
            return np.zeros((0, 0), dtype=np.int16)
        return np.array([m.values for m in self.members], dtype=np.int16)

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[Permutation]:
        return iter(self.members)


@dataclass(frozen=True)
class VerifyReport:
    valid: bool
    witness: tuple[Permutation, Permutation] | None = None
    reason: str = ""


# ---------------------------------------------------------------------------
# distance checking kernels

_PAIRWISE_OP_BUDGET = 300_000_000  # elementwise ops per chunked matrix pass
_PATTERN_CAP = 20_000


def _pairwise_min(mat: np.ndarray) -> tuple[int, tuple[int, int]]:
    """Exact minimum pairwise distance of the rows, with an argmin pair."""
    n_rows = len(mat)
    best = None
    pair = (0, 0)
    step = max(1, _PAIRWISE_OP_BUDGET // max(1, n_rows * mat.shape[1]))
    for lo in range(0, n_rows, step):
        hi = min(n_rows, lo + step)
        dist = np.abs(mat[lo:hi, None, :].astype(np.int32) - mat[None, :, :]).max(axis=2)
        # mask the diagonal and the lower triangle of the global matrix
        rows_idx = np.arange(lo, hi)
        mask = rows_idx[:, None] >= np.arange(n_rows)[None, :]
        dist[mask] = np.iinfo(np.int32).max
        k = int(dist.argmin())
        i, j = divmod(k, n_rows)
        v = int(dist[i, j])
        if best is None or v < best:
            best = v
            pair = (lo + i, j)
    return int(best), pair


def _bijections_within(symbols: tuple[int, ...], radius: int, cap: int) -> list[tuple[int, ...]] | None:
    """All bijections f of the symbol set with |f(s) - s| <= radius, as rank
    maps (entry i gives the rank of f(symbols[i])).  None if more than cap."""
    m = len(symbols)
    out: list[tuple[int, ...]] = []
    assign = [0] * m
    used = [False] * m

    def rec(i: int) -> bool:
        if i == m:
            out.append(tuple(assign))
            return len(out) <= cap
        s = symbols[i]
        for j in range(m):
            if used[j]:
                continue
            t = symbols[j]
            if t < s - radius:
                continue
            if t > s + radius:
                break
            used[j] = True
            assign[i] = j
            if not rec(i + 1):
                used[j] = False
                return False
            used[j] = False
        return True

    if not rec(0):
        return None
    return out


def _find_close_pair(mat: np.ndarray, d: int, symbols: tuple[int, ...]) -> tuple[int, int] | None:
    """Index pair at distance < d, or None.  Prefers a sphere-enumeration scan
    when the pairwise matrix would be too large."""
    n_rows, m = mat.shape
    if n_rows < 2:
        return None
    if n_rows * n_rows * m <= _PAIRWISE_OP_BUDGET or m > 15:
        best, pair = _pairwise_min(mat)
        return pair if best < d else None
    patterns = _bijections_within(symbols, d - 1, _PATTERN_CAP)
    if patterns is None:
        best, pair = _pairwise_min(mat)
        return pair if best < d else None
    # rank-encode rows, hash them, and look up every distance-<d image
    rank_of = {s: i for i, s in enumerate(symbols)}
    ranks = np.vectorize(rank_of.get, otypes=[np.int64])(mat)
    powers = (m ** np.arange(m)).astype(np.uint64)
    keys = (ranks.astype(np.uint64) * powers).sum(axis=1)
    order = np.argsort(keys)
    sorted_keys = keys[order]
    for pat in patterns:
        f = np.array(pat, dtype=np.int64)
        if np.all(f == np.arange(m)):
            continue
        mapped = ((f[ranks]).astype(np.uint64) * powers).sum(axis=1)
        pos = np.searchsorted(sorted_keys, mapped)
        pos_clip = np.minimum(pos, len(sorted_keys) - 1)
        hits = sorted_keys[pos_clip] == mapped
        if hits.any():
            i = int(np.nonzero(hits)[0][0])
            j = int(order[pos_clip[i]])
            if i != j:
                return (i, j)
    return None


def min_pairwise_distance(pa: PermutationArray) -> int | None:
    """Minimum distance over all unordered member pairs; None when there are
    fewer than two members (any declared distance then holds vacuously)."""
    if len(pa) <= 1:
        return None
    first = pa.members[0].alphabet
    for m in pa.members[1:]:
        if m.alphabet != first:
            raise ComparabilityError("members use different alphabets")
    best, _ = _pairwise_min(pa.values_matrix())
    return best


def verify(pa: PermutationArray) -> VerifyReport:
    """Check every array invariant; report rather than raise.

    On failure the witness is a violating pair: either two members over
    different alphabets or two members closer than the declared distance.
    """
    if len(pa) <= 1:
        return VerifyReport(valid=True)
    first = pa.members[0].alphabet
    for m in pa.members[1:]:
        if m.alphabet != first:
            return VerifyReport(False, (pa.members[0], m), "members use different alphabets")
    pair = _find_close_pair(pa.values_matrix(), pa.declared_distance, first.symbols)
    if pair is not None:
        a, b = pa.members[pair[0]], pa.members[pair[1]]
        return VerifyReport(
            False, (a, b),
            f"distance {chebyshev_distance(a, b)} < declared {pa.declared_distance}",
        )
    return VerifyReport(valid=True)


def transfer_to_alphabet(pa: PermutationArray, target: Alphabet) -> PermutationArray:
    """Relabel a permutation array onto another alphabet of the same size by
    the order isomorphism (i-th smallest symbol to i-th smallest symbol).

    Requires every target gap to be at least the matching source gap, which
    makes all distances non-decreasing; the declared distance carries over.
    """
    source = pa.alphabet
    if source is None:
        raise DomainError("cannot transfer an empty array")
    if len(source) != len(target):
        raise DomainError("alphabet sizes differ")
    s, t = source.symbols, target.symbols
    for i in range(len(s) - 1):
        if t[i + 1] - t[i] < s[i + 1] - s[i]:
            raise DomainError(
                f"target gap {t[i]}..{t[i+1]} narrower than source gap {s[i]}..{s[i+1]}"
            )
    mapping = dict(zip(s, t))
    rows = (tuple(mapping[v] for v in m.values) for m in pa)
    return PermutationArray.from_values(rows, pa.declared_distance)


def all_permutations_matrix(alphabet: Alphabet) -> np.ndarray:
    """Every permutation of the alphabet, one row each, in lexicographic
    order, as an int16 matrix."""
    return np.array(list(itertools.permutations(alphabet.symbols)), dtype=np.int16)
