"""Bruhat order on S_n: comparisons, covers, and interval cover labels.

The default comparison is the sorted-prefix criterion: u <= v if and only
if for every prefix length i, the sorted set {u(1), ..., u(i)} is
entrywise <= the sorted set {v(1), ..., v(i)}.  It needs no precomputed
tables and costs O(n^2) per pair.  An independent reachability oracle
(transitive closure of the cover digraph, built by
:mod:`bruhatkit.enumerator`) exists so the two can be cross-checked
exhaustively.

An interval [u, v] has its covers labeled by transpositions: w is an atom
exactly when w = u t for a unique transposition t with length(w) =
length(u) + 1, and dually a coatom is v t one length step below v.  The
label sets computed here drive the graphs in :mod:`bruhatkit.graphs`.
"""

from __future__ import annotations

from bisect import insort
from dataclasses import dataclass
from typing import Callable, Optional

from .perm import Permutation, Transposition, all_transpositions, length, right_mul

# Signature shared by the default comparison and cache-backed lookups.
LeqFn = Callable[[Permutation, Permutation], bool]


def _check_same_degree(u: Permutation, v: Permutation) -> None:
    if u.n != v.n:
        raise ValueError(f"degree mismatch: {u.n} vs {v.n}")


def bruhat_leq(u: Permutation, v: Permutation) -> bool:
    """Whether u <= v in Bruhat order, by the sorted-prefix criterion.

    >>> from bruhatkit.perm import parse_permutation as p
    >>> bruhat_leq(p("1234"), p("3412"))
    True
    >>> bruhat_leq(p("3412"), p("4231"))
    False
    """
    _check_same_degree(u, v)
    us: list[int] = []
    vs: list[int] = []
    # The full prefix is always the same set, so the last step is skipped.
    for i in range(u.n - 1):
        insort(us, u.word[i])
        insort(vs, v.word[i])
        for x, y in zip(us, vs):
            if x > y:
                return False
    return True


def bruhat_leq_oracle(u: Permutation, v: Permutation, order_cache) -> bool:
    """Independent comparison via precomputed cover-digraph reachability.

    ``order_cache`` is an :class:`bruhatkit.enumerator.OrderCache`; its
    closure is built purely from cover relations, so agreement with
    :func:`bruhat_leq` is a meaningful cross-check rather than a tautology.
    """
    _check_same_degree(u, v)
    if order_cache.n != u.n:
        raise ValueError(f"cache degree mismatch: cache n={order_cache.n}, got {u.n}")
    return order_cache.leq_perms(u, v)


def is_cover(u: Permutation, w: Permutation) -> bool:
    """Whether w covers u: u <= w with length exactly one higher."""
    _check_same_degree(u, w)
    return length(w) == length(u) + 1 and bruhat_leq(u, w)


@dataclass(frozen=True)
class Interval:
    """A Bruhat interval [u, v]; construction validates u <= v eagerly."""

    u: Permutation
    v: Permutation

    def __post_init__(self):
        _check_same_degree(self.u, self.v)
        if not bruhat_leq(self.u, self.v):
            raise ValueError(f"not an interval: {self.u} is not below {self.v}")

    @property
    def n(self) -> int:
        return self.u.n

    def __repr__(self) -> str:
        return f"Interval({str(self.u)!r}, {str(self.v)!r})"


@dataclass(frozen=True)
class CoverLabelSet:
    """The transpositions labeling one side's covers of an interval.

    ``kind`` is ``"atom"`` for labels t with u covered by u t <= v, and
    ``"coatom"`` for labels t with v covering v t >= u.
    """

    kind: str
    labels: frozenset[Transposition]

    def __post_init__(self):
        if self.kind not in ("atom", "coatom"):
            raise ValueError(f"kind must be 'atom' or 'coatom', got {self.kind!r}")

    def __len__(self) -> int:
        return len(self.labels)

    def __iter__(self):
        return iter(self.sorted())

    def __contains__(self, t: Transposition) -> bool:
        return t in self.labels

    def sorted(self) -> list[Transposition]:
        return sorted(self.labels)


def atom_labels(interval: Interval, leq: Optional[LeqFn] = None) -> CoverLabelSet:
    """Transpositions t such that u is covered by u t and u t <= v.

    Each atom of the interval is u t for exactly one t, so the size of
    this set is the atom count.
    """
    leq = leq or bruhat_leq
    u, v = interval.u, interval.v
    lu = length(u)
    labels = set()
    for t in all_transpositions(interval.n):
        w = right_mul(u, t)
        if length(w) == lu + 1 and leq(w, v):
            labels.add(t)
    return CoverLabelSet("atom", frozenset(labels))


def coatom_labels(interval: Interval, leq: Optional[LeqFn] = None) -> CoverLabelSet:
    """Transpositions t such that v covers v t and v t >= u."""
    leq = leq or bruhat_leq
    u, v = interval.u, interval.v
    lv = length(v)
    labels = set()
    for t in all_transpositions(interval.n):
        w = right_mul(v, t)
        if length(w) == lv - 1 and leq(u, w):
            labels.add(t)
    return CoverLabelSet("coatom", frozenset(labels))


def atom_count(interval: Interval, leq: Optional[LeqFn] = None) -> int:
    """Number of atoms of the interval."""
    return len(atom_labels(interval, leq))


def coatom_count(interval: Interval, leq: Optional[LeqFn] = None) -> int:
    """Number of coatoms of the interval."""
    return len(coatom_labels(interval, leq))
