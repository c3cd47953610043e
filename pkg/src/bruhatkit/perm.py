"""Permutations of {1..n} in one-line notation, with Lehmer-code ranking.

Conventions used throughout the package:

- A permutation v is stored as the word ``(v(1), v(2), ..., v(n))`` with
  1-indexed positions and values.
- Composition is ``(v w)(i) = v(w(i))``, so multiplying v on the right by
  the transposition (a b) swaps the word entries at positions a and b.
- ``rank`` is the lexicographic (Lehmer code) rank, a bijection onto
  ``range(factorial(n))``; ``enumerate_sn`` yields S_n in rank order.

Degrees are capped at ``MAX_DEGREE`` so that n! stays comfortably inside
32 bits and dense rank-indexed tables stay addressable; the exhaustive
machinery in :mod:`bruhatkit.enumerator` gates itself far lower.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import factorial
from typing import Iterator

MAX_DEGREE = 12


@dataclass(frozen=True, order=True)
class Permutation:
    """A permutation of {1..n} in one-line notation.

    ``word[i]`` is the image of position i+1.  Comparison between
    Permutations is lexicographic on the word, which matches rank order;
    it is *not* the Bruhat order (see :mod:`bruhatkit.order`).

    >>> v = Permutation((3, 4, 1, 2))
    >>> v(1), v(3)
    (3, 1)
    >>> str(v)
    '3412'
    """

    word: tuple[int, ...]

    def __post_init__(self):
        word = tuple(self.word)
        object.__setattr__(self, "word", word)
        n = len(word)
        if n < 1:
            raise ValueError("degree must be at least 1")
        if n > MAX_DEGREE:
            raise ValueError(
                f"degree {n} exceeds the supported maximum {MAX_DEGREE} "
                f"(the largest n with n! below 2**31)"
            )
        if sorted(word) != list(range(1, n + 1)):
            raise ValueError(f"not a permutation of 1..{n}: {word!r}")

    @property
    def n(self) -> int:
        """Degree of the ambient symmetric group."""
        return len(self.word)

    def __call__(self, i: int) -> int:
        """Image of position i (1-indexed)."""
        return self.word[i - 1]

    def __str__(self) -> str:
        return format_permutation(self)

    def __repr__(self) -> str:
        return f"Permutation({str(self)!r})"


@dataclass(frozen=True, order=True)
class Transposition:
    """An unordered pair (a b) with a < b, acting as a reflection.

    >>> Transposition(2, 4)
    Transposition(2, 4)
    """

    a: int
    b: int

    def __post_init__(self):
        if not 1 <= self.a < self.b:
            raise ValueError(
                f"transposition requires 1 <= a < b, got ({self.a}, {self.b})"
            )

    def as_permutation(self, n: int) -> Permutation:
        """The transposition as an element of S_n."""
        if self.b > n:
            raise ValueError(f"transposition ({self.a} {self.b}) does not fit in S_{n}")
        word = list(range(1, n + 1))
        word[self.a - 1], word[self.b - 1] = word[self.b - 1], word[self.a - 1]
        return Permutation(tuple(word))

    def __repr__(self) -> str:
        return f"Transposition({self.a}, {self.b})"


def _check_degree(n: int) -> None:
    if n < 1:
        raise ValueError("degree must be at least 1")
    if n > MAX_DEGREE:
        raise ValueError(f"degree {n} exceeds the supported maximum {MAX_DEGREE}")


def identity(n: int) -> Permutation:
    """The identity of S_n.

    >>> identity(4)
    Permutation('1234')
    """
    _check_degree(n)
    return Permutation(tuple(range(1, n + 1)))


def longest_element(n: int) -> Permutation:
    """The order-reversing word (n, ..., 1), the Bruhat maximum of S_n."""
    _check_degree(n)
    return Permutation(tuple(range(n, 0, -1)))


def length(v: Permutation) -> int:
    """Coxeter length of v: the number of inversions of its word.

    >>> length(Permutation((4, 2, 3, 1)))
    5
    """
    w = v.word
    n = len(w)
    return sum(1 for i in range(n) for j in range(i + 1, n) if w[i] > w[j])


def right_mul(v: Permutation, t: Transposition) -> Permutation:
    """The product v t, i.e. v's word with positions t.a and t.b exchanged.

    >>> right_mul(Permutation((3, 4, 1, 2)), Transposition(1, 3))
    Permutation('1432')
    """
    if t.b > v.n:
        raise ValueError(f"transposition ({t.a} {t.b}) out of range for degree {v.n}")
    word = list(v.word)
    word[t.a - 1], word[t.b - 1] = word[t.b - 1], word[t.a - 1]
    return Permutation(tuple(word))


def inverse(v: Permutation) -> Permutation:
    """The group inverse of v."""
    word = [0] * v.n
    for i, x in enumerate(v.word):
        word[x - 1] = i + 1
    return Permutation(tuple(word))


def compose(v: Permutation, w: Permutation) -> Permutation:
    """The product v w under the convention (v w)(i) = v(w(i))."""
    if v.n != w.n:
        raise ValueError(f"degree mismatch: {v.n} vs {w.n}")
    return Permutation(tuple(v.word[x - 1] for x in w.word))


def all_transpositions(n: int) -> list[Transposition]:
    """All n(n-1)/2 transpositions of S_n, in lexicographic order.

    >>> len(all_transpositions(4))
    6
    """
    _check_degree(n)
    return [
        Transposition(a, b) for a in range(1, n) for b in range(a + 1, n + 1)
    ]


def rank(v: Permutation) -> int:
    """Lexicographic (Lehmer code) rank of v, in range(factorial(n)).

    >>> rank(identity(5))
    0
    >>> rank(longest_element(3))
    5
    """
    w = v.word
    n = v.n
    r = 0
    for i in range(n):
        smaller_later = sum(1 for j in range(i + 1, n) if w[j] < w[i])
        r += smaller_later * factorial(n - 1 - i)
    return r


def unrank(r: int, n: int) -> Permutation:
    """The permutation of S_n with Lehmer rank r; inverse of :func:`rank`.

    >>> unrank(0, 4)
    Permutation('1234')
    """
    _check_degree(n)
    if not 0 <= r < factorial(n):
        raise ValueError(f"rank {r} outside [0, {n}!) for degree {n}")
    symbols = list(range(1, n + 1))
    word = []
    for i in range(n):
        digit, r = divmod(r, factorial(n - 1 - i))
        word.append(symbols.pop(digit))
    return Permutation(tuple(word))


def enumerate_sn(n: int) -> Iterator[Permutation]:
    """Yield all of S_n in rank (lexicographic) order.

    >>> sum(1 for _ in enumerate_sn(4))
    24
    """
    _check_degree(n)
    for word in itertools.permutations(range(1, n + 1)):
        yield Permutation(word)


def parse_permutation(text: str) -> Permutation:
    """Parse a one-line word from text.

    Two forms are accepted: compact digits for degree at most 9
    (``"3412"``) and comma-separated entries for any degree
    (``"3,4,1,2"``). The compact form cannot express two-digit values, so
    use commas from degree 10 up.

    >>> parse_permutation("3,4,1,2") == parse_permutation("3412")
    True
    """
    s = text.strip()
    if not s:
        raise ValueError("empty permutation text")
    if "," in s:
        try:
            entries = tuple(int(part) for part in s.split(","))
        except ValueError:
            raise ValueError(f"cannot parse permutation {text!r}") from None
    else:
        if not s.isdigit():
            raise ValueError(
                f"cannot parse permutation {text!r} "
                f"(use comma-separated entries for degree >= 10)"
            )
        entries = tuple(int(ch) for ch in s)
    return Permutation(entries)


def format_permutation(v: Permutation) -> str:
    """Text form of v: compact digits up to degree 9, comma form beyond.

    >>> format_permutation(Permutation((3, 4, 1, 2)))
    '3412'
    """
    if v.n <= 9:
        return "".join(str(x) for x in v.word)
    return ",".join(str(x) for x in v.word)
