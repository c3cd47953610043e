"""Exhaustive verification engine for Bruhat intervals of S_n.

Builds a rank-indexed cover table and its bitset transitive closure
(:class:`OrderCache`), scans every interval for the coatom-minus-atom
gap, and runs the named whole-group checks the CLI exposes: the maximum
gap value and its maximizer characterization, the coatom-count ceiling
and its maximizer classification, atom/coatom component agreement, and
the maximizer top form.

The heavy loops run through the kernel backends in
:mod:`bruhatkit._kernels`; everything here is orchestration, so a scan
partitioned across workers merges to byte-identical results regardless
of worker count.
"""

from __future__ import annotations

import itertools
import struct
import time
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from math import factorial
from pathlib import Path
from typing import Optional

import numpy as np

from . import _kernels
from .extremal import (
    floor_lemma_holds,
    is_opt_top,
    max_coatoms,
    opt_top_permutations,
    theorem_a_value,
)
from .graphs import UnionFind
from .perm import Permutation, all_transpositions

MAX_EXHAUSTIVE_DEGREE = 8
DEFAULT_DEGREE_CEILING = 7

CACHE_MAGIC = b"BRUH"
CACHE_VERSION = 1

_MASK64 = (1 << 64) - 1


class CacheFormatError(ValueError):
    """A cache file failed header, checksum, or layout validation."""


class VerificationFailure(RuntimeError):
    """An invariant that must hold for every interval was violated."""


def _resolve_kernel(kernel):
    return kernel if kernel is not None else _kernels.active


def _matrix_megabytes(n: int) -> float:
    nf = factorial(n)
    return nf * ((nf + 63) // 64) * 8 / 1e6


class SplitMix64:
    """SplitMix64: a tiny deterministic PRNG, reproducible everywhere.

    Used for sampled verification so reports can cite (seed, count) and
    be replayed exactly.
    """

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + 0x9E3779B97F4A7C15) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return (z ^ (z >> 31)) & _MASK64

    def below(self, bound: int) -> int:
        """Uniform draw from range(bound), by rejection."""
        span = _MASK64 + 1
        limit = span - span % bound
        while True:
            x = self.next_u64()
            if x < limit:
                return x % bound


def _word_raises_length_by_one(word: tuple[int, ...], a: int, b: int) -> bool:
    """Whether swapping 0-indexed positions a < b raises the length by 1.

    True exactly when word[a] < word[b] with no intermediate position
    holding a value strictly between them.
    """
    x, y = word[a], word[b]
    if x > y:
        return False
    for k in range(a + 1, b):
        if x < word[k] < y:
            return False
    return True


class OrderCache:
    """Rank-indexed Bruhat order data for one degree.

    ``up_matrix`` row r is the bitset of {s : unrank(r) <= unrank(s)};
    ``ucov_flat``/``ucov_off`` hold each rank's upper covers in CSR form.
    Everything else (lower covers, the down-set matrix, the transposition
    multiplication table) is derived lazily and cached.  Instances are
    immutable after construction and safe to share across workers.
    """

    def __init__(
        self,
        n: int,
        words: list[tuple[int, ...]],
        lengths: np.ndarray,
        ucov_flat: np.ndarray,
        ucov_off: np.ndarray,
        up_matrix: np.ndarray,
    ):
        self.n = n
        self.words = words
        self.lengths = lengths
        self.ucov_flat = ucov_flat
        self.ucov_off = ucov_off
        self.up_matrix = up_matrix
        self._rank_of: Optional[dict[tuple[int, ...], int]] = None
        self._down_matrix: Optional[np.ndarray] = None
        self._lcov: Optional[tuple[np.ndarray, np.ndarray]] = None
        self._mul_ranks: Optional[list[list[int]]] = None
        self._upset_ints: Optional[list[int]] = None
        self._downset_ints: Optional[list[int]] = None

    @property
    def size(self) -> int:
        return len(self.words)

    @property
    def words_per_row(self) -> int:
        return self.up_matrix.shape[1]

    def rank_of(self, word: tuple[int, ...]) -> int:
        if self._rank_of is None:
            self._rank_of = {w: r for r, w in enumerate(self.words)}
        return self._rank_of[word]

    def upper_covers(self, r: int) -> list[int]:
        return self.ucov_flat[self.ucov_off[r] : self.ucov_off[r + 1]].tolist()

    def leq_ranks(self, ru: int, rv: int) -> bool:
        return bool((int(self.up_matrix[ru, rv >> 6]) >> (rv & 63)) & 1)

    def leq_perms(self, u: Permutation, v: Permutation) -> bool:
        if u.n != self.n or v.n != self.n:
            raise ValueError(f"cache degree mismatch: cache n={self.n}")
        return self.leq_ranks(self.rank_of(u.word), self.rank_of(v.word))

    def perm(self, r: int) -> Permutation:
        return Permutation(self.words[r])

    def lower_cover_csr(self) -> tuple[np.ndarray, np.ndarray]:
        """Lower covers per rank in CSR form, derived from the upper CSR."""
        if self._lcov is None:
            n_elems = self.size
            lists: list[list[int]] = [[] for _ in range(n_elems)]
            flat = self.ucov_flat.tolist()
            off = self.ucov_off.tolist()
            for u in range(n_elems):
                for k in range(off[u], off[u + 1]):
                    lists[flat[k]].append(u)
            lcov_off = np.zeros(n_elems + 1, dtype=np.int64)
            lcov_off[1:] = np.cumsum([len(lst) for lst in lists])
            lcov_flat = np.fromiter(
                (u for lst in lists for u in lst),
                dtype=np.uint32,
                count=int(lcov_off[-1]),
            )
            self._lcov = (lcov_flat, lcov_off)
        return self._lcov

    def lower_cover_counts(self) -> np.ndarray:
        _, off = self.lower_cover_csr()
        return np.diff(off)

    def down_matrix(self, kernel=None) -> np.ndarray:
        """Down-set bitmatrix (row v = bitset of {u : u <= v}).

        Built by a second cover closure rather than by transposing
        ``up_matrix``, which both backends handle uniformly.
        """
        if self._down_matrix is None:
            k = _resolve_kernel(kernel)
            lcov_flat, lcov_off = self.lower_cover_csr()
            order = np.argsort(self.lengths, kind="stable").astype(np.int32)
            self._down_matrix = k.closure_bitmatrix(
                self.size, self.words_per_row, lcov_flat, lcov_off, order
            )
        return self._down_matrix

    def mul_ranks(self) -> list[list[int]]:
        """mul_ranks[r][ti]: rank of unrank(r) times the ti-th transposition."""
        if self._mul_ranks is None:
            pairs = [(t.a - 1, t.b - 1) for t in all_transpositions(self.n)]
            rank_of = {w: r for r, w in enumerate(self.words)}
            table = []
            for word in self.words:
                row = []
                for a, b in pairs:
                    swapped = list(word)
                    swapped[a], swapped[b] = swapped[b], swapped[a]
                    row.append(rank_of[tuple(swapped)])
                table.append(row)
            self._mul_ranks = table
        return self._mul_ranks

    def upset_bigints(self) -> list[int]:
        """Each row of ``up_matrix`` as one Python int (bit s = rank s)."""
        if self._upset_ints is None:
            self._upset_ints = self._rows_as_ints(self.up_matrix)
        return self._upset_ints

    def downset_bigints(self, kernel=None) -> list[int]:
        if self._downset_ints is None:
            self._downset_ints = self._rows_as_ints(self.down_matrix(kernel))
        return self._downset_ints

    @staticmethod
    def _rows_as_ints(matrix: np.ndarray) -> list[int]:
        buf = matrix.astype("<u8", copy=False).tobytes()
        row_bytes = matrix.shape[1] * 8
        return [
            int.from_bytes(buf[i * row_bytes : (i + 1) * row_bytes], "little")
            for i in range(matrix.shape[0])
        ]


def build_order_cache(n: int, allow_large: bool = False, kernel=None) -> OrderCache:
    """Enumerate S_n, find all cover relations, and close them to bitsets.

    Degrees 2..7 build unconditionally; n = 8 needs ``allow_large``
    because each of the two bitmatrices (up-sets, and down-sets once a
    scan derives them) costs about 203 MB.
    """
    if not 2 <= n <= MAX_EXHAUSTIVE_DEGREE:
        raise ValueError(
            f"order cache supports degrees 2..{MAX_EXHAUSTIVE_DEGREE}, got {n}"
        )
    if n > DEFAULT_DEGREE_CEILING and not allow_large:
        raise ValueError(
            f"degree {n} needs allow_large=True "
            f"(each bitmatrix takes about {_matrix_megabytes(n):.0f} MB)"
        )
    kernel = _resolve_kernel(kernel)
    words = list(itertools.permutations(range(1, n + 1)))
    n_elems = len(words)
    rank_of = {w: r for r, w in enumerate(words)}
    lengths = np.fromiter(
        (
            sum(1 for i in range(n) for j in range(i + 1, n) if w[i] > w[j])
            for w in words
        ),
        dtype=np.int32,
        count=n_elems,
    )
    position_pairs = [(a, b) for a in range(n - 1) for b in range(a + 1, n)]
    flat: list[int] = []
    off = np.zeros(n_elems + 1, dtype=np.int64)
    for r, word in enumerate(words):
        covers = []
        for a, b in position_pairs:
            if _word_raises_length_by_one(word, a, b):
                swapped = list(word)
                swapped[a], swapped[b] = swapped[b], swapped[a]
                covers.append(rank_of[tuple(swapped)])
        covers.sort()
        flat.extend(covers)
        off[r + 1] = len(flat)
    ucov_flat = np.asarray(flat, dtype=np.uint32)
    order = np.argsort(-lengths, kind="stable").astype(np.int32)
    try:
        up_matrix = kernel.closure_bitmatrix(
            n_elems, (n_elems + 63) // 64, ucov_flat, off, order
        )
    except MemoryError as exc:
        raise MemoryError(
            f"allocating the S_{n} up-set bitmatrix needs about "
            f"{_matrix_megabytes(n):.0f} MB"
        ) from exc
    return OrderCache(n, words, lengths, ucov_flat, off, up_matrix)


@dataclass
class ScanResult:
    """Outcome of a full-interval gap scan; canonical and deterministic.

    ``maximizing_intervals`` is sorted by (rank(u), rank(v));
    ``histogram`` maps each realized gap value to its interval count.
    Elapsed time is informational and excluded from equality.
    """

    n: int
    max_gap: int
    maximizing_intervals: list[tuple[Permutation, Permutation]]
    histogram: dict[int, int]
    intervals_scanned: int
    elapsed_ms: int = field(compare=False, default=0)


def _stripe_bounds(n_elems: int, jobs: int) -> list[tuple[int, int]]:
    bounds = []
    for i in range(jobs):
        lo = i * n_elems // jobs
        hi = (i + 1) * n_elems // jobs
        if hi > lo:
            bounds.append((lo, hi))
    return bounds


def scan_max_gap(n: int, cache: OrderCache, jobs: int = 1, kernel=None) -> ScanResult:
    """Maximum of coatoms - atoms over every interval of S_n, with witnesses.

    Tops are processed in rank order, partitioned into contiguous rank
    stripes across ``jobs`` workers; merging is order-fixed, so the result
    is identical for any worker count.
    """
    if cache.n != n:
        raise ValueError(f"cache mismatch: cache is for n={cache.n}, requested {n}")
    kernel = _resolve_kernel(kernel)
    start = time.perf_counter()
    down = cache.down_matrix(kernel)
    lcov_flat, lcov_off = cache.lower_cover_csr()
    n_elems = cache.size
    # Counts on both sides are at most the number of transpositions, so
    # gaps lie in [-T, T] unconditionally; sizing the histogram by that
    # (rather than by the bounds under verification) keeps the compiled
    # kernel in bounds even against a hypothetical counting bug.
    gap_offset = n * (n - 1) // 2
    hist_len = 2 * gap_offset + 1
    jobs = max(1, int(jobs))
    stripes = _stripe_bounds(n_elems, jobs)

    def run(stripe: tuple[int, int]):
        return kernel.scan_stripe(
            down,
            lcov_flat,
            lcov_off,
            cache.ucov_flat,
            cache.ucov_off,
            stripe[0],
            stripe[1],
            gap_offset,
            hist_len,
        )

    if len(stripes) == 1:
        results = [run(stripes[0])]
    else:
        with ThreadPoolExecutor(max_workers=len(stripes)) as pool:
            results = list(pool.map(run, stripes))

    hist = np.zeros(hist_len, dtype=np.int64)
    per_v_max = np.empty(n_elems, dtype=np.int32)
    intervals = 0
    for (lo, hi), (stripe_hist, stripe_max, stripe_count) in zip(stripes, results):
        hist += stripe_hist
        per_v_max[lo:hi] = stripe_max
        intervals += int(stripe_count)
    comparable_pairs = int(kernel.popcount_rows(cache.up_matrix).sum())
    if intervals != comparable_pairs:
        raise VerificationFailure(
            f"interval count mismatch: scan saw {intervals}, "
            f"closure says {comparable_pairs}"
        )
    max_gap = int(per_v_max.max())
    witnesses: list[tuple[int, int]] = []
    for rv in np.flatnonzero(per_v_max == max_gap).tolist():
        urows, coatoms, atoms = kernel.counts_for_v(
            down, lcov_flat, lcov_off, cache.ucov_flat, cache.ucov_off, rv
        )
        for i in np.flatnonzero(coatoms - atoms == max_gap).tolist():
            witnesses.append((int(urows[i]), rv))
    witnesses.sort()
    histogram = {
        int(g - gap_offset): int(c) for g, c in enumerate(hist.tolist()) if c
    }
    elapsed_ms = int((time.perf_counter() - start) * 1000)
    return ScanResult(
        n=n,
        max_gap=max_gap,
        maximizing_intervals=[(cache.perm(ru), cache.perm(rv)) for ru, rv in witnesses],
        histogram=histogram,
        intervals_scanned=intervals,
        elapsed_ms=elapsed_ms,
    )


@dataclass
class VerifyReport:
    """Machine-readable outcome of one named check."""

    check: str
    n: int
    passed: bool
    expected: object
    actual: object
    counterexample: Optional[str] = None
    details: dict = field(default_factory=dict)

    def as_payload(self) -> dict:
        payload = {
            "check": self.check,
            "n": self.n,
            "passed": self.passed,
            "expected": self.expected,
            "actual": self.actual,
        }
        if self.counterexample is not None:
            payload["counterexample"] = self.counterexample
        payload.update(self.details)
        return payload


def _interval_text(u: Permutation, v: Permutation) -> str:
    return f"[{u}, {v}]"


def verify_max_gap(
    n: int, cache: OrderCache, scan: Optional[ScanResult] = None, jobs: int = 1
) -> VerifyReport:
    """Check that the scanned maximum gap equals floor(n^2/4) - n + 1."""
    scan = scan or scan_max_gap(n, cache, jobs=jobs)
    expected = theorem_a_value(n)
    report = VerifyReport(
        check="a",
        n=n,
        passed=scan.max_gap == expected,
        expected=expected,
        actual=scan.max_gap,
        details={"witnesses": len(scan.maximizing_intervals)},
    )
    if not report.passed and scan.maximizing_intervals:
        u, v = scan.maximizing_intervals[0]
        report.counterexample = _interval_text(u, v)
    return report


def _intervals_with_counts(
    cache: OrderCache, want_coatoms: int, want_atoms: int, kernel=None
) -> list[tuple[int, int]]:
    """All (rank u, rank v) with exactly the requested atom/coatom counts."""
    kernel = _resolve_kernel(kernel)
    down = cache.down_matrix(kernel)
    lcov_flat, lcov_off = cache.lower_cover_csr()
    found: list[tuple[int, int]] = []
    counts = cache.lower_cover_counts()
    for rv in range(cache.size):
        # c([u, v]) can never exceed the number of lower covers of v.
        if counts[rv] < want_coatoms:
            continue
        urows, coatoms, atoms = kernel.counts_for_v(
            down, lcov_flat, lcov_off, cache.ucov_flat, cache.ucov_off, rv
        )
        hits = np.flatnonzero((coatoms == want_coatoms) & (atoms == want_atoms))
        found.extend((int(urows[i]), rv) for i in hits.tolist())
    found.sort()
    return found


def verify_gap_maximizers(
    n: int, cache: OrderCache, scan: Optional[ScanResult] = None, jobs: int = 1
) -> VerifyReport:
    """Check both directions of: an interval maximizes the gap exactly when
    it has floor(n^2/4) coatoms and n-1 atoms.  Needs n >= 4."""
    if n < 4:
        raise ValueError(f"the maximizer characterization requires n >= 4, got {n}")
    scan = scan or scan_max_gap(n, cache, jobs=jobs)
    maximizers = {
        (cache.rank_of(u.word), cache.rank_of(v.word))
        for u, v in scan.maximizing_intervals
    }
    condition_set = set(_intervals_with_counts(cache, max_coatoms(n), n - 1))
    passed = maximizers == condition_set
    report = VerifyReport(
        check="b",
        n=n,
        passed=passed,
        expected={"coatoms": max_coatoms(n), "atoms": n - 1},
        actual={"maximizers": len(maximizers), "satisfying_counts": len(condition_set)},
        details={"max_gap": scan.max_gap},
    )
    if not passed:
        ru, rv = sorted(maximizers.symmetric_difference(condition_set))[0]
        side = "maximizes without the counts" if (ru, rv) in maximizers else (
            "has the counts without maximizing"
        )
        report.counterexample = (
            f"{_interval_text(cache.perm(ru), cache.perm(rv))} {side}"
        )
    return report


def verify_max_coatom_count(n: int, cache: OrderCache) -> VerifyReport:
    """Check that max over v of the coatom count of [identity, v] is
    floor(n^2/4).  Coatoms of [identity, v] are exactly the lower covers
    of v."""
    counts = cache.lower_cover_counts()
    actual = int(counts.max())
    expected = max_coatoms(n)
    report = VerifyReport(
        check="p21",
        n=n,
        passed=actual == expected,
        expected=expected,
        actual=actual,
        details={"maximizer_count": int((counts == actual).sum())},
    )
    if not report.passed:
        rv = int(np.argmax(counts))
        report.counterexample = f"{cache.perm(rv)} has {actual} coatoms over identity"
    return report


def verify_coatom_maximizers(n: int, cache: OrderCache) -> VerifyReport:
    """Check that the tops attaining floor(n^2/4) coatoms over the identity
    are exactly the generated block-form permutations, with the n-odd /
    n-even count."""
    counts = cache.lower_cover_counts()
    target = max_coatoms(n)
    attained = {cache.perm(rv) for rv in np.flatnonzero(counts == target).tolist()}
    expected_set = set(opt_top_permutations(n))
    expected_count = n if n % 2 else n // 2
    passed = attained == expected_set and len(attained) == expected_count
    report = VerifyReport(
        check="p29",
        n=n,
        passed=passed,
        expected=expected_count,
        actual=len(attained),
        details={"maximizers": [str(v) for v in sorted(attained)]},
    )
    if not passed:
        diff = attained.symmetric_difference(expected_set)
        if diff:
            v = sorted(diff)[0]
            where = "attained but not generated" if v in attained else (
                "generated but not attained"
            )
            report.counterexample = f"{v} {where}"
    return report


def _partition_signature(uf: UnionFind, n: int) -> list[int]:
    sig = []
    first: dict[int, int] = {}
    for i in range(1, n + 1):
        root = uf.find(i)
        sig.append(first.setdefault(root, len(first)))
    return sig


def _component_partitions_agree(
    cache: OrderCache,
    ru: int,
    rv: int,
    mul: list[list[int]],
    lengths: list[int],
    upset: list[int],
    pairs: list[tuple[int, int]],
) -> bool:
    """Rank-space twin of graphs.check_components_equal for bulk scans."""
    n = cache.n
    lu, lv = lengths[ru], lengths[rv]
    uf_atom = UnionFind(n)
    uf_coatom = UnionFind(n)
    for ti, (a, b) in enumerate(pairs):
        wa = mul[ru][ti]
        if lengths[wa] == lu + 1 and (upset[wa] >> rv) & 1:
            uf_atom.union(a, b)
        wc = mul[rv][ti]
        if lengths[wc] == lv - 1 and (upset[ru] >> wc) & 1:
            uf_coatom.union(a, b)
    return _partition_signature(uf_atom, n) == _partition_signature(uf_coatom, n)


def verify_partition_agreement(
    n: int,
    cache: OrderCache,
    mode: str = "exhaustive",
    count: int = 100_000,
    seed: int = 1,
) -> VerifyReport:
    """Check that atom-side and coatom-side component partitions agree,
    either on every interval (n <= 5) or on seeded random intervals."""
    if mode not in ("exhaustive", "sample"):
        raise ValueError(f"mode must be 'exhaustive' or 'sample', got {mode!r}")
    if mode == "exhaustive" and n > 5:
        raise ValueError(
            f"exhaustive agreement check is limited to n <= 5 "
            f"(got {n}); use sample mode"
        )
    mul = cache.mul_ranks()
    lengths = cache.lengths.tolist()
    upset = cache.upset_bigints()
    pairs = [(t.a, t.b) for t in all_transpositions(n)]
    checked = 0
    bad: Optional[tuple[int, int]] = None
    if mode == "exhaustive":
        downset = cache.downset_bigints()
        for rv in range(cache.size):
            mask = downset[rv]
            while mask:
                low = mask & -mask
                ru = low.bit_length() - 1
                mask ^= low
                checked += 1
                if not _component_partitions_agree(
                    cache, ru, rv, mul, lengths, upset, pairs
                ):
                    bad = (ru, rv)
                    break
            if bad:
                break
    else:
        rng = SplitMix64(seed)
        n_elems = cache.size
        while checked < count:
            ru = rng.below(n_elems)
            rv = rng.below(n_elems)
            if not (upset[ru] >> rv) & 1:
                continue
            checked += 1
            if not _component_partitions_agree(
                cache, ru, rv, mul, lengths, upset, pairs
            ):
                bad = (ru, rv)
                break
    details: dict = {"mode": mode, "intervals_checked": checked}
    if mode == "sample":
        details.update({"seed": seed, "count": count})
    report = VerifyReport(
        check="p410",
        n=n,
        passed=bad is None,
        expected="atom/coatom components agree on every interval",
        actual="no disagreement found" if bad is None else "disagreement found",
        details=details,
    )
    if bad:
        report.counterexample = _interval_text(cache.perm(bad[0]), cache.perm(bad[1]))
    return report


def verify_maximizer_top_form(
    n: int, cache: OrderCache, scan: Optional[ScanResult] = None, jobs: int = 1
) -> VerifyReport:
    """Check that every gap-maximizing interval's top has the block form
    generated by opt_top_permutations.  Needs n >= 4."""
    if n < 4:
        raise ValueError(f"the maximizer top form requires n >= 4, got {n}")
    scan = scan or scan_max_gap(n, cache, jobs=jobs)
    tops = sorted({v for _, v in scan.maximizing_intervals})
    offenders = [v for v in tops if not is_opt_top(v)]
    report = VerifyReport(
        check="corollary",
        n=n,
        passed=not offenders,
        expected="every maximizing top has the block form",
        actual=f"{len(tops) - len(offenders)}/{len(tops)} tops have the form",
        details={"tops": [str(v) for v in tops]},
    )
    if offenders:
        report.counterexample = str(offenders[0])
    return report


def verify_floor_inequality(k_max: int = 200) -> VerifyReport:
    """Check the strict floor inequality over all pairs 2 <= k1, k2 <= k_max."""
    if k_max < 2:
        raise ValueError(f"k_max must be >= 2, got {k_max}")
    bad = None
    checked = 0
    for k1 in range(2, k_max + 1):
        for k2 in range(2, k_max + 1):
            checked += 1
            if not floor_lemma_holds(k1, k2):
                bad = (k1, k2)
                break
        if bad:
            break
    report = VerifyReport(
        check="lemma",
        n=k_max,
        passed=bad is None,
        expected=f"strict inequality on all {(k_max - 1) ** 2} pairs",
        actual="holds everywhere" if bad is None else "violated",
        details={"pairs_checked": checked},
    )
    if bad:
        report.counterexample = f"(k1, k2) = {bad}"
    return report


def save_cache(cache: OrderCache, path) -> None:
    """Write the cache in the binary format described in the README.

    Layout: magic "BRUH", format version u16, degree u8, n! u64, the
    length-prefixed upper-cover lists (u32 ranks), the up-set bitmatrix
    (row-major, rows padded to 8-byte boundaries), and a trailing CRC-32
    of all preceding bytes.  All integers little-endian.
    """
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    crc = 0
    with open(tmp, "wb") as fh:

        def emit(chunk: bytes) -> None:
            nonlocal crc
            crc = zlib.crc32(chunk, crc)
            fh.write(chunk)

        emit(CACHE_MAGIC)
        emit(struct.pack("<H", CACHE_VERSION))
        emit(struct.pack("<B", cache.n))
        emit(struct.pack("<Q", cache.size))
        off = cache.ucov_off
        for r in range(cache.size):
            row = cache.ucov_flat[off[r] : off[r + 1]]
            emit(struct.pack("<I", row.size))
            emit(row.astype("<u4").tobytes())
        for lo in range(0, cache.size, 4096):
            emit(cache.up_matrix[lo : lo + 4096].astype("<u8").tobytes())
        fh.write(struct.pack("<I", crc))
    tmp.replace(path)


def load_cache(path, expect_n: Optional[int] = None, allow_large: bool = False) -> OrderCache:
    """Read a cache written by :func:`save_cache`, validating header and
    checksum; ``expect_n`` guards against picking up the wrong degree."""
    data = Path(path).read_bytes()
    header = struct.calcsize("<4sHBQ")
    if len(data) < header + 4:
        raise CacheFormatError(f"truncated cache file: {path}")
    magic, version, n, n_fact = struct.unpack_from("<4sHBQ", data, 0)
    if magic != CACHE_MAGIC:
        raise CacheFormatError(f"bad magic {magic!r} in {path}")
    if version != CACHE_VERSION:
        raise CacheFormatError(f"unsupported cache version {version} in {path}")
    if expect_n is not None and n != expect_n:
        raise CacheFormatError(
            f"cache degree mismatch: file has n={n}, requested n={expect_n}"
        )
    if not 2 <= n <= MAX_EXHAUSTIVE_DEGREE:
        raise CacheFormatError(f"unsupported cache degree {n}")
    if n > DEFAULT_DEGREE_CEILING and not allow_large:
        raise ValueError(
            f"loading a degree-{n} cache needs allow_large=True "
            f"(about {_matrix_megabytes(n):.0f} MB resident)"
        )
    if n_fact != factorial(n):
        raise CacheFormatError(f"inconsistent header: degree {n} with size {n_fact}")
    stored_crc = struct.unpack_from("<I", data, len(data) - 4)[0]
    if zlib.crc32(data[:-4]) != stored_crc:
        raise CacheFormatError(f"checksum mismatch (corrupt or truncated): {path}")
    n_elems = factorial(n)
    pos = header
    flat: list[np.ndarray] = []
    off = np.zeros(n_elems + 1, dtype=np.int64)
    for r in range(n_elems):
        if pos + 4 > len(data) - 4:
            raise CacheFormatError(f"malformed covers section in {path}")
        (count,) = struct.unpack_from("<I", data, pos)
        pos += 4
        end = pos + 4 * count
        if end > len(data) - 4:
            raise CacheFormatError(f"malformed covers section in {path}")
        flat.append(np.frombuffer(data, dtype="<u4", count=count, offset=pos))
        pos += 4 * count
        off[r + 1] = off[r] + count
    ucov_flat = (
        np.concatenate(flat).astype(np.uint32)
        if flat
        else np.zeros(0, dtype=np.uint32)
    )
    if ucov_flat.size and int(ucov_flat.max()) >= n_elems:
        raise CacheFormatError(f"cover rank out of range in {path}")
    words_per_row = (n_elems + 63) // 64
    matrix_bytes = n_elems * words_per_row * 8
    if len(data) - 4 - pos != matrix_bytes:
        raise CacheFormatError(
            f"bitmatrix section has {len(data) - 4 - pos} bytes, "
            f"expected {matrix_bytes} in {path}"
        )
    up_matrix = (
        np.frombuffer(data, dtype="<u8", count=n_elems * words_per_row, offset=pos)
        .reshape(n_elems, words_per_row)
        .astype(np.uint64)
    )
    words = list(itertools.permutations(range(1, n + 1)))
    lengths = np.fromiter(
        (
            sum(1 for i in range(n) for j in range(i + 1, n) if w[i] > w[j])
            for w in words
        ),
        dtype=np.int32,
        count=n_elems,
    )
    return OrderCache(n, words, lengths, ucov_flat, off, up_matrix)
