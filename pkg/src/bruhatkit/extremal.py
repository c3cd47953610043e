"""Closed-form extremal quantities for the coatom/atom gap.

The central function is ``f(x) = floor(x^2/4) - x + 1``: for an interval
of S_n the difference coatoms - atoms never exceeds f(n), and the bound
is tight.  The arithmetic facts feeding that statement live here too: the
forward difference of f, the strict superadditivity of floor(x^2/4), the
floor(n^2/4) ceiling on coatom counts, and the generator for the
block-form permutations whose lower interval [identity, v] attains that
ceiling.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .graphs import component_sizes
from .order import Interval, LeqFn, atom_count, coatom_count
from .perm import Permutation


class BoundViolationError(RuntimeError):
    """An interval violated a bound that holds universally; implementation bug."""


def f(x: int) -> int:
    """The gap bound function floor(x^2/4) - x + 1.

    >>> [f(x) for x in range(1, 8)]
    [0, 0, 0, 1, 2, 4, 6]
    """
    if x < 1:
        raise ValueError(f"f is defined for x >= 1, got {x}")
    return x * x // 4 - x + 1


def f_delta(x: int) -> int:
    """Forward difference f(x+1) - f(x), in closed form.

    Equals x/2 - 1 for even x and (x+1)/2 - 1 for odd x; nonnegative, so
    f is monotone, and positive from x = 3 on.
    """
    if x < 1:
        raise ValueError(f"f_delta is defined for x >= 1, got {x}")
    return x // 2 - 1 if x % 2 == 0 else (x + 1) // 2 - 1


def floor_lemma_holds(k1: int, k2: int) -> bool:
    """Evaluate floor(k1^2/4) + floor(k2^2/4) + 1 < floor((k1+k2)^2/4).

    Both arguments must be at least 2; on that domain the strict
    inequality always holds (it is what makes merging two nontrivial
    components raise the gap bound).
    """
    if k1 < 2 or k2 < 2:
        raise ValueError(f"arguments must be >= 2, got ({k1}, {k2})")
    return k1 * k1 // 4 + k2 * k2 // 4 + 1 < (k1 + k2) ** 2 // 4


def max_coatoms(n: int) -> int:
    """Largest possible coatom count of an interval of S_n: floor(n^2/4).

    >>> max_coatoms(5)
    6
    """
    if n < 1:
        raise ValueError(f"degree must be >= 1, got {n}")
    return n * n // 4


def theorem_a_value(n: int) -> int:
    """Maximum of coatoms - atoms over all intervals of S_n: f(n)."""
    return f(n)


def _opt_top_table(n: int) -> dict[Permutation, tuple[tuple[int, int], ...]]:
    """Map each maximal-coatom top to the (m, t) pairs generating it.

    The generated word is the three-block form
    ``[t+m+1, ..., n, t+1, ..., t+m, 1, ..., t]`` for m in
    {floor(n/2), ceil(n/2)} and 1 <= t <= n-m; for even n both m values
    coincide, which is where the n-odd/n-even count split comes from.
    """
    if n < 2:
        raise ValueError(f"degree must be >= 2, got {n} (S_1 has no coatoms)")
    table: dict[Permutation, list[tuple[int, int]]] = {}
    for m in sorted({n // 2, (n + 1) // 2}):
        for t in range(1, n - m + 1):
            word = (
                tuple(range(t + m + 1, n + 1))
                + tuple(range(t + 1, t + m + 1))
                + tuple(range(1, t + 1))
            )
            table.setdefault(Permutation(word), []).append((m, t))
    return {v: tuple(sorted(mts)) for v, mts in table.items()}


def opt_top_permutations(n: int) -> tuple[Permutation, ...]:
    """All tops v for which [identity, v] has floor(n^2/4) coatoms.

    Returned in lexicographic order; there are n of them for odd n and
    n/2 for even n.

    >>> [str(v) for v in opt_top_permutations(4)]
    ['3412', '4231']
    """
    return tuple(sorted(_opt_top_table(n)))


def opt_top_provenance(
    n: int,
) -> list[tuple[Permutation, tuple[tuple[int, int], ...]]]:
    """The maximal-coatom tops with the (m, t) pairs that generate each,
    in lexicographic order of the permutation."""
    return sorted(_opt_top_table(n).items())


def is_opt_top(v: Permutation) -> bool:
    """Whether v has the three-block maximal-coatom form."""
    if v.n < 2:
        return False
    return v in _opt_top_table(v.n)


@dataclass(frozen=True)
class GapBoundReport:
    """Per-interval bound chain derived from the component sizes k_i.

    With q singleton components, the chain is

        gap <= sum f(k_i) <= f(n - q) <= f(n)

    together with coatoms <= sum floor(k_i^2/4) and atoms >= sum (k_i - 1).
    ``capped_bound`` is f(n - q), read as 0 when every component is a
    singleton (then there are no atoms or coatoms at all).
    """

    u: Permutation
    v: Permutation
    component_sizes: tuple[int, ...]
    singleton_components: int
    atom_count: int
    coatom_count: int
    atom_lower_bound: int
    coatom_bound: int
    gap: int
    sum_f: int
    capped_bound: int
    degree_bound: int

    @property
    def coatom_slack(self) -> int:
        return self.coatom_bound - self.coatom_count

    @property
    def atom_slack(self) -> int:
        return self.atom_count - self.atom_lower_bound


def gap_bound_report(interval: Interval, leq: Optional[LeqFn] = None) -> GapBoundReport:
    """Compute the interval's counts, component sizes, and bound chain.

    Everything the chain requires holds for every interval, so any
    violation is raised as :class:`BoundViolationError` rather than
    reported as data.
    """
    sizes = component_sizes(interval, leq)
    n = interval.n
    a = atom_count(interval, leq)
    c = coatom_count(interval, leq)
    q = sum(1 for k in sizes if k == 1)
    coatom_bound = sum(k * k // 4 for k in sizes)
    atom_lower_bound = sum(k - 1 for k in sizes)
    sum_f = sum(f(k) for k in sizes)
    capped_bound = f(n - q) if n - q >= 1 else 0
    report = GapBoundReport(
        u=interval.u,
        v=interval.v,
        component_sizes=sizes,
        singleton_components=q,
        atom_count=a,
        coatom_count=c,
        atom_lower_bound=atom_lower_bound,
        coatom_bound=coatom_bound,
        gap=c - a,
        sum_f=sum_f,
        capped_bound=capped_bound,
        degree_bound=f(n),
    )
    if c > coatom_bound or a < atom_lower_bound:
        raise BoundViolationError(
            f"count bound violated on [{interval.u}, {interval.v}]: "
            f"a={a} (>= {atom_lower_bound} required), c={c} (<= {coatom_bound} required)"
        )
    if not report.gap <= sum_f <= capped_bound <= f(n):
        raise BoundViolationError(
            f"gap bound chain violated on [{interval.u}, {interval.v}]: "
            f"{report.gap} <= {sum_f} <= {capped_bound} <= {f(n)} fails"
        )
    return report
