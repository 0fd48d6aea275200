"""Bracketing numbers and dyadic entropy bounds for indicator classes.

The class under study is all indicator functions of atom subsets.  Covers
are built from a core set of heavy atoms: every subset C is sandwiched
between 1_{C & core} and 1_{(C & core) | core-complement}, so 2^|core|
brackets suffice and the common bracket diameter is the mass outside the
core.

The dyadic machinery partitions atoms into 16-adic mass bands, tracks the
minimal band depth j(k) whose tail mass drops below 4^-k, and turns the
band census into the bracket-count bound 2^m(k) at scale 2^-k and into a
majorant for the entropy integral.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .measures import DiscreteMeasure, ddb_statistic

#: constant obtained by chaining the dyadic majorant inequalities
#: (sqrt(log 2) from the integral step, 2 from Cauchy-Schwarz, sqrt(8 * 32)
#: from the two tail-regrouping steps).  Exposed separately because only the
#: structural factors are asserted anywhere; the constant is conservative.
DYADIC_CHAIN_CONSTANT = math.sqrt(math.log(2.0)) * 2.0 * math.sqrt(8.0 * 32.0)

_SQRT_LOG2 = math.sqrt(math.log(2.0))


# ---------------------------------------------------------------------------
# bracket containers
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class IndicatorBracket:
    """Pair of nested atom sets; covers every C with lower <= C <= upper."""

    lower: frozenset[int]
    upper: frozenset[int]

    def __post_init__(self):
        if not self.lower <= self.upper:
            raise ValueError("bracket lower set must be contained in the upper set")

    def contains(self, subset: Iterable[int]) -> bool:
        s = frozenset(subset)
        return self.lower <= s <= self.upper


@dataclass(frozen=True)
class BracketCover:
    """Bracket cover of all indicator subsets of a stored support.

    ``core`` holds the heavy atoms whose subsets index the brackets; the
    cover radius bounds every bracket diameter in the stated norm.
    """

    brackets: tuple[IndicatorBracket, ...]
    radius: float
    norm_order: int
    core: tuple[int, ...]
    support: tuple[int, ...]

    def bracket_for(self, subset: Iterable[int]) -> IndicatorBracket:
        """The bracket containing a given subset of the support."""
        s = frozenset(subset)
        trace = frozenset(s & set(self.core))
        outside = frozenset(self.support) - frozenset(self.core)
        return IndicatorBracket(trace, trace | outside)


@dataclass(frozen=True)
class ProfileRow:
    level: int
    jk: int
    mk: int
    count_bound: int
    entropy_partial: float
    tail_sqrt_sum: float


@dataclass(frozen=True)
class DyadicEntropyProfile:
    """Band census and per-level dyadic entropy quantities."""

    census: dict[int, int]
    rows: tuple[ProfileRow, ...]


# ---------------------------------------------------------------------------
# 16-adic band census and tail indices
# ---------------------------------------------------------------------------
def band_index(mass: float) -> int:
    """The j with 16^-(j+1) < mass <= 16^-j."""
    if not 0.0 < mass <= 1.0:
        raise ValueError("band index needs a mass in (0, 1]")
    j = max(int(-math.log2(mass)) // 4 - 1, 0)
    while mass <= 16.0 ** -(j + 1):
        j += 1
    return j


def aj_partition(p: DiscreteMeasure) -> dict[int, int]:
    """Census {j: atom count} of the 16-adic mass bands."""
    census: dict[int, int] = {}
    for m in p.masses:
        j = band_index(float(m))
        census[j] = census.get(j, 0) + 1
    return census


class _TailTable:
    """Ascending-sorted masses with prefix sums for fast tail queries."""

    def __init__(self, p: DiscreteMeasure):
        self.sorted_masses = np.sort(p.masses)
        self.prefix = np.cumsum(self.sorted_masses)
        self.sqrt_prefix = np.cumsum(np.sqrt(self.sorted_masses))

    def tail_mass(self, threshold: float) -> float:
        k = int(np.searchsorted(self.sorted_masses, threshold, side="right"))
        return float(self.prefix[k - 1]) if k else 0.0

    def tail_sqrt_sum(self, threshold: float) -> float:
        k = int(np.searchsorted(self.sorted_masses, threshold, side="right"))
        return float(self.sqrt_prefix[k - 1]) if k else 0.0


def _jk_from_table(table: _TailTable, k: int, start: int = 0) -> int:
    target = 4.0**-k
    j = start
    while table.tail_mass(16.0**-j) > target:
        j += 1
    return j


def jk_index(p: DiscreteMeasure, k: int) -> int:
    """Minimal J with sum of masses <= 16^-J itself <= 4^-k.

    Non-decreasing in k; finite for any finitely supported measure because
    the tail eventually empties.
    """
    if k < 1:
        raise ValueError("level k must be a positive integer")
    if p.support_size == 0:
        return 0
    return _jk_from_table(_TailTable(p), k)


def mk_count(p: DiscreteMeasure, k: int) -> int:
    """Atom count of the bands up to j(k); 2^m(k) bounds the bracket number
    at scale 2^-k in the L2(p) norm."""
    j = jk_index(p, k)
    census = aj_partition(p)
    return sum(r for band, r in census.items() if band <= j)


def dyadic_profile(p: DiscreteMeasure, levels: int) -> DyadicEntropyProfile:
    """Rows (k, j(k), m(k), 2^m(k), entropy partial sum, tail sum) for k <= levels."""
    if levels < 1:
        raise ValueError("levels must be positive")
    census = aj_partition(p)
    table = _TailTable(p)
    rows = []
    j = 0
    partial = 0.0
    ms_prev: dict[int, int] = {}
    for k in range(1, levels + 1):
        j = _jk_from_table(table, k, start=j)
        mk = ms_prev.get(j)
        if mk is None:
            mk = sum(r for band, r in census.items() if band <= j)
            ms_prev[j] = mk
        partial += _SQRT_LOG2 * math.sqrt(mk) * 2.0**-k
        tail = table.tail_sqrt_sum(16.0 ** (-j + 1))
        rows.append(ProfileRow(k, j, mk, 1 << mk, partial, tail))
    for a, b in zip(rows, rows[1:]):
        if b.jk < a.jk or b.mk < a.mk:
            raise AssertionError("dyadic profile must be monotone in the level")
    return DyadicEntropyProfile(census=census, rows=tuple(rows))


# ---------------------------------------------------------------------------
# covers and exact bracket numbers
# ---------------------------------------------------------------------------
def bracket_cover_l1(
    p: DiscreteMeasure, eps: float, *, tail_mass: float = 0.0, max_core: int = 20
) -> BracketCover:
    """L1(p) bracket cover of all indicators at radius below eps.

    The core is the smallest prefix of atoms in decreasing mass order with
    p(core) > 1 - eps; ties in mass break by ascending atom id.  One bracket
    is emitted per subset of the core.  ``tail_mass`` is mass truncated away
    from an infinite-support law before calling; it inflates every diameter
    and makes the cover infeasible once it reaches eps.
    """
    if not eps > 0.0:
        raise ValueError("eps must be positive")
    if tail_mass >= eps:
        raise ValueError(
            f"cover infeasible: truncated tail mass {tail_mass:g} is not below eps={eps:g}; "
            f"a finer truncation (tail below {eps:g}) is required"
        )
    order = np.lexsort((p.ids, -p.masses))
    needed = 1.0 - eps
    core: list[int] = []
    covered = 0.0
    for pos in order:
        if covered > needed:
            break
        core.append(int(p.ids[pos]))
        covered += float(p.masses[pos])
    if covered <= needed:
        raise ValueError(
            f"cover infeasible: full stored support carries {covered:g} <= 1 - eps; "
            f"needs tail mass below {eps - (1.0 - covered):g} more"
        )
    if len(core) > max_core:
        raise ValueError(f"core of {len(core)} atoms would emit 2^{len(core)} brackets")
    core_set = frozenset(core)
    outside = frozenset(int(i) for i in p.ids) - core_set
    radius = float(sum(p.mass_at(i) for i in outside)) + tail_mass
    core_sorted = sorted(core_set)
    brackets = []
    for bits in range(1 << len(core_sorted)):
        sub = frozenset(c for t, c in enumerate(core_sorted) if bits >> t & 1)
        brackets.append(IndicatorBracket(sub, sub | outside))
    return BracketCover(
        brackets=tuple(brackets),
        radius=radius,
        norm_order=1,
        core=tuple(core_sorted),
        support=tuple(int(i) for i in p.ids),
    )


def brute_force_bracket_number(p: DiscreteMeasure, eps: float, norm_order: int) -> int:
    """Exact minimal bracket count at diameter <= eps, supports of size <= 4.

    Enumerates all 3^s candidate brackets, keeps those within diameter,
    drops dominated coverage sets and solves the set cover exactly.
    """
    if norm_order not in (1, 2):
        raise ValueError("norm_order must be 1 or 2")
    if not eps > 0.0:
        raise ValueError("eps must be positive")
    s = p.support_size
    if s > 4:
        raise ValueError("exact search supports at most 4 atoms")
    if s == 0:
        return 1
    masses = p.masses
    nsub = 1 << s
    subs = np.arange(nsub)
    members = (subs[:, None] >> np.arange(s)) & 1
    set_mass = members.astype(float) @ masses
    covers = []
    for up in range(nsub):
        lo = up
        while True:
            diff = float(set_mass[up & ~lo])
            diam = diff if norm_order == 1 else math.sqrt(diff)
            if diam <= eps:
                mask = 0
                for c in range(nsub):
                    if (lo & ~c) == 0 and (c & ~up) == 0:
                        mask |= 1 << c
                covers.append(mask)
            if lo == 0:
                break
            lo = (lo - 1) & up
    masks = np.unique(np.array(covers, dtype=np.int64))
    maximal = [
        m for m in masks if not any((m | m2) == m2 and m != m2 for m2 in masks)
    ]
    return int(kernels.min_cover_size(np.array(maximal, np.int64), (1 << nsub) - 1))


# ---------------------------------------------------------------------------
# entropy integral majorant and its tail factors
# ---------------------------------------------------------------------------
def _start_level(delta: float) -> int:
    """Smallest p >= 1 with 2^-(p-1) <= delta."""
    if delta >= 1.0:
        return 1
    level = 1 + math.ceil(-math.log2(delta))
    while level > 1 and 2.0 ** (2 - level) <= delta:
        level -= 1
    while 2.0 ** (1 - level) > delta:
        level += 1
    return level


def entropy_integral_bound(p: DiscreteMeasure, delta: float) -> float:
    """Dyadic majorant sqrt(log 2) * sum_{k>=p} sqrt(m(k)) 2^-k of the
    entropy integral at scale delta, with p minimal such that 2^-(p-1) <= delta.

    m(k) is eventually constant at the support size, so the geometric tail
    is summed in closed form and the result carries no truncation error.
    """
    if not delta > 0.0:
        raise ValueError("delta must be positive")
    size = p.support_size
    if size == 0:
        return 0.0
    table = _TailTable(p)
    census = aj_partition(p)
    start = _start_level(delta)
    total = 0.0
    j = 0
    k = start
    while True:
        j = _jk_from_table(table, k, start=j)
        mk = sum(r for band, r in census.items() if band <= j)
        if mk >= size:
            total += math.sqrt(size) * 2.0 ** (1 - k)
            break
        total += math.sqrt(mk) * 2.0**-k
        k += 1
    return _SQRT_LOG2 * total


def sqrt_mass_tail_sum(p: DiscreteMeasure, level: int) -> float:
    """Sum of sqrt(mass) over atoms with mass <= 16^(-j(level)+1).

    This is the structural tail factor that must vanish as the level grows
    whenever the square-root mass sum converges; it is the quantity driven
    to zero in the entropy-tail argument.
    """
    if level < 1:
        raise ValueError("level must be a positive integer")
    table = _TailTable(p)
    j = _jk_from_table(table, level)
    return table.tail_sqrt_sum(16.0 ** (-j + 1))


def entropy_tail_bound(p: DiscreteMeasure, level: int) -> float:
    """Product sqrt(sum_y sqrt(p_y)) * sqrt(tail sqrt-mass sum at j(level)).

    Bounds the entropy integral at scale 2^-(level-1) up to the universal
    constant DYADIC_CHAIN_CONSTANT, which is exposed separately and never
    asserted on.
    """
    return math.sqrt(ddb_statistic(p)) * math.sqrt(sqrt_mass_tail_sum(p, level))


def cover_is_valid(cover: BracketCover, p: DiscreteMeasure, subsets: Sequence[Iterable[int]]) -> bool:
    """Check lower <= C <= upper and the diameter bound for given subsets."""
    support = set(cover.support)
    for raw in subsets:
        c = frozenset(raw) & support
        br = cover.bracket_for(c)
        if not br.contains(c):
            return False
        diff_mass = sum(p.mass_at(i) for i in br.upper - br.lower)
        diam = diff_mass if cover.norm_order == 1 else math.sqrt(diff_mass)
        if diam > cover.radius + 1e-12:
            return False
    return True
