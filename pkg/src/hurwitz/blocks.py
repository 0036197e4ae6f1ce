"""Imprimitivity block systems of witness tuples and covering factorization.

A block decomposition of order k partitions {1..d} into d/k blocks of k
elements each, permuted coherently by every generator.  Finding one shows
the witnessed covering decomposes as an inner covering of degree k over
an intermediate surface followed by an outer covering of degree d/k.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterator, Sequence

from .core import BranchDatum, Partition, SPHERE, surface_from_euler
from .perms import Perm, cycles, cycle_type, is_transitive
from .realizer import Realization, verify_witness


@dataclass(frozen=True, slots=True)
class BlockDecomposition:
    """A block system: block size, and a block id per point (ids numbered
    by first occurrence)."""

    size: int
    assignment: tuple[int, ...]

    @property
    def degree(self) -> int:
        return len(self.assignment)

    @property
    def block_count(self) -> int:
        return self.degree // self.size

    def blocks(self) -> tuple[tuple[int, ...], ...]:
        out: list[list[int]] = [[] for _ in range(self.block_count)]
        for x, b in enumerate(self.assignment):
            out[b].append(x)
        return tuple(tuple(b) for b in out)

    def __str__(self) -> str:
        body = "".join(
            "{" + ",".join(str(x + 1) for x in blk) + "}" for blk in self.blocks()
        )
        return f"k={self.size} blocks={body}"


def cycle_type_block_groupings(
    t: tuple[int, ...], k: int
) -> Iterator[tuple[tuple[tuple[int, ...], int], ...]]:
    """All groupings of the parts of t compatible with blocks of size k.

    A grouping collects the parts into groups D_1..D_t; the group with
    part sum s contributes an induced cycle of length p = s/k, and every
    part in it must be a multiple of p.  Yields each grouping once, as a
    sorted tuple of (group parts, p) pairs.
    """
    d = sum(t)
    if d % k or not 1 < k < d:
        raise ValueError("block size must properly divide the degree")
    parts = sorted(t, reverse=True)
    seen: set[tuple] = set()

    def rec(remaining: list[int], groups: list[tuple[tuple[int, ...], int]]):
        if not remaining:
            key = tuple(sorted(groups))
            if key not in seen:
                seen.add(key)
                yield key
            return
        anchor = remaining[0]
        rest = remaining[1:]
        # the anchor always joins the next group; choose its companions
        for r in range(len(rest) + 1):
            for combo in combinations(range(len(rest)), r):
                group = [anchor] + [rest[i] for i in combo]
                s = sum(group)
                if s % k:
                    continue
                p = s // k
                if any(x % p for x in group):
                    continue
                left = [rest[i] for i in range(len(rest)) if i not in combo]
                yield from rec(left, groups + [(tuple(sorted(group, reverse=True)), p)])

    yield from rec(parts, [])


def induced_cycle_type(grouping: tuple[tuple[tuple[int, ...], int], ...]) -> tuple[int, ...]:
    return tuple(sorted((p for _, p in grouping), reverse=True))


def _closure(d: int, seed_pairs, gens: Sequence[Perm]) -> list[int]:
    """Finest generator-invariant partition identifying the seed pairs.

    Whenever two classes merge, the images of the merging pair under
    every generator are merged as well, and the propagation repeats
    until stable.
    """
    parent = list(range(d))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    pending = []

    def union(a: int, b: int) -> None:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[rb] = ra
            pending.append((a, b))

    for a, b in seed_pairs:
        union(a, b)
    while pending:
        a, b = pending.pop()
        for g in gens:
            union(g[a], g[b])
    return [find(x) for x in range(d)]


def _canonical_assignment(roots: list[int]) -> tuple[int, ...]:
    ids: dict[int, int] = {}
    out = []
    for r in roots:
        if r not in ids:
            ids[r] = len(ids)
        out.append(ids[r])
    return tuple(out)


def all_block_systems(gens: Sequence[Perm]) -> list[tuple[int, ...]]:
    """Every proper block system of the generated transitive group.

    Minimal systems come from the pairwise closures (0, x); the rest are
    joins of those, so the collection is closed under pairwise joins
    until stable.  Transitivity makes all classes of an invariant
    partition equal-sized blocks.
    """
    d = len(gens[0])
    if not is_transitive(gens, d):
        raise ValueError("block systems are defined for transitive actions")
    systems: set[tuple[int, ...]] = set()
    frontier: list[tuple[int, ...]] = []
    for x in range(1, d):
        assignment = _canonical_assignment(_closure(d, [(0, x)], gens))
        blocks = len(set(assignment))
        if 1 < blocks < d:
            if assignment not in systems:
                systems.add(assignment)
                frontier.append(assignment)
    while frontier:
        fresh: list[tuple[int, ...]] = []
        for a in frontier:
            for b in list(systems):
                pairs = []
                rep: dict[int, int] = {}
                for assign in (a, b):
                    rep.clear()
                    for x, blk in enumerate(assign):
                        if blk in rep:
                            pairs.append((rep[blk], x))
                        else:
                            rep[blk] = x
                joined = _canonical_assignment(_closure(d, pairs, gens))
                blocks = len(set(joined))
                if 1 < blocks < d and joined not in systems:
                    systems.add(joined)
                    fresh.append(joined)
        frontier = fresh
    return sorted(systems)


def find_block_decomposition(gens: Sequence[Perm], k: int) -> BlockDecomposition | None:
    """Some block system of order k preserved by all generators, or None.

    Deterministic tie-break: the system whose block containing 1 is
    lexicographically smallest.
    """
    d = len(gens[0])
    if d % k or not 1 < k < d:
        raise ValueError("block size must properly divide the degree")
    if not is_transitive(gens, d):
        raise ValueError("block systems are defined for transitive actions")
    best = None
    best_key = None
    for assignment in all_block_systems(gens):
        size = d // len(set(assignment))
        if size != k:
            continue
        block0 = tuple(x for x in range(d) if assignment[x] == assignment[0])
        if best_key is None or block0 < best_key:
            best_key = block0
            best = assignment
    if best is None:
        return None
    return BlockDecomposition(k, best)


def induced_permutation(bd: BlockDecomposition, p: Perm) -> Perm:
    """The permutation of block ids induced by p; raises if p does not
    map blocks to blocks."""
    images = [-1] * bd.block_count
    for x, v in enumerate(p):
        b, c = bd.assignment[x], bd.assignment[v]
        if images[b] == -1:
            images[b] = c
        elif images[b] != c:
            raise ValueError("permutation does not preserve the block system")
    return tuple(images)


def block_grouping_of(
    bd: BlockDecomposition, p: Perm
) -> tuple[tuple[tuple[int, ...], int], ...]:
    """The grouping realized by p on a preserved block system: one group
    per induced cycle, holding the lengths of the p-cycles above it."""
    hat = induced_permutation(bd, p)
    point_cycles = cycles(p)
    cycle_of_point = {}
    for idx, cyc in enumerate(point_cycles):
        for x in cyc:
            cycle_of_point[x] = idx
    groups = []
    for hat_cyc in cycles(hat):
        members = {
            cycle_of_point[x]
            for x in range(bd.degree)
            if bd.assignment[x] in hat_cyc
        }
        lengths = tuple(sorted((len(point_cycles[i]) for i in members), reverse=True))
        groups.append((lengths, len(hat_cyc)))
    return tuple(sorted(groups))


def factor_covering(
    datum: BranchDatum, realization: Realization, bd: BlockDecomposition
) -> tuple[BranchDatum, BranchDatum]:
    """Split the witnessed covering through the block system.

    Returns (inner, outer): the inner datum covers the intermediate
    surface with degree k and one branch point per induced cycle; the
    outer datum is the induced action on blocks, degree d/k.  Trivial
    partitions arising on either side are dropped with the branch count
    adjusted.  The intermediate surface is read off the outer datum by
    the Euler-count condition.
    """
    d = datum.degree
    k = bd.size
    taus = realization.taus
    outer_parts = []
    inner_parts = []
    for tau in taus:
        hat = induced_permutation(bd, tau)  # raises if not preserved
        outer_parts.append(cycle_type(hat))
        for group, p in block_grouping_of(bd, tau):
            inner_parts.append(tuple(sorted((x // p for x in group), reverse=True)))

    outer_kept = [t for t in outer_parts if any(x > 1 for x in t)]
    n_out = len(outer_kept)
    nt_out = sum(len(t) for t in outer_kept)
    chi_mid = nt_out + (d // k) * (datum.base.euler_characteristic - n_out)
    mid = surface_from_euler(chi_mid, True) if datum.base.orientable else None
    if mid is None:
        raise ValueError("block system does not induce a closed intermediate surface")
    outer = BranchDatum(mid, datum.base, d // k, tuple(Partition(t) for t in outer_kept))

    inner_kept = tuple(
        Partition(t) for t in inner_parts if any(x > 1 for x in t)
    )
    inner = BranchDatum(datum.cover, mid, k, inner_kept)
    return inner, outer


def verify_filtration(datum: BranchDatum, realization: Realization) -> bool:
    """Check the forced degree-2 factorization of a very even datum.

    For a sphere datum with even degree and two partitions made of even
    parts only, every witness must admit a block system of order d/2
    whose induced action is the two-sheeted covering: two partitions (2)
    and n-2 partitions (1,1).  A False return is a falsification event.
    """
    d = datum.degree
    if datum.base != SPHERE or d % 2:
        raise ValueError("filtration check needs a sphere datum of even degree")
    evens = [p for p in datum.partitions if all(x % 2 == 0 for x in p.parts)]
    if len(evens) < 2:
        raise ValueError("filtration check needs two all-even partitions")
    if not verify_witness(datum, realization):
        raise ValueError("realization does not witness the datum")
    gens = list(realization.taus)
    want = sorted([(2,)] * 2 + [(1, 1)] * (datum.n - 2))
    for assignment in all_block_systems(gens):
        if len(set(assignment)) != 2:
            continue
        bd = BlockDecomposition(d // 2, assignment)
        try:
            outer = sorted(cycle_type(induced_permutation(bd, tau)) for tau in gens)
        except ValueError:
            continue
        if outer == want:
            return True
    return False
