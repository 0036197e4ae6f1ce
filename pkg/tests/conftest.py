"""Shared test oracles, deliberately independent of the production code
paths they are used to check."""

from __future__ import annotations

from itertools import combinations

from hurwitz import perms
from hurwitz.core import BranchDatum, Partition, SPHERE


def partition_count_oracle(d: int) -> int:
    """Number of partitions of d by the classic dynamic program."""
    table = [1] + [0] * d
    for part in range(1, d + 1):
        for total in range(part, d + 1):
            table[total] += table[total - part]
    return table[d]


def naive_search_n3(datum: BranchDatum) -> bool:
    """Reference decision for n=3 sphere data: first permutation fixed to
    the canonical representative of the smallest class, second ranging
    over its full conjugacy class, no pruning of any kind."""
    d = datum.degree
    types = sorted(
        (p.parts for p in datum.partitions), key=lambda t: (perms.class_size(t), t)
    )
    t1, t2, t3 = types
    tau1 = perms.class_representative(t1)
    for tau2 in perms.class_iterator(t2):
        prod = perms.compose(tau1, tau2)
        if perms.cycle_type(prod) != t3:
            continue
        if perms.is_transitive([tau1, tau2], d):
            return True
    return False


def naive_search_n3_unanchored(datum: BranchDatum) -> bool:
    """Like naive_search_n3 but with the first permutation also ranging
    over its whole class; checks that anchoring loses nothing."""
    d = datum.degree
    types = sorted(
        (p.parts for p in datum.partitions), key=lambda t: (perms.class_size(t), t)
    )
    t1, t2, t3 = types
    for tau1 in perms.class_iterator(t1):
        for tau2 in perms.class_iterator(t2):
            prod = perms.compose(tau1, tau2)
            if perms.cycle_type(prod) != t3:
                continue
            if perms.is_transitive([tau1, tau2], d):
                return True
    return False


def brute_block_systems(gens, k: int) -> list[tuple[tuple[int, ...], ...]]:
    """All block systems of order k by scanning every partition of the
    ground set into d/k blocks of size k."""
    d = len(gens[0])
    found = []

    def preserved(blocks: tuple[tuple[int, ...], ...]) -> bool:
        block_of = {}
        for i, blk in enumerate(blocks):
            for x in blk:
                block_of[x] = i
        for g in gens:
            for blk in blocks:
                images = {block_of[g[x]] for x in blk}
                if len(images) != 1:
                    return False
        return True

    def rec(remaining: tuple[int, ...], blocks: list[tuple[int, ...]]):
        if not remaining:
            blk = tuple(sorted(blocks))
            if preserved(blk):
                found.append(blk)
            return
        anchor = remaining[0]
        rest = remaining[1:]
        for combo in combinations(rest, k - 1):
            blocks.append((anchor,) + combo)
            left = tuple(x for x in rest if x not in combo)
            rec(left, blocks)
            blocks.pop()

    rec(tuple(range(d)), [])
    return found


def make_datum(cover, base, d, parts) -> BranchDatum:
    return BranchDatum(cover, base, d, tuple(Partition(tuple(p)) for p in parts))


def sphere_datum(d, parts, cover=SPHERE) -> BranchDatum:
    return make_datum(cover, SPHERE, d, parts)


def all_sphere_over_sphere_data(d) -> list[BranchDatum]:
    """Every compatible (S, S, n, d) datum over the full admissible range
    of n, enumerated by exact preimage-count targets (the cover being the
    sphere pins the total)."""
    from hurwitz.core import check_compatibility, partitions_of

    menu = sorted((p for p in partitions_of(d) if not p.is_trivial), key=len)
    sizes = [len(p) for p in menu]
    max_m = sizes[-1] if sizes else 0
    out = []
    for n in range(1, 2 * d - 1):
        target = 2 + d * (n - 2)
        if target < n:
            continue

        def rec(idx, left, total, chosen):
            if left == 0:
                if total == target:
                    datum = BranchDatum(SPHERE, SPHERE, d, tuple(chosen))
                    if check_compatibility(datum).compatible:
                        out.append(datum)
                return
            if idx >= len(menu):
                return
            if total + left * sizes[idx] > target or total + left * max_m < target:
                return
            for take in range(left, -1, -1):
                rec(idx + 1, left - take, total + take * sizes[idx],
                    chosen + [menu[idx]] * take)

        rec(0, n, 0, [])
    return out
