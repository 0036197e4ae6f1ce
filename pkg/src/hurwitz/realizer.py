"""Exhaustive realizability search over the sphere as base surface.

A datum is realizable iff there are permutations tau_1..tau_n, one per
branching partition, with the prescribed cycle types, product equal to
the identity (right factor acting first), and transitive joint action.
The search anchors tau_1 to the canonical representative of the class
with the fewest elements -- simultaneous conjugation of a whole tuple
preserves every constraint, so nothing is lost -- and walks the other
classes depth-first, smallest first, with the last class never
enumerated: the product's cycle type is compared against it directly.

Pruning, all of it certificate-preserving:

* the second permutation ranges over orbit representatives of its class
  under conjugation by the centralizer of the anchored tau_1;
* a partial product pi must stay within transposition distance of what
  the remaining classes can still contribute, with matching parity;
* the orbit partition of the placed generators must be mergeable into
  one orbit by the cycles the remaining enumerated classes can offer.

Budgets count visited candidates.  Only a completed walk certifies
exceptionality; a randomized witness hunt (fixed seed, deterministic)
runs first whenever the remaining classes are too large to walk
cheaply, so oversized realizable data still produce witnesses.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from itertools import islice
from math import prod

import numpy as np

from .core import (
    SPHERE,
    PROJECTIVE,
    BranchDatum,
    Partition,
    check_compatibility,
)
from .perms import (
    Perm,
    class_iterator,
    class_representative,
    class_size,
    centralizer_generators,
    compose,
    conjugate,
    cycle_count,
    cycle_type,
    identity,
    inverse,
    is_transitive,
    product,
    random_permutation,
)

FOUND = "found"
EXHAUSTED = "exhausted"
BUDGET_EXCEEDED = "budget-exceeded"

DEFAULT_BUDGET = 10**9

_REDUCTION_LIMIT = 200_000  # max class size for centralizer-orbit reduction
_CACHE_LIMIT = 300_000      # max class size kept as a reusable list
_RANDOM_TRIGGER = 20_000    # remaining-space size that switches the hunt on
_NUMPY_MIN = 20_000         # scan length where the vectorized path pays off
_CHUNK = 50_000
_SEED = 0x5EED


@dataclass(frozen=True, slots=True)
class Realization:
    """A witness tuple: permutations with trivial product, one per
    branching point, generating a transitive group."""

    degree: int
    taus: tuple[Perm, ...]

    @property
    def n(self) -> int:
        return len(self.taus)


@dataclass(frozen=True, slots=True)
class SearchResult:
    status: str
    realization: Realization | None
    nodes: int


class _OutOfBudget(Exception):
    pass


class _Witness(Exception):
    def __init__(self, taus):
        self.taus = taus


def verify_witness(datum: BranchDatum, realization: Realization) -> bool:
    """Product is the identity, action transitive, cycle types match the
    datum's partitions as multisets."""
    d = datum.degree
    if realization.degree != d or realization.n != datum.n:
        return False
    taus = realization.taus
    if any(len(t) != d for t in taus):
        return False
    if product(taus, d) != identity(d):
        return False
    if not is_transitive(taus, d):
        return False
    got = sorted(cycle_type(t) for t in taus)
    want = sorted(p.parts for p in datum.partitions)
    return got == want


_reps_cache: dict[tuple[tuple[int, ...], tuple[int, ...]], list[Perm]] = {}
_class_cache: dict[tuple[int, ...], list[Perm]] = {}


def _build_class_list(t: tuple[int, ...]) -> list[Perm]:
    # same enumeration order as class_iterator, minus the generator
    # machinery; materializing 10^5-element classes is a hot spot
    from collections import Counter

    d = sum(t)
    counts = Counter(t)
    lengths = sorted(counts, reverse=True)
    images = list(range(d))
    used = bytearray(d)
    out: list[Perm] = []

    def rec(remaining: int) -> None:
        if remaining == 0:
            out.append(tuple(images))
            return
        a = used.index(0)
        used[a] = 1
        for ln in lengths:
            if counts[ln] == 0:
                continue
            counts[ln] -= 1
            if ln == 1:
                images[a] = a
                rec(remaining - 1)
            else:
                pool = [i for i in range(d) if not used[i]]
                for rest in itertools.permutations(pool, ln - 1):
                    prev = a
                    for x in rest:
                        images[prev] = x
                        used[x] = 1
                        prev = x
                    images[prev] = a
                    rec(remaining - ln)
                    for x in rest:
                        used[x] = 0
            counts[ln] += 1
        used[a] = 0

    rec(d)
    return out


def _class_list(t: tuple[int, ...]) -> list[Perm]:
    lst = _class_cache.get(t)
    if lst is None:
        lst = _build_class_list(t)
        _class_cache[t] = lst
    return lst


def _anchored_reps(anchor: tuple[int, ...], t: tuple[int, ...]) -> list[Perm]:
    """Orbit representatives of class t under conjugation by the
    centralizer of class_representative(anchor): one per orbit, the
    first in canonical class order."""
    key = (anchor, t)
    reps = _reps_cache.get(key)
    if reps is not None:
        return reps
    zgens = centralizer_generators(anchor)
    cls = _class_list(t)
    d = sum(t)
    if not zgens:
        _reps_cache[key] = cls
        return cls
    if d <= 15:
        reps = _orbit_firsts_vectorized(cls, zgens, d)
    else:
        reps = _orbit_firsts_hashed(cls, zgens)
    _reps_cache[key] = reps
    return reps


def _orbit_firsts_vectorized(cls: list[Perm], zgens: list[Perm], d: int) -> list[Perm]:
    # permutations packed into int64 keys (d^d fits for d <= 15); each
    # conjugation becomes an index map on the class, and the orbits are
    # the connected components of those maps
    from scipy.sparse import coo_matrix
    from scipy.sparse.csgraph import connected_components

    n = len(cls)
    arr = np.fromiter(
        itertools.chain.from_iterable(cls), dtype=np.int64, count=n * d
    ).reshape(n, d)
    weights = d ** np.arange(d, dtype=np.int64)
    keys = arr @ weights
    order = np.argsort(keys, kind="stable")
    sorted_keys = keys[order]
    conj_keys = np.empty(n * len(zgens), dtype=np.int64)
    for i, z in enumerate(zgens):
        z_arr = np.array(z, dtype=np.int64)
        zinv = np.array(inverse(z), dtype=np.int64)
        conj_keys[i * n : (i + 1) * n] = z_arr[arr[:, zinv]] @ weights
    pos = np.searchsorted(sorted_keys, conj_keys)
    if not (sorted_keys[pos] == conj_keys).all():
        raise AssertionError("conjugate left its class: centralizer is wrong")
    cols = order[pos]
    rows = np.tile(np.arange(n, dtype=np.int64), len(zgens))
    graph = coo_matrix(
        (np.ones(n * len(zgens), dtype=np.int8), (rows, cols)), shape=(n, n)
    )
    _, labels = connected_components(graph, directed=False)
    _, firsts = np.unique(labels, return_index=True)
    return [cls[i] for i in sorted(int(i) for i in firsts)]


def _orbit_firsts_hashed(cls: list[Perm], zgens: list[Perm]) -> list[Perm]:
    reps = []
    seen: set[Perm] = set()
    for sigma in cls:
        if sigma in seen:
            continue
        reps.append(sigma)
        seen.add(sigma)
        frontier = [sigma]
        while frontier:
            nxt = []
            for s in frontier:
                for z in zgens:
                    c = conjugate(s, z)
                    if c not in seen:
                        seen.add(c)
                        nxt.append(c)
            frontier = nxt
    return reps


def _target_fix_counts(t: tuple[int, ...], d: int) -> list[int]:
    # fix(sigma^j) for j=1..d determines the cycle type and vice versa
    return [sum(ln for ln in t if j % ln == 0) for j in range(1, d + 1)]


class _Budget:
    __slots__ = ("limit", "nodes")

    def __init__(self, limit: int):
        self.limit = limit
        self.nodes = 0

    def spend(self, k: int = 1) -> None:
        if self.nodes + k > self.limit:
            self.nodes = self.limit
            raise _OutOfBudget
        self.nodes += k


def _merge_cycles(parent: list[int], sigma: Perm) -> tuple[list[int], int]:
    """Union the cycles of sigma into a copy of the orbit partition;
    returns (new partition, orbit count)."""
    par = parent[:]

    def find(x: int) -> int:
        while par[x] != x:
            par[x] = par[par[x]]
            x = par[x]
        return x

    for i, v in enumerate(sigma):
        ri, rv = find(i), find(v)
        if ri != rv:
            par[rv] = ri
    count = sum(1 for i in range(len(par)) if find(i) == i)
    return par, count


def _random_hunt(
    d: int,
    tau1: Perm,
    middle: list[tuple[int, ...]],
    target: tuple[int, ...],
    budget: _Budget,
    attempts: int,
) -> tuple[Perm, ...] | None:
    rng = random.Random(_SEED)
    reps = [class_representative(t) for t in middle]
    cost = len(middle)
    for _ in range(attempts):
        budget.spend(cost)
        sigmas = [conjugate(rep, random_permutation(d, rng)) for rep in reps]
        pi = tau1
        for s in sigmas:
            pi = compose(pi, s)
        if cycle_type(pi) != target:
            continue
        if not is_transitive([tau1, *sigmas], d):
            continue
        return (tau1, *sigmas, inverse(pi))
    return None


def _scan_python(stream, pi, target, parent, budget, gens_for_transitivity, d):
    for sigma in stream:
        budget.spend(1)
        prod_images = tuple(map(pi.__getitem__, sigma))
        if cycle_type(prod_images) != target:
            continue
        _, orbit_count = _merge_cycles(parent, sigma)
        if orbit_count != 1:
            continue
        raise _Witness((*gens_for_transitivity, sigma, inverse(prod_images)))


def _scan_numpy(stream, pi, target, parent, budget, gens_for_transitivity, d):
    pi_arr = np.array(pi, dtype=np.int64)
    idx = np.arange(d, dtype=np.int64)
    tfix = _target_fix_counts(target, d)
    it = iter(stream)
    while True:
        chunk = list(islice(it, _CHUNK))
        if not chunk:
            return
        arr = np.array(chunk, dtype=np.int64)
        comp = pi_arr[arr]
        mask = np.ones(len(chunk), dtype=bool)
        cur = comp
        for j in range(1, d + 1):
            if j > 1:
                cur = np.take_along_axis(comp, cur, axis=1)
            mask &= (cur == idx).sum(axis=1) == tfix[j - 1]
            if not mask.any():
                break
        remaining = budget.limit - budget.nodes
        for h in np.flatnonzero(mask):
            h = int(h)
            if h + 1 > remaining:
                budget.spend(h + 1)  # raises
            sigma = chunk[h]
            _, orbit_count = _merge_cycles(parent, sigma)
            if orbit_count != 1:
                continue
            budget.spend(h + 1)
            prod_images = tuple(map(pi.__getitem__, sigma))
            raise _Witness((*gens_for_transitivity, sigma, inverse(prod_images)))
        budget.spend(len(chunk))


def search(datum: BranchDatum, budget: int = DEFAULT_BUDGET) -> SearchResult:
    """Decide realizability of a compatible datum over the sphere base.

    Returns FOUND with a verified witness, EXHAUSTED when the whole
    anchored space has been covered (certifying exceptionality), or
    BUDGET_EXCEEDED.  The budget is counted in visited candidates and
    the result is eagerly BUDGET_EXCEEDED when the walk provably cannot
    complete within it.  Deterministic: same datum, same outcome.
    """
    if datum.base != SPHERE:
        raise ValueError("search runs over base = sphere only")
    if not check_compatibility(datum).compatible:
        raise ValueError("datum is not compatible")
    d = datum.degree
    n = datum.n
    if n == 0 or n == 1:
        # the identity tuple is never transitive for d >= 2, and a single
        # permutation with trivial product would need cycle type (1,...,1)
        return SearchResult(EXHAUSTED, None, 0)
    types = sorted((p.parts for p in datum.partitions), key=lambda t: (class_size(t), t))
    if n == 2:
        t1, t2 = types
        if t1 == (d,) and t2 == (d,):
            rep = class_representative(t1)
            return SearchResult(FOUND, Realization(d, (rep, inverse(rep))), 1)
        return SearchResult(EXHAUSTED, None, 1)

    anchor, middle, target = types[0], types[1:-1], types[-1]
    tau1 = class_representative(anchor)
    bud = _Budget(budget)

    try:
        estimate = prod(class_size(t) for t in middle)
        if estimate > _RANDOM_TRIGGER:
            attempts = min(40_000, max(2_000, estimate // 50))
            taus = _random_hunt(d, tau1, middle, target, bud, attempts)
            if taus is not None:
                realization = Realization(d, taus)
                assert verify_witness(datum, realization)
                return SearchResult(FOUND, realization, bud.nodes)

        # candidate plan per enumerated level
        plan: list[list[Perm] | tuple[int, ...]] = []
        for j, t in enumerate(middle):
            size = class_size(t)
            if j == 0 and size <= _REDUCTION_LIMIT:
                plan.append(_anchored_reps(anchor, t))
            elif size <= _CACHE_LIMIT:
                plan.append(_class_list(t))
            else:
                plan.append(t)  # re-streamed on each visit
        first_count = len(plan[0]) if isinstance(plan[0], list) else class_size(middle[0])
        if first_count > budget - bud.nodes:
            return SearchResult(BUDGET_EXCEEDED, None, bud.nodes)

        # merge capacity of the classes still to be placed (the forced
        # last permutation lies in the generated group, so it adds none)
        merge_left = [d - len(t) for t in middle]
        suffix_merge = [0] * (len(middle) + 1)
        for j in range(len(middle) - 1, -1, -1):
            suffix_merge[j] = suffix_merge[j + 1] + merge_left[j]
        # transposition capacity includes the forced last permutation
        suffix_trans = [x + (d - len(target)) for x in suffix_merge]

        parent0, orb0 = _merge_cycles(list(range(d)), tau1)
        if d - cycle_count(tau1) > suffix_trans[0]:
            return SearchResult(EXHAUSTED, None, bud.nodes)
        if orb0 - 1 > suffix_merge[0]:
            return SearchResult(EXHAUSTED, None, bud.nodes)

        last = len(middle) - 1

        def walk(j: int, pi: Perm, parent: list[int], gens: tuple[Perm, ...]) -> None:
            source = plan[j]
            stream = iter(source) if isinstance(source, list) else class_iterator(source)
            if j == last:
                size = len(source) if isinstance(source, list) else class_size(source)
                scan = _scan_numpy if size >= _NUMPY_MIN else _scan_python
                scan(stream, pi, target, parent, bud, gens, d)
                return
            for sigma in stream:
                bud.spend(1)
                pi2 = compose(pi, sigma)
                need = d - cycle_count(pi2)
                cap = suffix_trans[j + 1]
                if need > cap or (cap - need) & 1:
                    continue
                parent2, orb2 = _merge_cycles(parent, sigma)
                if orb2 - 1 > suffix_merge[j + 1]:
                    continue
                walk(j + 1, pi2, parent2, (*gens, sigma))

        walk(0, tau1, parent0, (tau1,))
    except _OutOfBudget:
        return SearchResult(BUDGET_EXCEEDED, None, bud.nodes)
    except _Witness as w:
        realization = Realization(d, w.taus)
        assert verify_witness(datum, realization)
        return SearchResult(FOUND, realization, bud.nodes)
    return SearchResult(EXHAUSTED, None, bud.nodes)


def _half_splits(p: Partition) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Unordered splittings of a partition into two halves of degree/2,
    the lexicographically larger half first, each exactly once."""
    half = p.degree // 2
    parts = list(p.parts)
    seen: set[tuple[tuple[int, ...], tuple[int, ...]]] = set()
    out = []

    def rec(i: int, chosen: list[int], total: int) -> None:
        if total == half:
            a = tuple(sorted(chosen, reverse=True))
            rest = list(parts)
            for x in chosen:
                rest.remove(x)
            b = tuple(sorted(rest, reverse=True))
            pair = (a, b) if a >= b else (b, a)
            if pair not in seen:
                seen.add(pair)
                out.append(pair)
            return
        if i >= len(parts) or total > half:
            return
        # equal parts are taken as a bundle, which dedups sub-multisets
        j = i
        while j < len(parts) and parts[j] == parts[i]:
            j += 1
        for take in range(j - i, -1, -1):
            rec(j, chosen + [parts[i]] * take, total + parts[i] * take)

    rec(0, [], 0)
    return out


def reduce_projective(datum: BranchDatum):
    """Rewrite a datum over the projective plane with orientable cover as
    the stream of sphere data it is equivalent to.

    Each branching partition is split into two partitions of d/2 (it
    refines (d/2, d/2) by compatibility); every combination of splits
    yields one datum over the sphere with doubled branching points and
    halved degree, trivial halves dropped.  The original datum is
    realizable iff at least one yielded datum is.
    """
    if datum.base != PROJECTIVE:
        raise ValueError("reduction applies to base = projective plane")
    if not datum.cover.orientable:
        raise ValueError("non-orientable covers of the projective plane "
                         "are handled directly, not by reduction")
    if datum.degree % 2 or datum.degree < 4:
        raise ValueError("reduction needs an even degree of at least 4")
    options = [_half_splits(p) for p in datum.partitions]
    seen: set[BranchDatum] = set()
    for combo in itertools.product(*options):
        halves = [h for pair in combo for h in pair]
        kept = tuple(Partition(h) for h in halves if any(x > 1 for x in h))
        reduced = BranchDatum(datum.cover, SPHERE, datum.degree // 2, kept)
        if reduced not in seen:
            seen.add(reduced)
            yield reduced
