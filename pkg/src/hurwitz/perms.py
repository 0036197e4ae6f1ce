"""Permutations of {1..d} stored as 0-indexed image tuples.

Composition convention, fixed once for the whole package: the right
factor acts first, ``compose(a, b)(x) == a(b(x))``.  Cycle notation for
I/O is 1-based, e.g. ``(1 2 3 4)(5 6)``, fixed points omitted, ``()``
for the identity.
"""

from __future__ import annotations

import itertools
import re
from collections import Counter
from functools import lru_cache
from math import factorial
from typing import Iterable, Iterator, Sequence

Perm = tuple[int, ...]


def identity(d: int) -> Perm:
    return tuple(range(d))


def compose(a: Perm, b: Perm) -> Perm:
    """a after b: result(x) = a(b(x))."""
    if len(a) != len(b):
        raise ValueError("degree mismatch")
    return tuple(a[x] for x in b)


def inverse(p: Perm) -> Perm:
    q = [0] * len(p)
    for i, v in enumerate(p):
        q[v] = i
    return tuple(q)


def conjugate(p: Perm, g: Perm) -> Perm:
    """g o p o g^-1, i.e. p relabelled through g."""
    q = [0] * len(p)
    for i, gi in enumerate(g):
        q[gi] = g[p[i]]
    return tuple(q)


def cycles(p: Perm) -> tuple[tuple[int, ...], ...]:
    """Disjoint cycles, fixed points included, each starting at its
    smallest element, ordered by that element."""
    seen = bytearray(len(p))
    out = []
    for i in range(len(p)):
        if not seen[i]:
            cyc = []
            j = i
            while not seen[j]:
                seen[j] = 1
                cyc.append(j)
                j = p[j]
            out.append(tuple(cyc))
    return tuple(out)


def cycle_type(p: Perm) -> tuple[int, ...]:
    seen = bytearray(len(p))
    out = []
    for i in range(len(p)):
        if not seen[i]:
            ln = 0
            j = i
            while not seen[j]:
                seen[j] = 1
                j = p[j]
                ln += 1
            out.append(ln)
    out.sort(reverse=True)
    return tuple(out)


def cycle_count(p: Perm) -> int:
    seen = bytearray(len(p))
    count = 0
    for i in range(len(p)):
        if not seen[i]:
            count += 1
            j = i
            while not seen[j]:
                seen[j] = 1
                j = p[j]
    return count


def is_transitive(gens: Sequence[Perm], degree: int) -> bool:
    """Orbit closure of 0 under the generated group covers {0..d-1}."""
    if degree <= 1:
        return True
    if not gens:
        return False
    seen = bytearray(degree)
    seen[0] = 1
    stack = [0]
    found = 1
    while stack:
        x = stack.pop()
        for g in gens:
            y = g[x]
            if not seen[y]:
                seen[y] = 1
                found += 1
                stack.append(y)
    return found == degree


@lru_cache(maxsize=None)
def class_size(t: tuple[int, ...]) -> int:
    """Size of the conjugacy class with cycle type t."""
    d = sum(t)
    denom = 1
    for ln, c in Counter(t).items():
        denom *= (ln ** c) * factorial(c)
    return factorial(d) // denom


def class_representative(t: tuple[int, ...]) -> Perm:
    """The permutation whose cycles are consecutive blocks (1..t1)(..)..."""
    images = []
    start = 0
    for ln in sorted(t, reverse=True):
        images.extend(range(start + 1, start + ln))
        images.append(start)
        start += ln
    return tuple(images)


def class_iterator(
    t: tuple[int, ...], *, split: tuple[int, int] | None = None
) -> Iterator[Perm]:
    """Stream every permutation of cycle type t exactly once.

    Cycles are assigned by backtracking, always anchoring the next cycle
    at the smallest unused point; equal cycle lengths are tried once per
    anchor, which dedups without hashing.  ``split=(i, k)`` keeps only
    every k-th top-level branch (offset i), so k split iterators are
    disjoint and jointly exhaustive -- the hook for data-parallel use.
    """
    d = sum(t)
    counts = Counter(t)
    lengths = sorted(counts, reverse=True)
    images = [0] * d
    used = bytearray(d)
    split_idx, split_total = split if split is not None else (0, 1)
    top_branch = itertools.count()

    def rec(remaining: int, top: bool) -> Iterator[Perm]:
        if remaining == 0:
            yield tuple(images)
            return
        a = used.index(0)
        used[a] = 1
        for ln in lengths:
            if counts[ln] == 0:
                continue
            counts[ln] -= 1
            pool = [i for i in range(d) if not used[i]]
            for rest in itertools.permutations(pool, ln - 1):
                if top and next(top_branch) % split_total != split_idx:
                    continue
                prev = a
                for x in rest:
                    images[prev] = x
                    used[x] = 1
                    prev = x
                images[prev] = a
                yield from rec(remaining - ln, False)
                for x in rest:
                    used[x] = 0
            counts[ln] += 1
        used[a] = 0

    return rec(d, True)


def centralizer_generators(t: tuple[int, ...]) -> list[Perm]:
    """Generators of the centralizer of class_representative(t):
    one rotation per cycle plus swaps of adjacent equal-length blocks."""
    d = sum(t)
    lens = sorted(t, reverse=True)
    starts = []
    pos = 0
    for ln in lens:
        starts.append(pos)
        pos += ln
    gens: list[Perm] = []
    for s, ln in zip(starts, lens):
        if ln == 1:
            continue
        g = list(range(d))
        for i in range(ln):
            g[s + i] = s + (i + 1) % ln
        gens.append(tuple(g))
    for i in range(len(lens) - 1):
        if lens[i] == lens[i + 1]:
            g = list(range(d))
            for j in range(lens[i]):
                g[starts[i] + j] = starts[i + 1] + j
                g[starts[i + 1] + j] = starts[i] + j
            gens.append(tuple(g))
    return gens


def random_permutation(d: int, rng) -> Perm:
    images = list(range(d))
    rng.shuffle(images)
    return tuple(images)


def format_cycles(p: Perm) -> str:
    parts = []
    for cyc in cycles(p):
        if len(cyc) > 1:
            parts.append("(" + " ".join(str(x + 1) for x in cyc) + ")")
    return "".join(parts) if parts else "()"


_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def parse_cycles(s: str, degree: int) -> Perm:
    """Parse 1-based cycle notation into an image tuple of given degree."""
    s = s.strip()
    if not re.fullmatch(r"(\([^()]*\))*", s):
        raise ValueError(f"bad cycle notation: {s!r}")
    images = list(range(degree))
    touched = bytearray(degree)
    for grp in _CYCLE_RE.findall(s):
        entries = [int(x) - 1 for x in grp.split()] if grp.strip() else []
        for x in entries:
            if not 0 <= x < degree:
                raise ValueError(f"point {x + 1} out of range 1..{degree}")
            if touched[x]:
                raise ValueError(f"point {x + 1} appears twice")
            touched[x] = 1
        for i, x in enumerate(entries):
            images[x] = entries[(i + 1) % len(entries)]
    return tuple(images)


def product(perms: Iterable[Perm], d: int) -> Perm:
    """compose(p1, compose(p2, ...)): the last factor acts first."""
    out = identity(d)
    for p in perms:
        out = compose(out, p)
    return out
