"""Domain types for candidate branched coverings between closed surfaces.

A candidate covering is recorded as a *branch datum*: the cover and base
surfaces, the total degree d, and one partition of d per branching point
(the local degrees over that point).  This module implements the five
classical necessary conditions for such a datum to come from an actual
covering (the Euler-characteristic count, a parity constraint, and three
orientability constraints), cover-surface inference, partition plumbing,
and the one-line text grammar shared by the CLI and the catalog.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence


class DatumParseError(ValueError):
    """Raised when a datum line or surface token cannot be parsed."""


@dataclass(frozen=True, slots=True, order=True)
class Partition:
    """A partition of a positive integer, stored with parts non-increasing.

    Doubles as the cycle type of a permutation.  Input parts may come in
    any order; they are normalized on construction.
    """

    parts: tuple[int, ...]

    def __post_init__(self) -> None:
        parts = tuple(sorted(self.parts, reverse=True))
        if not parts:
            raise ValueError("a partition needs at least one part")
        if parts[-1] < 1:
            raise ValueError(f"partition parts must be positive: {parts}")
        object.__setattr__(self, "parts", parts)

    @property
    def degree(self) -> int:
        return sum(self.parts)

    @property
    def is_trivial(self) -> bool:
        """True for (1,...,1), the partition of an unbranched point."""
        return self.parts[0] == 1

    def __len__(self) -> int:
        return len(self.parts)

    def __iter__(self) -> Iterator[int]:
        return iter(self.parts)

    def __getitem__(self, i):
        return self.parts[i]

    def __str__(self) -> str:
        return ",".join(str(x) for x in self.parts)


@dataclass(frozen=True, slots=True)
class Surface:
    """A closed connected surface: orientability flag plus genus."""

    orientable: bool
    genus: int

    def __post_init__(self) -> None:
        if self.genus < 0:
            raise ValueError("genus must be non-negative")
        if not self.orientable and self.genus == 0:
            raise ValueError("a non-orientable surface has genus >= 1")

    @property
    def euler_characteristic(self) -> int:
        if self.orientable:
            return 2 - 2 * self.genus
        return 2 - self.genus

    @property
    def token(self) -> str:
        return f"{'O' if self.orientable else 'N'}{self.genus}"

    def __str__(self) -> str:
        return self.token


SPHERE = Surface(True, 0)
TORUS = Surface(True, 1)
PROJECTIVE = Surface(False, 1)
KLEIN = Surface(False, 2)


def surface_from_token(token: str) -> Surface:
    """Parse a surface token: O<g> orientable, N<g> non-orientable."""
    m = re.fullmatch(r"([ON])(\d+)", token)
    if m is None:
        raise DatumParseError(f"bad surface token {token!r}")
    try:
        return Surface(m.group(1) == "O", int(m.group(2)))
    except ValueError as exc:
        raise DatumParseError(str(exc)) from exc


def surface_from_euler(chi: int, orientable: bool) -> Surface | None:
    """The closed surface of given Euler characteristic, if one exists."""
    if orientable:
        if chi > 2 or chi % 2:
            return None
        return Surface(True, (2 - chi) // 2)
    if chi > 1:
        return None
    return Surface(False, 2 - chi)


@dataclass(frozen=True, slots=True)
class BranchDatum:
    """The object under test: (cover, base, degree, branching partitions).

    Partitions are kept in canonical order (descending lexicographic), so
    two data with the same unordered content compare equal.  Trivial
    partitions (1,...,1) are rejected: they describe unbranched points and
    should simply be dropped by the caller.
    """

    cover: Surface
    base: Surface
    degree: int
    partitions: tuple[Partition, ...]

    def __post_init__(self) -> None:
        if self.degree < 2:
            raise ValueError("degree must be at least 2")
        norm = tuple(
            p if isinstance(p, Partition) else Partition(tuple(p))
            for p in self.partitions
        )
        for p in norm:
            if p.degree != self.degree:
                raise ValueError(f"partition {p} does not sum to degree {self.degree}")
            if p.is_trivial:
                raise ValueError(
                    "trivial partition (1,...,1) marks an unbranched point; drop it"
                )
        norm = tuple(sorted(norm, key=lambda p: p.parts, reverse=True))
        object.__setattr__(self, "partitions", norm)

    @property
    def n(self) -> int:
        """Number of branching points."""
        return len(self.partitions)

    @property
    def n_tilde(self) -> int:
        """Total number of preimages of branching points."""
        return sum(len(p) for p in self.partitions)

    def __str__(self) -> str:
        return format_datum(self)


@dataclass(frozen=True, slots=True)
class CompatibilityReport:
    compatible: bool
    violated: frozenset[int]


def check_compatibility(datum: BranchDatum) -> CompatibilityReport:
    """Check the five necessary conditions, reporting every violation.

    1. chi(cover) - n~ = d * (chi(base) - n)
    2. n*d - n~ is even
    3. orientable base => orientable cover
    4. non-orientable base and odd d => non-orientable cover
    5. non-orientable base with orientable cover => every partition
       refines (d/2, d/2)

    Condition 5 presupposes an even degree (condition 4 flags the odd
    case), so it is evaluated only when d is even.
    """
    d = datum.degree
    n = datum.n
    nt = datum.n_tilde
    violated: set[int] = set()
    if datum.cover.euler_characteristic - nt != d * (datum.base.euler_characteristic - n):
        violated.add(1)
    if (n * d - nt) % 2:
        violated.add(2)
    if datum.base.orientable and not datum.cover.orientable:
        violated.add(3)
    if not datum.base.orientable and datum.cover.orientable:
        if d % 2:
            violated.add(4)
        elif not all(refines_two_halves(p) for p in datum.partitions):
            violated.add(5)
    return CompatibilityReport(not violated, frozenset(violated))


def infer_cover(
    base: Surface, n: int, d: int, partitions: Sequence[Partition | Iterable[int]]
) -> list[Surface]:
    """All cover surfaces consistent with conditions 1, 3 and 4.

    Returns zero, one, or two candidates: for a non-orientable base and
    even degree both orientability types can occur.  Condition 5 is not
    applied here; it stays a compatibility condition reported downstream.
    """
    parts = [p if isinstance(p, Partition) else Partition(tuple(p)) for p in partitions]
    if len(parts) != n:
        raise ValueError(f"expected {n} partitions, got {len(parts)}")
    for p in parts:
        if p.degree != d:
            raise ValueError(f"partition {p} does not sum to degree {d}")
    chi = sum(len(p) for p in parts) + d * (base.euler_characteristic - n)
    out: list[Surface] = []
    if base.orientable or d % 2 == 0:
        s = surface_from_euler(chi, True)
        if s is not None:
            out.append(s)
    if not base.orientable:
        s = surface_from_euler(chi, False)
        if s is not None:
            out.append(s)
    return out


def refines_two_halves(p: Partition) -> bool:
    """True iff some sub-multiset of the parts sums to degree/2."""
    d = p.degree
    if d % 2:
        raise ValueError("refinement of (d/2, d/2) needs an even degree")
    half = d // 2
    reachable = 1
    for x in p.parts:
        reachable |= reachable << x
    return bool((reachable >> half) & 1)


def partitions_of(d: int) -> Iterator[Partition]:
    """All partitions of d, exactly once, in reverse-lexicographic order."""
    if d < 1:
        raise ValueError("d must be positive")
    parts = [d]
    while True:
        yield Partition(tuple(parts))
        i = len(parts) - 1
        while i >= 0 and parts[i] == 1:
            i -= 1
        if i < 0:
            return
        parts[i] -= 1
        rest = len(parts) - i  # freed units plus the one just removed
        parts = parts[: i + 1]
        cap = parts[i]
        while rest > 0:
            c = min(cap, rest)
            parts.append(c)
            rest -= c


_LINE_RE = re.compile(
    r"d=(\d+)\s+cover=(\S+)\s+base=(\S+)\s+parts=\[([0-9,|]*)\]"
)


def format_datum(datum: BranchDatum) -> str:
    """Render the canonical one-line form of a datum.

    Grammar: ``d=<int> cover=<SURF> base=<SURF> parts=[p1,p2,...|q1,...]``.
    """
    body = "|".join(str(p) for p in datum.partitions)
    return f"d={datum.degree} cover={datum.cover.token} base={datum.base.token} parts=[{body}]"


def parse_datum(line: str) -> BranchDatum:
    """Parse a datum line; partitions may arrive in any order."""
    m = _LINE_RE.fullmatch(line.strip())
    if m is None:
        raise DatumParseError(f"bad datum line: {line.strip()!r}")
    d = int(m.group(1))
    cover = surface_from_token(m.group(2))
    base = surface_from_token(m.group(3))
    body = m.group(4)
    try:
        if body:
            partitions = tuple(
                Partition(tuple(int(t) for t in grp.split(","))) for grp in body.split("|")
            )
        else:
            partitions = ()
        return BranchDatum(cover, base, d, partitions)
    except ValueError as exc:
        raise DatumParseError(f"bad datum line: {line.strip()!r} ({exc})") from exc
