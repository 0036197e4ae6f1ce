"""The theorem battery: cheap sufficient conditions for realizability or
exceptionality, each verdict tagged with its rule of provenance, plus the
orchestrator that falls back to exhaustive search.

Every predicate takes a *compatible* datum and either fires a verdict or
returns None.  Positional hypotheses ("two partitions with all parts
even", ...) are matched against all unordered selections of partitions,
since branching points carry no order.  Realizable-firing rules and
exceptional-firing rules can never both hold on one datum; if they ever
do, that is an implementation bug and classify raises loudly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import gcd

from .core import (
    SPHERE,
    TORUS,
    PROJECTIVE,
    BranchDatum,
    check_compatibility,
    refines_two_halves,
)
from . import realizer
from .realizer import (
    DEFAULT_BUDGET,
    Realization,
    reduce_projective,
    search,
)

INCOMPATIBLE = "incompatible"
REALIZABLE = "realizable"
EXCEPTIONAL = "exceptional"
UNKNOWN = "unknown"


class ConsistencyError(RuntimeError):
    """A realizable rule and an exceptional rule fired on one datum."""


@dataclass(frozen=True, slots=True)
class Verdict:
    kind: str
    tags: tuple[str, ...] = ()
    violations: frozenset[int] = field(default_factory=frozenset)
    witness: Realization | None = None
    nodes: int = 0

    def __post_init__(self) -> None:
        if self.kind in (REALIZABLE, EXCEPTIONAL) and not self.tags:
            raise ValueError(f"a {self.kind} verdict needs provenance")
        if self.kind == INCOMPATIBLE and not self.violations:
            raise ValueError("an incompatible verdict needs violations")

    @property
    def provenance(self) -> str:
        """First-firing tag, plus how many further rules agreed."""
        if self.kind == INCOMPATIBLE:
            return "violated:" + ",".join(str(i) for i in sorted(self.violations))
        if not self.tags:
            return ""
        extra = len(self.tags) - 1
        return self.tags[0] + (f"+{extra}" if extra else "")


def _fire(kind: str, tag: str) -> Verdict:
    return Verdict(kind, (tag,))


def _all_multiples(p: Partition, k: int) -> bool:
    return all(x % k == 0 for x in p.parts)


def _all_even(p: Partition) -> bool:
    return all(x % 2 == 0 for x in p.parts)


def thm_chi_nonpositive(datum: BranchDatum) -> Verdict | None:
    """Compatible data over a base of non-positive Euler characteristic
    are always realizable, whatever the orientability pattern."""
    if datum.base.euler_characteristic > 0:
        return None
    if datum.base.orientable:
        return _fire(REALIZABLE, "Thm-OO")
    if datum.cover.orientable:
        return _fire(REALIZABLE, "Thm-ON")
    return _fire(REALIZABLE, "Thm-NN")


def thm_projective(datum: BranchDatum) -> Verdict | None:
    """Projective-plane base with non-orientable cover: always realizable."""
    if datum.base == PROJECTIVE and not datum.cover.orientable:
        return _fire(REALIZABLE, "Thm-NP")
    return None


def thm_full_cycle(datum: BranchDatum) -> Verdict | None:
    """A partition equal to (d) alone makes a sphere datum realizable."""
    if datum.base != SPHERE:
        return None
    if any(len(p) == 1 for p in datum.partitions):
        return _fire(REALIZABLE, "Thm-full-cycle")
    return None


def thm_eks_large(datum: BranchDatum) -> Verdict | None:
    """Large total branching settles everything except degree 4, where
    the exceptional data are exactly (2,2),...,(2,2),(3,1)."""
    if datum.base != SPHERE:
        return None
    d = datum.degree
    defect = datum.n * d - datum.n_tilde
    if d == 4:
        counts = [p.parts for p in datum.partitions]
        if counts.count((2, 2)) == datum.n - 1 and counts.count((3, 1)) == 1:
            return _fire(EXCEPTIONAL, "Thm-EKS-d4")
        return _fire(REALIZABLE, "Thm-EKS-d4")
    if defect >= 3 * (d - 1):
        return _fire(REALIZABLE, "Thm-EKS-bound")
    return None


def prop_eks_222(datum: BranchDatum) -> Verdict | None:
    """Shape (x,d-x),(2,...,2),(2,...,2) over the sphere: realizable iff
    x = d/2."""
    d = datum.degree
    if datum.base != SPHERE or datum.cover != SPHERE or datum.n != 3 or d % 2:
        return None
    all2 = (2,) * (d // 2)
    parts = [p.parts for p in datum.partitions]
    for i, j in combinations(range(3), 2):
        if parts[i] == all2 and parts[j] == all2:
            (third,) = [parts[k] for k in range(3) if k not in (i, j)]
            if len(third) != 2:
                continue
            if third[0] == d // 2:
                return _fire(REALIZABLE, "Prop-EKS-222")
            return _fire(EXCEPTIONAL, "Prop-EKS-222")
    return None


def prop_baranski(datum: BranchDatum) -> Verdict | None:
    """Three sufficient conditions for sphere-over-sphere data: an exact
    preimage-count identity over some subset of the branching points, at
    least d branching points, or all parts <= 2 with every partition long
    enough."""
    if datum.cover != SPHERE or datum.base != SPHERE:
        return None
    d = datum.degree
    ms = [len(p) for p in datum.partitions]
    tags = []
    # subset-sum over (subset size r, preimage total): fire on equality
    # m_{i1}+...+m_{ir} = (r-1)d + 1 for any subset, any r
    reachable: set[tuple[int, int]] = {(0, 0)}
    for m in ms:
        reachable |= {(r + 1, s + m) for r, s in reachable}
    if any((r, (r - 1) * d + 1) in reachable for r in range(1, datum.n + 1)):
        tags.append("Prop-m-sum")
    if datum.n >= d:
        tags.append("Prop-n-ge-d")
    if all(p.parts[0] <= 2 for p in datum.partitions) and all(
        2 * (d - m) * (d - m) <= d for m in ms
    ):
        tags.append("Prop-small-parts")
    if tags:
        return Verdict(REALIZABLE, tuple(tags))
    return None


def _kk_form(third: tuple[int, ...], d: int) -> bool:
    # (k, k, d/2-k, d/2-k) for some k > 0, read off the sorted tuple
    a, b, c, e = third
    return a == b and c == e and a + c == d // 2


def prop_53(datum: BranchDatum) -> Verdict | None:
    """Shape (2,...,2),(5,3,2,...,2),third over the sphere, d >= 8 even.

    Torus cover: exceptional exactly for third = (d/2, d/2).  Sphere
    cover: exceptional exactly for third of the form (k,k,d/2-k,d/2-k),
    or (d/2,d/6,d/6,d/6) when 6 | d.
    """
    d = datum.degree
    if datum.base != SPHERE or datum.n != 3 or d < 8 or d % 2:
        return None
    all2 = (2,) * (d // 2)
    shape = (5, 3) + (2,) * ((d - 8) // 2)
    parts = [p.parts for p in datum.partitions]
    verdicts = []
    for i in range(3):
        for j in range(3):
            if i == j or parts[i] != all2 or parts[j] != shape:
                continue
            (third,) = [parts[k] for k in range(3) if k not in (i, j)]
            if datum.cover == TORUS and len(third) == 2:
                bad = third == (d // 2, d // 2)
            elif datum.cover == SPHERE and len(third) == 4:
                bad = _kk_form(third, d) or (
                    d % 6 == 0 and third == (d // 2, d // 6, d // 6, d // 6)
                )
            else:
                continue
            verdicts.append(EXCEPTIONAL if bad else REALIZABLE)
    if not verdicts:
        return None
    if len(set(verdicts)) > 1:
        raise ConsistencyError(f"ambiguous shape match on {datum}")
    return _fire(verdicts[0], "Prop-53-shape")


def prop_23(datum: BranchDatum) -> Verdict | None:
    """Sphere-over-sphere shape (2,...,2) plus (3,3,2,...,2) or
    (3,2,...,2,1): realizable iff the third partition's largest part
    differs from d/2."""
    d = datum.degree
    if datum.base != SPHERE or datum.cover != SPHERE or datum.n != 3 or d % 2:
        return None
    all2 = (2,) * (d // 2)
    shapes = []
    if d >= 6:
        shapes.append((3, 3) + (2,) * ((d - 6) // 2))
    shapes.append((3,) + (2,) * ((d - 4) // 2) + (1,))
    parts = [p.parts for p in datum.partitions]
    verdicts = []
    for i in range(3):
        for j in range(3):
            if i == j or parts[i] != all2 or parts[j] not in shapes:
                continue
            (third,) = [parts[k] for k in range(3) if k not in (i, j)]
            verdicts.append(EXCEPTIONAL if third[0] == d // 2 else REALIZABLE)
    if not verdicts:
        return None
    if len(set(verdicts)) > 1:
        raise ConsistencyError(f"ambiguous shape match on {datum}")
    return _fire(verdicts[0], "Prop-332-shape")


def thm_fixpoints(datum: BranchDatum) -> Verdict | None:
    """Two partitions with all parts divisible by some k (1 < k < d, k | d)
    cap every other partition's parts at d/k; a larger part anywhere else
    makes the sphere-over-sphere datum exceptional."""
    if datum.base != SPHERE or datum.cover != SPHERE:
        return None
    d = datum.degree
    parts = datum.partitions
    for k in range(2, d):
        if d % k:
            continue
        idx = [i for i, p in enumerate(parts) if _all_multiples(p, k)]
        if len(idx) < 2:
            continue
        bound = d // k
        for i, j in combinations(idx, 2):
            others = [p for t, p in enumerate(parts) if t not in (i, j)]
            if any(p.parts[0] > bound for p in others):
                return _fire(EXCEPTIONAL, "Thm-divisible-pair")
    return None


def thm_even_deg(datum: BranchDatum) -> Verdict | None:
    """Two all-even partitions force every other partition to refine
    (d/2, d/2); a failure makes the sphere-over-sphere datum exceptional."""
    if datum.base != SPHERE or datum.cover != SPHERE or datum.degree % 2:
        return None
    parts = datum.partitions
    idx = [i for i, p in enumerate(parts) if _all_even(p)]
    if len(idx) < 2:
        return None
    for i, j in combinations(idx, 2):
        others = [p for t, p in enumerate(parts) if t not in (i, j)]
        if any(not refines_two_halves(p) for p in others):
            return _fire(EXCEPTIONAL, "Thm-even-pair")
    return None


def cor_mixed(datum: BranchDatum) -> Verdict | None:
    """One all-multiples-of-k partition plus two all-even partitions
    (2k | d, 1 < k < d/2) cap the even pair at d/k and everything else at
    d/2k; any violation makes the sphere-over-sphere datum exceptional."""
    if datum.base != SPHERE or datum.cover != SPHERE:
        return None
    d = datum.degree
    parts = datum.partitions
    for k in range(2, (d + 1) // 2):
        if d % (2 * k):
            continue
        multk = [i for i, p in enumerate(parts) if _all_multiples(p, k)]
        for i1 in multk:
            evens = [j for j, p in enumerate(parts) if j != i1 and _all_even(p)]
            for i2, i3 in combinations(evens, 2):
                if parts[i2].parts[0] > d // k or parts[i3].parts[0] > d // k:
                    return _fire(EXCEPTIONAL, "Cor-mixed-pair")
                rest = [p for t, p in enumerate(parts) if t not in (i1, i2, i3)]
                if any(p.parts[0] > d // (2 * k) for p in rest):
                    return _fire(EXCEPTIONAL, "Cor-mixed-pair")
    return None


def thm_odd_divisible(datum: BranchDatum) -> Verdict | None:
    """Three branching points over the sphere with every part divisible
    by a common odd p >= 3: realizable."""
    if datum.base != SPHERE or datum.n != 3:
        return None
    g = 0
    for p in datum.partitions:
        for x in p.parts:
            g = gcd(g, x)
    while g % 2 == 0:
        g //= 2
    if g >= 3:
        return _fire(REALIZABLE, "Thm-odd-div")
    return None


def lemma_transpos(datum: BranchDatum) -> Verdict | None:
    """The transposition-padded exceptional family.

    For d = k*h (k, h >= 2) and partitions (s_j), (t_j) of h with
    p, q >= 2 and p + q >= h + 2, the datum with partitions
    (k*s_j), (k*t_j), (h+r, 1, ..., 1) and n-3 copies of (2,1,...,1)
    is exceptional whenever 1 <= r < p + q - h and n = p+q-r-h+2.
    """
    if datum.base != SPHERE or datum.cover != SPHERE or datum.n < 3:
        return None
    d = datum.degree
    n = datum.n
    padding = (2,) + (1,) * (d - 2)
    roles = [p.parts for p in datum.partitions if p.parts != padding]
    if len(roles) != 3:
        return None
    for c_idx in range(3):
        c = roles[c_idx]
        if len(c) < 2 or c[0] < 3 or c[1] != 1:
            continue
        ell = c[0]
        a, b = (roles[t] for t in range(3) if t != c_idx)
        for k in range(2, d):
            if d % k:
                continue
            h = d // k
            if h < 2:
                continue
            if not all(x % k == 0 for x in a) or not all(x % k == 0 for x in b):
                continue
            p, q = len(a), len(b)
            if p < 2 or q < 2 or p + q < h + 2:
                continue
            r = ell - h
            if 1 <= r < p + q - h and n == p + q - r - h + 2:
                return _fire(EXCEPTIONAL, "Lemma-transpos")
    return None


PREDICATES = (
    thm_chi_nonpositive,
    thm_projective,
    thm_full_cycle,
    thm_eks_large,
    prop_eks_222,
    prop_baranski,
    prop_53,
    prop_23,
    thm_fixpoints,
    thm_even_deg,
    cor_mixed,
    thm_odd_divisible,
    lemma_transpos,
)


def run_predicates(datum: BranchDatum) -> list[Verdict]:
    """Fire every applicable predicate on a compatible datum."""
    out = []
    for pred in PREDICATES:
        v = pred(datum)
        if v is not None:
            out.append(v)
    return out


def classify(
    datum: BranchDatum,
    budget: int = DEFAULT_BUDGET,
    attach_witness: bool = False,
) -> Verdict:
    """Full pipeline: compatibility, theorem battery, search fallback.

    Exactly one polarity of rules may fire; both firing raises
    ConsistencyError (the rules cannot conflict, so that is a bug).
    When no rule fires, sphere-base data go to the exhaustive search and
    projective-plane data with orientable cover are classified through
    their sphere reductions.  Unknown only on an exhausted budget.
    """
    report = check_compatibility(datum)
    if not report.compatible:
        return Verdict(INCOMPATIBLE, violations=report.violated)

    fired = run_predicates(datum)
    kinds = {v.kind for v in fired}
    if REALIZABLE in kinds and EXCEPTIONAL in kinds:
        raise ConsistencyError(
            f"conflicting rules on {datum}: "
            + ", ".join(f"{v.tags[0]}={v.kind}" for v in fired)
        )
    if fired:
        tags = tuple(t for v in fired for t in v.tags)
        kind = fired[0].kind
        witness = None
        nodes = 0
        if kind == REALIZABLE and attach_witness and datum.base == SPHERE:
            result = search(datum, budget)
            nodes = result.nodes
            if result.status == realizer.FOUND:
                witness = result.realization
            elif result.status == realizer.EXHAUSTED:
                raise ConsistencyError(
                    f"search exhausted a datum the rules call realizable: {datum}"
                )
        return Verdict(kind, tags, witness=witness, nodes=nodes)

    if datum.base == SPHERE:
        result = search(datum, budget)
        if result.status == realizer.FOUND:
            return Verdict(
                REALIZABLE, ("search-found",),
                witness=result.realization, nodes=result.nodes,
            )
        if result.status == realizer.EXHAUSTED:
            return Verdict(EXCEPTIONAL, ("search-exhausted",), nodes=result.nodes)
        return Verdict(UNKNOWN, ("budget-exceeded",), nodes=result.nodes)

    if datum.base == PROJECTIVE and datum.cover.orientable:
        if datum.degree == 2:
            # the unbranched orientation double covering of the plane
            return Verdict(REALIZABLE, ("reduction:orientation-cover",))
        nodes = 0
        saw_unknown = False
        for reduced in reduce_projective(datum):
            sub = classify(reduced, budget)
            nodes += sub.nodes
            if sub.kind == REALIZABLE:
                tag = "reduction:" + (sub.tags[0] if sub.tags else "")
                return Verdict(REALIZABLE, (tag,), nodes=nodes)
            if sub.kind == UNKNOWN:
                saw_unknown = True
        if saw_unknown:
            return Verdict(UNKNOWN, ("budget-exceeded",), nodes=nodes)
        return Verdict(EXCEPTIONAL, ("reduction-exhausted",), nodes=nodes)

    raise AssertionError(f"unreachable: no rule and no fallback for {datum}")
