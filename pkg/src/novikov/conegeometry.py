"""Integral cones and integral subsets of Hom(Z^r, R).

An integral half-space is {xi : f(xi) > 0} or {xi : f(xi) >= 0} for an
integer linear form f.  An integral cone is a finite intersection of such
half-spaces and an integral subset a finite union of cones.  All
constraints are homogeneous, so membership is invariant under positive
scaling and every nonempty subset contains an integer point.

Emptiness is decided by Fourier-Motzkin elimination over the rationals
with strict/non-strict bookkeeping; the same elimination stages are
replayed backwards to extract a rational (then integral) point.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence

from .errors import StructuralError
from .grouprings import pair


def _normalize_form(form: Sequence[int]) -> tuple[int, ...]:
    form = tuple(int(a) for a in form)
    g = reduce(math.gcd, form, 0)
    if g > 1:
        form = tuple(a // g for a in form)
    return form


@dataclass(frozen=True, order=True)
class HalfSpace:
    """{xi : form . xi > 0} if strict else {xi : form . xi >= 0}.

    The form is divided by the gcd of its entries; its sign is kept.
    """

    form: tuple[int, ...]
    strict: bool

    def __post_init__(self):
        object.__setattr__(self, "form", _normalize_form(self.form))

    @property
    def rank(self) -> int:
        return len(self.form)

    def is_trivial(self) -> bool:
        return not any(self.form)

    def contains(self, xi: Sequence) -> bool:
        v = pair(xi, self.form)
        return v > 0 if self.strict else v >= 0

    def negate(self) -> "HalfSpace":
        return HalfSpace(tuple(-a for a in self.form), not self.strict)

    def __str__(self):
        terms = []
        for i, a in enumerate(self.form):
            if a:
                name = f"x{i + 1}"
                if a == 1:
                    terms.append(f"+{name}")
                elif a == -1:
                    terms.append(f"-{name}")
                else:
                    terms.append(f"{a:+d}*{name}")
        lhs = " ".join(terms) if terms else "0"
        return f"{lhs} {'>' if self.strict else '>='} 0"


def _canonical_constraints(rank: int, constraints: Iterable[HalfSpace]):
    """Sorted, deduplicated constraints; None if a constraint is unsatisfiable."""
    by_form: dict[tuple[int, ...], bool] = {}
    for h in constraints:
        if len(h.form) != rank:
            raise StructuralError(f"half-space of rank {len(h.form)} in a rank {rank} cone")
        if h.is_trivial():
            if h.strict:
                return None
            continue
        by_form[h.form] = by_form.get(h.form, False) or h.strict
    return tuple(sorted(HalfSpace(f, s) for f, s in by_form.items()))


@dataclass(frozen=True)
class IntegralCone:
    """Intersection of the given half-spaces (the whole space if there are none)."""

    rank: int
    constraints: tuple[HalfSpace, ...] = ()
    _trivially_empty: bool = field(default=False, compare=False, repr=False)

    @classmethod
    def make(cls, rank: int, constraints: Iterable[HalfSpace] = ()) -> "IntegralCone":
        canon = _canonical_constraints(rank, constraints)
        if canon is None:
            return cls(rank, (HalfSpace((0,) * rank, True),), True)
        return cls(rank, canon)

    def contains(self, xi: Sequence) -> bool:
        if len(xi) != self.rank:
            raise StructuralError(f"point of length {len(xi)} for rank {self.rank}")
        return all(h.contains(xi) for h in self.constraints)

    def intersect(self, other: "IntegralCone") -> "IntegralCone":
        return IntegralCone.make(self.rank, self.constraints + other.constraints)

    def is_empty(self) -> bool:
        return cone_is_empty(self)

    def sort_key(self):
        return (len(self.constraints), [(h.form, h.strict) for h in self.constraints])

    def __str__(self):
        if not self.constraints:
            return "{ }"
        return "{ " + ", ".join(str(h) for h in self.constraints) + " }"


# --- Fourier-Motzkin ---------------------------------------------------------

Row = tuple[tuple[int, ...], bool]


def _fm_step(rows: list[Row], k: int) -> list[Row] | None:
    """Eliminate coordinate k.  Returns None once 0 > 0 is derived."""
    pos, neg, rest = [], [], []
    for form, strict in rows:
        a = form[k]
        (pos if a > 0 else neg if a < 0 else rest).append((form, strict))
    out: dict[tuple[int, ...], bool] = {}
    for form, strict in rest:
        out[form] = out.get(form, False) or strict
    for pf, ps in pos:
        for nf, ns in neg:
            a, b = pf[k], -nf[k]
            combo = _normalize_form([b * x + a * y for x, y in zip(pf, nf)])
            out[combo] = out.get(combo, False) or ps or ns
    result = []
    for form, strict in out.items():
        if not any(form):
            if strict:
                return None
            continue
        result.append((form, strict))
    result.sort()
    return result


def _fm_stages(cone: IntegralCone, order: Sequence[int] | None = None):
    """Elimination stages; stages[j] is the system before eliminating order[j].

    Returns (stages, order) or None when the cone is empty.
    """
    if cone._trivially_empty:
        return None
    r = cone.rank
    order = list(range(r)) if order is None else list(order)
    rows: list[Row] = [(h.form, h.strict) for h in cone.constraints]
    stages = []
    for k in order:
        stages.append(rows)
        rows = _fm_step(rows, k)
        if rows is None:
            return None
    return stages, order


def cone_is_empty(cone: IntegralCone, order: Sequence[int] | None = None) -> bool:
    """Decide emptiness of a cone over the reals (exactly)."""
    if cone._trivially_empty:
        return True
    if not any(h.strict for h in cone.constraints):
        return False
    return _fm_stages(cone, order) is None


def _pick(lo, hi) -> Fraction:
    # FM projection guarantees lo < hi, or lo == hi with both bounds closed
    if lo is None and hi is None:
        return Fraction(0)
    if hi is None:
        return Fraction(math.floor(lo) + 1)
    if lo is None:
        return Fraction(math.ceil(hi) - 1)
    if lo == hi:
        return lo
    candidate = Fraction(math.floor(lo) + 1)
    if candidate < hi:
        return candidate
    return (lo + hi) / 2


def cone_point(cone: IntegralCone, order: Sequence[int] | None = None) -> tuple[int, ...] | None:
    """An integer point of the cone, or None if the cone is empty."""
    found = _fm_stages(cone, order)
    if found is None:
        return None
    stages, order = found
    x: list[Fraction] = [Fraction(0)] * cone.rank
    for j in range(len(order) - 1, -1, -1):
        k = order[j]
        lo = hi = None
        for form, _strict in stages[j]:
            a = form[k]
            if a == 0:
                continue
            rest = sum((form[i] * x[i] for i in range(cone.rank) if i != k), Fraction(0))
            bound = -rest / a
            if a > 0:
                lo = bound if lo is None else max(lo, bound)
            else:
                hi = bound if hi is None else min(hi, bound)
        x[k] = _pick(lo, hi)
    denom = reduce(math.lcm, (v.denominator for v in x), 1)
    ints = [int(v * denom) for v in x]
    g = reduce(math.gcd, ints, 0)
    if g > 1:
        ints = [v // g for v in ints]
    return tuple(ints)


# --- integral subsets --------------------------------------------------------

@dataclass(frozen=True)
class IntegralSubset:
    """Finite union of integral cones (empty tuple = empty set)."""

    rank: int
    cones: tuple[IntegralCone, ...] = ()

    @classmethod
    def empty(cls, rank: int) -> "IntegralSubset":
        return cls(rank, ())

    @classmethod
    def whole(cls, rank: int) -> "IntegralSubset":
        return cls(rank, (IntegralCone.make(rank),))

    @classmethod
    def from_cones(cls, rank: int, cones: Iterable[IntegralCone], prune: bool = True) -> "IntegralSubset":
        """Collect cones, dropping duplicates, syntactically subsumed cones
        and (if ``prune``) empty ones.  First-occurrence order is kept."""
        seen = set()
        kept = []
        for c in cones:
            if c.rank != rank:
                raise StructuralError(f"cone of rank {c.rank} in a rank {rank} subset")
            if c in seen or (prune and cone_is_empty(c)):
                continue
            seen.add(c)
            kept.append(c)
        return cls(rank, _drop_subsumed(kept))

    @classmethod
    def half_space(cls, form: Sequence[int], strict: bool) -> "IntegralSubset":
        return cls.from_cones(len(form), [IntegralCone.make(len(form), [HalfSpace(tuple(form), strict)])])

    def contains(self, xi: Sequence) -> bool:
        return contains_point(self, xi)

    def canonical(self) -> "IntegralSubset":
        """Same set with cones sorted by (constraint count, constraints)."""
        return IntegralSubset(self.rank, tuple(sorted(self.cones, key=IntegralCone.sort_key)))

    def __or__(self, other):
        return subset_union(self, other)

    def __and__(self, other):
        return subset_intersect(self, other)

    def __invert__(self):
        return subset_complement(self)

    def __str__(self):
        if not self.cones:
            return "(empty)"
        return "\n".join(str(c) for c in self.canonical().cones)


def _implies(a: IntegralCone, b: IntegralCone) -> bool:
    """Every constraint of b appears in a, at least as strictly."""
    if len(b.constraints) > len(a.constraints):
        return False
    strict = {h.form: h.strict for h in a.constraints}
    return all(h.form in strict and (strict[h.form] or not h.strict) for h in b.constraints)


def _drop_subsumed(cones: list[IntegralCone]) -> tuple[IntegralCone, ...]:
    if len(cones) < 2:
        return tuple(cones)
    order = sorted(range(len(cones)), key=lambda i: len(cones[i].constraints))
    dropped = set()
    for i in order:
        if i in dropped:
            continue
        for j in order:
            if j != i and j not in dropped and _implies(cones[j], cones[i]):
                dropped.add(j)
    return tuple(c for i, c in enumerate(cones) if i not in dropped)


def _check_rank(U: IntegralSubset, V: IntegralSubset):
    if U.rank != V.rank:
        raise StructuralError(f"rank mismatch: {U.rank} vs {V.rank}")


def contains_point(U: IntegralSubset, xi: Sequence) -> bool:
    if len(xi) != U.rank:
        raise StructuralError(f"point of length {len(xi)} for rank {U.rank}")
    return any(c.contains(xi) for c in U.cones)


def subset_union(U: IntegralSubset, V: IntegralSubset) -> IntegralSubset:
    _check_rank(U, V)
    return IntegralSubset.from_cones(U.rank, U.cones + V.cones)


def subset_intersect(U: IntegralSubset, V: IntegralSubset) -> IntegralSubset:
    _check_rank(U, V)
    return IntegralSubset.from_cones(U.rank, (a.intersect(b) for a in U.cones for b in V.cones))


def _intersect_with_union_of_halfspaces(U: IntegralSubset, halves: Sequence[HalfSpace]) -> IntegralSubset:
    cones = []
    for c in U.cones:
        if any(h in c.constraints for h in halves):
            # c already lies inside the union
            cones.append(c)
            continue
        cones.extend(c.intersect(IntegralCone.make(U.rank, [h])) for h in halves)
    return IntegralSubset.from_cones(U.rank, cones)


def subset_complement(U: IntegralSubset, within: IntegralSubset | None = None) -> IntegralSubset:
    """Pointwise complement, optionally intersected with ``within``.

    Each cone's complement is the union of its negated constraints; those
    unions are intersected one cone at a time, pruning empty pieces as soon
    as they appear.
    """
    result = IntegralSubset.whole(U.rank) if within is None else within
    if within is not None:
        _check_rank(U, within)
    for cone in U.cones:
        if not result.cones:
            break
        result = _intersect_with_union_of_halfspaces(result, [h.negate() for h in cone.constraints])
    return result


def subset_difference(U: IntegralSubset, V: IntegralSubset) -> IntegralSubset:
    _check_rank(U, V)
    return subset_complement(V, within=U)


def subset_is_empty(U: IntegralSubset) -> bool:
    return all(cone_is_empty(c) for c in U.cones)


def subset_equal(U: IntegralSubset, V: IntegralSubset) -> bool:
    """Semantic equality: both differences are empty."""
    return subset_is_empty(subset_difference(U, V)) and subset_is_empty(subset_difference(V, U))


def lattice_point(U: IntegralSubset) -> tuple[int, ...] | None:
    """An integer vector in U, or None iff U is empty."""
    for c in U.cones:
        p = cone_point(c)
        if p is not None:
            return p
    return None


def positive_cone(vectors: Sequence[Sequence[int]]) -> IntegralSubset:
    """{xi : xi(v) > 0 for every v}."""
    vectors = [tuple(v) for v in vectors]
    if not vectors:
        raise StructuralError("need at least one vector")
    rank = len(vectors[0])
    return IntegralSubset.from_cones(rank, [IntegralCone.make(rank, [HalfSpace(v, True) for v in vectors])])
