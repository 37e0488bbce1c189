"""Based finite free chain complexes over S[Gamma] and their Novikov acyclicity locus.

Conventions: ``dims[i]`` is the rank of C_i and ``boundaries[i]`` is the
matrix of C_{i+1} -> C_i with one row per basis element of C_{i+1}
(row vectors, matrices act on the right).  The chain condition reads
``boundaries[i + 1] @ boundaries[i] == 0``.

A tau-chain picks index sets alpha_i of the bases so that every
submatrix A_i(alpha) (rows alpha_{i+1}, columns outside alpha_i) is
square.  The complex is acyclic over a domain R iff some tau-chain has
all these determinants invertible in R.  Applied to the Novikov rings
this gives both a pointwise test (``vanishes_at``) and the cone
description of the whole acyclicity locus (``vanishing_set``).
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import combinations, product
from typing import Iterator, Sequence

from .conegeometry import (IntegralSubset, lattice_point, positive_cone, subset_complement,
                           subset_intersect)
from .errors import ResourceError, StructuralError, ValidationError
from .grouprings import ZZ, CoefficientDomain, LaurentPoly, pair
from .invertibility import PolyMatrix, determinant, invertibility_cones, matrix_rank

DEFAULT_TAU_CAP = 10**6

TauChain = tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class BasedChainComplex:
    domain: CoefficientDomain
    rank: int
    dims: tuple[int, ...]
    boundaries: tuple[PolyMatrix, ...]

    def __post_init__(self):
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))
        object.__setattr__(self, "boundaries", tuple(self.boundaries))
        if not self.dims:
            raise StructuralError("a complex needs at least one chain module")
        if any(d < 0 for d in self.dims):
            raise StructuralError(f"negative dimension in {self.dims}")
        if len(self.boundaries) != len(self.dims) - 1:
            raise StructuralError(
                f"{len(self.dims)} chain modules need {len(self.dims) - 1} boundary matrices, "
                f"got {len(self.boundaries)}")
        for A in self.boundaries:
            if A.domain != self.domain or A.rank != self.rank:
                raise StructuralError("boundary matrix over a different ring")

    @property
    def length(self) -> int:
        return len(self.dims) - 1

    @classmethod
    def from_rows(cls, domain, rank, dims, boundaries) -> "BasedChainComplex":
        """Build from nested lists; entries may be LaurentPoly or scalars."""
        mats = []
        for i, rows in enumerate(boundaries):
            if isinstance(rows, PolyMatrix):
                mats.append(rows)
            else:
                mats.append(PolyMatrix.from_rows(domain, rank, rows, cols=dims[i]))
        return cls(domain, rank, tuple(dims), tuple(mats))


@dataclass(frozen=True)
class Violation:
    """First place where a complex fails to be valid."""

    kind: str   # "shape" or "chain"
    index: int
    row: int = -1
    col: int = -1

    def __str__(self):
        if self.kind == "shape":
            return f"boundary matrix {self.index} has the wrong shape"
        return f"A_{self.index + 1} * A_{self.index} is nonzero at ({self.row}, {self.col})"


def validate_complex(C: BasedChainComplex) -> Violation | None:
    """None if shapes fit and consecutive boundaries compose to zero."""
    for i, A in enumerate(C.boundaries):
        if A.shape != (C.dims[i + 1], C.dims[i]):
            return Violation("shape", i)
    for i in range(len(C.boundaries) - 1):
        prod_ = C.boundaries[i + 1] @ C.boundaries[i]
        for r in range(prod_.rows):
            for c in range(prod_.cols):
                if not prod_[r, c].is_zero():
                    return Violation("chain", i, r, c)
    return None


def _require_valid(C: BasedChainComplex):
    v = validate_complex(C)
    if v is not None:
        raise ValidationError(f"invalid chain complex: {v}")


def tau_chain_sizes(C: BasedChainComplex) -> tuple[int, ...] | None:
    """Forced cardinalities |alpha_i|, or None when no tau-chain exists.

    Squareness of A_i(alpha) forces |alpha_{i+1}| = dim C_i - |alpha_i|.
    The boundary leaving C_m is the zero map to C_{m+1} = 0, and its
    squareness forces alpha_m to be all of C_m.
    """
    sizes = [0]
    for i in range(C.length):
        s = C.dims[i] - sizes[-1]
        if not 0 <= s <= C.dims[i + 1]:
            return None
        sizes.append(s)
    if sizes[-1] != C.dims[-1]:
        return None
    return tuple(sizes)


def tau_chain_count(C: BasedChainComplex) -> int:
    sizes = tau_chain_sizes(C)
    if sizes is None:
        return 0
    return math.prod(math.comb(d, s) for d, s in zip(C.dims, sizes))


def enumerate_tau_chains(C: BasedChainComplex) -> Iterator[TauChain]:
    """All tau-chains in lexicographic order, as tuples of 0-based index tuples."""
    _require_valid(C)
    sizes = tau_chain_sizes(C)
    if sizes is None:
        return
    choices = [list(combinations(range(d), s)) for d, s in zip(C.dims[1:], sizes[1:])]
    for rest in product(*choices):
        yield ((),) + tuple(rest)


def submatrix(A: PolyMatrix, alpha_next: Sequence[int], alpha_cur: Sequence[int]) -> PolyMatrix:
    """A_i(alpha): rows in alpha_{i+1}, columns not in alpha_i (0-based)."""
    excluded = set(alpha_cur)
    for k in excluded:
        if not 0 <= k < A.cols:
            raise StructuralError(f"column index {k} out of range for {A.cols} columns")
    return A.submatrix(list(alpha_next), [k for k in range(A.cols) if k not in excluded])


class _DeterminantCache:
    """Determinants of A_i(alpha) keyed by (i, alpha_{i+1}, alpha_i)."""

    def __init__(self, C: BasedChainComplex):
        self.C = C
        self._dets: dict = {}
        self._cones: dict = {}

    def det(self, i, alpha_next, alpha_cur) -> LaurentPoly:
        key = (i, alpha_next, alpha_cur)
        d = self._dets.get(key)
        if d is None:
            d = determinant(submatrix(self.C.boundaries[i], alpha_next, alpha_cur))
            self._dets[key] = d
        return d

    def cones(self, i, alpha_next, alpha_cur) -> IntegralSubset:
        key = (i, alpha_next, alpha_cur)
        U = self._cones.get(key)
        if U is None:
            U = invertibility_cones(self.det(i, alpha_next, alpha_cur))
            self._cones[key] = U
        return U


def _check_cap(C: BasedChainComplex, tau_cap: int | None):
    n = tau_chain_count(C)
    if tau_cap is not None and n > tau_cap:
        raise ResourceError(f"{n} tau-chains exceed the cap of {tau_cap}")
    return n


def vanishes_at(C: BasedChainComplex, xi: Sequence, tau_cap: int | None = DEFAULT_TAU_CAP) -> bool:
    """Pointwise test: is the complex acyclic over the Novikov ring at xi?

    Brute force over tau-chains with the leading-term unit test; no cone
    arithmetic is involved.
    """
    if len(xi) != C.rank:
        raise StructuralError(f"character of length {len(xi)} for rank {C.rank}")
    _check_cap(C, tau_cap)
    cache = _DeterminantCache(C)
    for alpha in enumerate_tau_chains(C):
        if all(cache.det(i, alpha[i + 1], alpha[i]).in_novikov_units(xi) for i in range(C.length)):
            return True
    return False


@dataclass(frozen=True)
class VanishingReport:
    """Characters at which all Novikov homology of a complex vanishes.

    At every point of ``vanishing_set`` each Novikov-Betti number and each
    Novikov torsion number of the complex is zero.
    """

    vanishing_set: IntegralSubset
    tau_chains: int

    def certifies(self, xi) -> bool:
        return self.vanishing_set.contains(xi)


def _search(C, sizes, cache, i, alpha_cur, U, out):
    if i == C.length:
        out.extend(U.cones)
        return
    for alpha_next in combinations(range(C.dims[i + 1]), sizes[i + 1]):
        M = cache.cones(i, alpha_next, alpha_cur)
        if not M.cones:
            continue
        V = subset_intersect(U, M)
        if V.cones:
            _search(C, sizes, cache, i + 1, alpha_next, V, out)


def _search_branch(C, sizes, alpha_1):
    cache = _DeterminantCache(C)
    out = []
    M = cache.cones(0, alpha_1, ())
    if M.cones:
        _search(C, sizes, cache, 1, alpha_1, M, out)
    return out


def vanishing_set(C: BasedChainComplex, tau_cap: int | None = DEFAULT_TAU_CAP,
                  jobs: int = 1) -> VanishingReport:
    """M(C): union over tau-chains of the intersected determinant cones.

    The enumeration is a depth-first search over the degrees that drops a
    partial chain once its running intersection is empty.  With ``jobs > 1``
    the first-level branches run in worker processes; the result is
    assembled in enumeration order either way.
    """
    _require_valid(C)
    count = _check_cap(C, tau_cap)
    sizes = tau_chain_sizes(C)
    r = C.rank
    if sizes is None:
        return VanishingReport(IntegralSubset.empty(r), 0)
    if C.length == 0:
        # the chain (()) exists only when C_0 = 0
        return VanishingReport(IntegralSubset.whole(r), count)
    firsts = list(combinations(range(C.dims[1]), sizes[1]))
    if jobs > 1 and len(firsts) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(_search_branch, [C] * len(firsts), [sizes] * len(firsts), firsts))
    else:
        parts = [_search_branch(C, sizes, a) for a in firsts]
    cones = [c for part in parts for c in part]
    return VanishingReport(IntegralSubset.from_cones(r, cones, prune=False), count)


def betti_numbers(C: BasedChainComplex) -> list[int]:
    """Ranks of homology over the fraction field of S[Gamma].

    The rational Novikov ring is a localization of S[Gamma], so these are
    the Novikov-Betti numbers at every character.
    """
    _require_valid(C)
    ranks = [matrix_rank(A) for A in C.boundaries]
    out = []
    for i, d in enumerate(C.dims):
        incoming = ranks[i] if i < len(ranks) else 0
        outgoing = ranks[i - 1] if i > 0 else 0
        out.append(d - incoming - outgoing)
    return out


def euler_characteristic(C: BasedChainComplex) -> int:
    return sum((-1) ** i * d for i, d in enumerate(C.dims))


def direct_sum(C: BasedChainComplex, D: BasedChainComplex) -> BasedChainComplex:
    if C.domain != D.domain or C.rank != D.rank:
        raise StructuralError("direct sum of complexes over different rings")
    n = max(len(C.dims), len(D.dims))
    cd = list(C.dims) + [0] * (n - len(C.dims))
    dd = list(D.dims) + [0] * (n - len(D.dims))

    def bd(X, dims, i):
        if i < len(X.boundaries):
            return X.boundaries[i]
        return PolyMatrix.zeros(X.domain, X.rank, dims[i + 1], dims[i])

    mats = []
    for i in range(n - 1):
        a, b = bd(C, cd, i), bd(D, dd, i)
        mats.append(_blocks(C.domain, C.rank, [[a, None], [None, b]],
                            [cd[i + 1], dd[i + 1]], [cd[i], dd[i]]))
    return BasedChainComplex(C.domain, C.rank, tuple(c + d for c, d in zip(cd, dd)), tuple(mats))


def _blocks(domain, rank, grid, row_sizes, col_sizes) -> PolyMatrix:
    """Assemble a block matrix; None blocks are zero."""
    z = LaurentPoly.zero(domain, rank)
    rows = []
    for bi, rs in enumerate(row_sizes):
        for r in range(rs):
            row = []
            for bj, cs in enumerate(col_sizes):
                blk = grid[bi][bj]
                row.extend(blk[r, c] if blk is not None else z for c in range(cs))
            rows.append(row)
    return PolyMatrix(domain, rank, sum(row_sizes), sum(col_sizes), [e for r in rows for e in r])


# --- algebraic mapping tori --------------------------------------------------

def _scalar_matrix(domain, m, cols: int) -> PolyMatrix:
    if isinstance(m, PolyMatrix):
        if m.rank != 0:
            raise StructuralError("fiber data must live over S (Gamma-rank 0)")
        return m
    rows = [list(r) for r in m]
    return PolyMatrix.from_rows(domain, 0, rows, cols=cols)


def mapping_torus(monodromy: Sequence, fiber_dims: Sequence[int],
                  fiber_boundaries: Sequence | None = None,
                  domain: CoefficientDomain = ZZ) -> BasedChainComplex:
    """Mapping cone of id - t*phi on D[t, 1/t] (Gamma-rank 1).

    ``monodromy[i]`` is phi on D_i (a dims[i] x dims[i] matrix over S),
    ``fiber_boundaries[i]`` the matrix of d: D_{i+1} -> D_i.  The result has
    C_j = D_{j-1} + D_j and boundary blocks [[-d, I - t*phi], [0, d]].
    """
    dims = [int(d) for d in fiber_dims]
    n = len(dims)
    if len(monodromy) != n:
        raise StructuralError(f"need one monodromy matrix per fiber degree ({n}), got {len(monodromy)}")
    phis = []
    for i, m in enumerate(monodromy):
        P = _scalar_matrix(domain, m, dims[i])
        if P.shape != (dims[i], dims[i]):
            raise StructuralError(f"monodromy in degree {i} has shape {P.shape}, expected {(dims[i],) * 2}")
        if not domain.is_unit(determinant(P).coefficient(())):
            raise ValidationError(f"monodromy in degree {i} is not invertible over {domain}")
        phis.append(P)
    if fiber_boundaries is None:
        fiber_boundaries = [None] * (n - 1)
    if len(fiber_boundaries) != n - 1:
        raise StructuralError(f"fiber needs {n - 1} boundary matrices")
    ds = []
    for i, m in enumerate(fiber_boundaries):
        if m is None:
            ds.append(PolyMatrix.zeros(domain, 0, dims[i + 1], dims[i]))
        else:
            d = _scalar_matrix(domain, m, dims[i])
            if d.shape != (dims[i + 1], dims[i]):
                raise StructuralError(f"fiber boundary {i} has shape {d.shape}")
            ds.append(d)
    fiber = BasedChainComplex(domain, 0, tuple(dims), tuple(ds))
    _require_valid(fiber)
    for i, d in enumerate(ds):
        if phis[i + 1] @ d != d @ phis[i]:
            raise ValidationError(f"monodromy does not commute with the fiber boundary in degree {i}")

    def lift(P: PolyMatrix, shift: int = 0, sign: int = 1) -> PolyMatrix:
        return PolyMatrix(domain, 1, P.rows, P.cols,
                          [LaurentPoly(domain, 1, {(shift,): sign * e.coefficient(())} if e else {})
                           for e in P.entries])

    def dmat(i):  # D_{i+1} -> D_i, zero-size outside the fiber
        if 0 <= i < n - 1:
            return ds[i]
        rows = dims[i + 1] if 0 <= i + 1 < n else 0
        cols = dims[i] if 0 <= i < n else 0
        return PolyMatrix.zeros(domain, 0, rows, cols)

    def dim(i):
        return dims[i] if 0 <= i < n else 0

    total = [dim(j - 1) + dim(j) for j in range(n + 1)]
    mats = []
    for j in range(n):
        one = PolyMatrix.identity(domain, 1, dims[j])
        F = one - lift(phis[j], shift=1)
        grid = [[lift(dmat(j - 1), sign=-1), F],
                [None, lift(dmat(j))]]
        mats.append(_blocks(domain, 1, grid, [dim(j), dim(j + 1)], [dim(j - 1), dim(j)]))
    C = BasedChainComplex(domain, 1, tuple(total), tuple(mats))
    _require_valid(C)
    return C


# --- positivity pipeline -----------------------------------------------------

@dataclass(frozen=True)
class PositivityVerdict:
    """Either vanishing at every positive class, or a positive lattice witness."""

    witness: tuple[int, ...] | None = None

    @property
    def vanishes(self) -> bool:
        return self.witness is None

    def __str__(self):
        if self.witness is None:
            return "Vanishes"
        return "Witness(" + ", ".join(str(x) for x in self.witness) + ")"


def verify_positive_vanishing(C: BasedChainComplex, meridians: Sequence[Sequence[int]],
                              tau_cap: int | None = DEFAULT_TAU_CAP, jobs: int = 1) -> PositivityVerdict:
    """Decide whether Novikov homology vanishes at every positive character.

    The non-vanishing locus V is the complement of the vanishing set; the
    positive classes form an open cone P.  P and V are integral subsets, so
    P intersect V is empty iff it has no lattice point.
    """
    meridians = [tuple(int(x) for x in m) for m in meridians]
    if not meridians:
        raise StructuralError("at least one meridian is required")
    for m in meridians:
        if len(m) != C.rank:
            raise StructuralError(f"meridian {m} has length {len(m)}, expected {C.rank}")
    report = vanishing_set(C, tau_cap=tau_cap, jobs=jobs)
    positive = positive_cone(meridians)
    bad = subset_complement(report.vanishing_set, within=positive)
    xi0 = lattice_point(bad)
    if xi0 is None:
        return PositivityVerdict()
    assert all(pair(xi0, m) > 0 for m in meridians)
    if vanishes_at(C, xi0, tau_cap=tau_cap):
        raise AssertionError(f"witness {xi0} is rejected by the pointwise test")
    return PositivityVerdict(xi0)


def non_vanishing_set(C: BasedChainComplex, tau_cap: int | None = DEFAULT_TAU_CAP) -> IntegralSubset:
    return subset_complement(vanishing_set(C, tau_cap=tau_cap).vanishing_set)


__all__ = [
    "BasedChainComplex", "Violation", "VanishingReport", "PositivityVerdict", "DEFAULT_TAU_CAP",
    "validate_complex", "enumerate_tau_chains", "tau_chain_count", "tau_chain_sizes", "submatrix",
    "vanishes_at", "vanishing_set", "betti_numbers", "euler_characteristic", "direct_sum",
    "mapping_torus", "verify_positive_vanishing", "non_vanishing_set",
]
