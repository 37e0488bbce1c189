"""Where do polynomials and square matrices become Novikov-invertible?

``invertibility_cones(p)`` returns the set of characters xi for which p is
a unit of the rational Novikov ring: a disjoint union of open cones, one
for every term with a unit coefficient, on which that term strictly
dominates all other terms.  A square matrix over a commutative ring is
invertible iff its determinant is, so ``matrix_invertibility_cones``
reduces to the determinant.
"""
from __future__ import annotations

from typing import Iterable, Sequence

from .conegeometry import HalfSpace, IntegralCone, IntegralSubset
from .errors import StructuralError
from .grouprings import CoefficientDomain, LaurentPoly


class PolyMatrix:
    """Dense rows x cols matrix of Laurent polynomials sharing one domain and rank."""

    __slots__ = ("domain", "rank", "rows", "cols", "entries")

    def __init__(self, domain: CoefficientDomain, rank: int, rows: int, cols: int,
                 entries: Iterable[LaurentPoly]):
        self.domain = domain
        self.rank = rank
        self.rows = rows
        self.cols = cols
        self.entries = tuple(entries)
        if len(self.entries) != rows * cols:
            raise StructuralError(f"{rows}x{cols} matrix needs {rows * cols} entries, got {len(self.entries)}")
        for e in self.entries:
            if e.domain != domain or e.rank != rank:
                raise StructuralError("matrix entry over a different ring")

    @classmethod
    def from_rows(cls, domain, rank, rows: Sequence[Sequence], cols: int | None = None) -> "PolyMatrix":
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else (cols or 0)
        if any(len(r) != ncols for r in rows):
            raise StructuralError("ragged matrix rows")
        entries = []
        for r in rows:
            for e in r:
                if not isinstance(e, LaurentPoly):
                    e = LaurentPoly.constant(domain, rank, e)
                entries.append(e)
        return cls(domain, rank, len(rows), ncols, entries)

    @classmethod
    def zeros(cls, domain, rank, rows, cols) -> "PolyMatrix":
        z = LaurentPoly.zero(domain, rank)
        return cls(domain, rank, rows, cols, [z] * (rows * cols))

    @classmethod
    def identity(cls, domain, rank, n) -> "PolyMatrix":
        z = LaurentPoly.zero(domain, rank)
        one = LaurentPoly.constant(domain, rank, 1)
        return cls(domain, rank, n, n, [one if i == j else z for i in range(n) for j in range(n)])

    def __getitem__(self, ij) -> LaurentPoly:
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i) -> list[LaurentPoly]:
        return list(self.entries[i * self.cols:(i + 1) * self.cols])

    def to_rows(self) -> list[list[LaurentPoly]]:
        return [self.row(i) for i in range(self.rows)]

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __eq__(self, other):
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        return (self.shape == other.shape and self.domain == other.domain
                and self.rank == other.rank and self.entries == other.entries)

    def __hash__(self):
        return hash((self.shape, self.entries))

    def __repr__(self):
        body = "; ".join(", ".join(str(e) for e in r) for r in self.to_rows())
        return f"PolyMatrix({self.rows}x{self.cols}: [{body}])"

    def is_zero(self) -> bool:
        return all(e.is_zero() for e in self.entries)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "PolyMatrix":
        """Rows and columns given by 0-based index lists, order preserved."""
        for i in rows:
            if not 0 <= i < self.rows:
                raise StructuralError(f"row index {i} out of range for {self.rows} rows")
        for j in cols:
            if not 0 <= j < self.cols:
                raise StructuralError(f"column index {j} out of range for {self.cols} columns")
        return PolyMatrix(self.domain, self.rank, len(rows), len(cols),
                          [self[i, j] for i in rows for j in cols])

    def __matmul__(self, other: "PolyMatrix") -> "PolyMatrix":
        if self.cols != other.rows:
            raise StructuralError(f"cannot multiply {self.shape} by {other.shape}")
        z = LaurentPoly.zero(self.domain, self.rank)
        out = []
        for i in range(self.rows):
            r = self.row(i)
            for j in range(other.cols):
                acc = z
                for k in range(self.cols):
                    if r[k] and other[k, j]:
                        acc = acc + r[k] * other[k, j]
                out.append(acc)
        return PolyMatrix(self.domain, self.rank, self.rows, other.cols, out)

    def __add__(self, other: "PolyMatrix") -> "PolyMatrix":
        if self.shape != other.shape:
            raise StructuralError(f"cannot add {self.shape} and {other.shape}")
        return PolyMatrix(self.domain, self.rank, self.rows, self.cols,
                          [a + b for a, b in zip(self.entries, other.entries)])

    def __neg__(self):
        return PolyMatrix(self.domain, self.rank, self.rows, self.cols, [-a for a in self.entries])

    def __sub__(self, other):
        return self + (-other)

    def map(self, fn) -> "PolyMatrix":
        return PolyMatrix(self.domain, self.rank, self.rows, self.cols, [fn(e) for e in self.entries])


def _cofactor_det(m: list[list[LaurentPoly]], one: LaurentPoly) -> LaurentPoly:
    n = len(m)
    if n == 0:
        return one
    if n == 1:
        return m[0][0]
    if n == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    total = one - one
    for j in range(n):
        if m[0][j].is_zero():
            continue
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        term = m[0][j] * _cofactor_det(minor, one)
        total = total + term if j % 2 == 0 else total - term
    return total


def _bareiss_det(m: list[list[LaurentPoly]], one: LaurentPoly) -> LaurentPoly:
    m = [list(r) for r in m]
    n = len(m)
    sign = 1
    prev = one
    for k in range(n - 1):
        if m[k][k].is_zero():
            swap = next((i for i in range(k + 1, n) if not m[i][k].is_zero()), None)
            if swap is None:
                return one - one
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]).exact_divide(prev)
        prev = m[k][k]
    det = m[n - 1][n - 1]
    return det if sign == 1 else -det


def determinant(A: PolyMatrix, method: str = "auto") -> LaurentPoly:
    """Exact determinant; the empty matrix has determinant 1.

    ``method`` is ``"auto"`` (cofactor expansion up to 4x4, Bareiss above),
    ``"cofactor"`` or ``"bareiss"``.
    """
    if A.rows != A.cols:
        raise StructuralError(f"determinant of a non-square {A.rows}x{A.cols} matrix")
    one = LaurentPoly.constant(A.domain, A.rank, 1)
    if A.rows == 0:
        return one
    rows = A.to_rows()
    if method == "cofactor" or (method == "auto" and A.rows <= 4):
        return _cofactor_det(rows, one)
    if method not in ("auto", "bareiss"):
        raise ValueError(f"unknown determinant method {method!r}")
    return _bareiss_det(rows, one)


def matrix_rank(A: PolyMatrix) -> int:
    """Rank over the fraction field of S[Gamma], by fraction-free elimination."""
    m = A.to_rows()
    nrows, ncols = A.rows, A.cols
    one = LaurentPoly.constant(A.domain, A.rank, 1)
    prev = one
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if not m[i][c].is_zero()), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        p = m[r][c]
        for i in range(r + 1, nrows):
            for j in range(c + 1, ncols):
                m[i][j] = (m[i][j] * p - m[i][c] * m[r][j]).exact_divide(prev)
            m[i][c] = one - one
        prev = p
        r += 1
    return r


def invertibility_cones(p: LaurentPoly) -> IntegralSubset:
    """M(p): the characters at which p is a Novikov unit.

    For each term with a unit coefficient, the open cone where that term's
    exponent strictly beats every other exponent.  The cones are disjoint.
    """
    r = p.rank
    if p.is_zero():
        return IntegralSubset.empty(r)
    support = p.support()
    cones = []
    for g, a in p.terms:
        if not p.domain.is_unit(a):
            continue
        halves = [HalfSpace(tuple(x - y for x, y in zip(g, h)), True) for h in support if h != g]
        cones.append(IntegralCone.make(r, halves))
    return IntegralSubset.from_cones(r, cones)


def matrix_invertibility_cones(A: PolyMatrix) -> IntegralSubset:
    """M(A) for square A, computed as M(det A)."""
    return invertibility_cones(determinant(A))
