"""Twisted chain complexes of presentation 2-complexes via Fox calculus.

Words are tuples of nonzero ints: ``i`` is the i-th generator (1-based)
and ``-i`` its inverse.  A formal sum in Z[F] is a dict mapping freely
reduced words to integer coefficients.

The coefficient system sends a word u to alpha(u) * t^psi(u), where alpha
is multiplicative on generators (row vectors, acting on the right) and
psi additive into Z^r.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from itertools import combinations
from typing import Sequence

from .complexes import BasedChainComplex, validate_complex
from .errors import StructuralError, ValidationError
from .grouprings import CoefficientDomain, LaurentPoly, ZZ
from .invertibility import PolyMatrix

log = logging.getLogger(__name__)

Word = tuple[int, ...]
FormalSum = dict[Word, int]


def free_reduce(word: Sequence[int]) -> Word:
    out: list[int] = []
    for x in word:
        if x == 0:
            raise StructuralError("0 is not a generator index")
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def invert_word(word: Sequence[int]) -> Word:
    return tuple(-x for x in reversed(word))


def _add_to(s: FormalSum, word: Word, c: int):
    word = free_reduce(word)
    v = s.get(word, 0) + c
    if v:
        s[word] = v
    else:
        s.pop(word, None)


def fox_derivative(word: Sequence[int], x: int, generators: int | None = None) -> FormalSum:
    """d(word)/d(x_x) for a positive generator index x.

    Letter by letter: an occurrence of x contributes the prefix before it,
    an occurrence of x^-1 contributes minus the prefix including it.
    """
    if x <= 0:
        raise StructuralError(f"differentiate by a positive generator index, got {x}")
    if generators is not None:
        bad = [a for a in (*word, x) if abs(a) > generators or a == 0]
        if bad:
            raise StructuralError(f"unknown generator index {bad[0]}")
    out: FormalSum = {}
    for j, a in enumerate(word):
        if a == x:
            _add_to(out, tuple(word[:j]), 1)
        elif a == -x:
            _add_to(out, tuple(word[:j + 1]), -1)
    return out


# --- small dense matrices over S --------------------------------------------

Mat = tuple[tuple, ...]


def _identity(domain, k) -> Mat:
    return tuple(tuple(domain.coerce(1 if i == j else 0) for j in range(k)) for i in range(k))


def _mat_mul(domain, a: Mat, b: Mat) -> Mat:
    k = len(a)
    return tuple(tuple(domain.normalize(sum(a[i][m] * b[m][j] for m in range(k)))
                       for j in range(k)) for i in range(k))


def _mat_inverse(domain: CoefficientDomain, a: Mat) -> Mat | None:
    """Exact inverse over S, or None if a is not invertible over S."""
    k = len(a)
    if domain.kind == "GF":
        p = domain.prime
        m = [[x % p for x in row] + [int(i == j) for j in range(k)] for i, row in enumerate(a)]
        for c in range(k):
            piv = next((r for r in range(c, k) if m[r][c]), None)
            if piv is None:
                return None
            m[c], m[piv] = m[piv], m[c]
            inv = pow(m[c][c], -1, p)
            m[c] = [x * inv % p for x in m[c]]
            for r in range(k):
                if r != c and m[r][c]:
                    f = m[r][c]
                    m[r] = [(x - f * y) % p for x, y in zip(m[r], m[c])]
        return tuple(tuple(row[k:]) for row in m)
    m = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(k)] for i, row in enumerate(a)]
    for c in range(k):
        piv = next((r for r in range(c, k) if m[r][c]), None)
        if piv is None:
            return None
        m[c], m[piv] = m[piv], m[c]
        inv = 1 / m[c][c]
        m[c] = [x * inv for x in m[c]]
        for r in range(k):
            if r != c and m[r][c]:
                f = m[r][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    out = tuple(tuple(row[k:]) for row in m)
    if domain.kind == "Z":
        if any(x.denominator != 1 for row in out for x in row):
            return None
        return tuple(tuple(int(x) for x in row) for row in out)
    return out


@dataclass(frozen=True)
class TwistedPresentation:
    """<x_1..x_g | relators> with psi: F -> Z^r and alpha: F -> GL(k, S) on generators."""

    domain: CoefficientDomain
    rank: int
    generators: int
    relators: tuple[Word, ...]
    psi: tuple[tuple[int, ...], ...]
    alpha: tuple[Mat, ...] | None = None
    k: int = 1

    def __post_init__(self):
        object.__setattr__(self, "relators", tuple(free_reduce(r) for r in self.relators))
        object.__setattr__(self, "psi", tuple(tuple(int(v) for v in p) for p in self.psi))
        if self.alpha is None:
            object.__setattr__(self, "alpha", tuple(_identity(self.domain, self.k) for _ in range(self.generators)))
        else:
            object.__setattr__(self, "alpha", tuple(
                tuple(tuple(self.domain.coerce(x) for x in row) for row in m) for m in self.alpha))
        if len(self.psi) != self.generators:
            raise StructuralError(f"psi needs {self.generators} vectors, got {len(self.psi)}")
        if any(len(p) != self.rank for p in self.psi):
            raise StructuralError(f"psi vectors must have length {self.rank}")
        if len(self.alpha) != self.generators:
            raise StructuralError(f"alpha needs {self.generators} matrices, got {len(self.alpha)}")
        for i, m in enumerate(self.alpha):
            if len(m) != self.k or any(len(row) != self.k for row in m):
                raise StructuralError(f"alpha(x{i + 1}) is not {self.k}x{self.k}")
        for j, r in enumerate(self.relators):
            for a in r:
                if abs(a) > self.generators:
                    raise StructuralError(f"relator {j} uses unknown generator index {a}")


class _CoefficientSystem:
    """Caches alpha on generators and their inverses."""

    def __init__(self, P: TwistedPresentation):
        self.P = P
        self.mats: dict[int, Mat] = {}
        for i, m in enumerate(P.alpha, start=1):
            inv = _mat_inverse(P.domain, m)
            if inv is None:
                raise ValidationError(f"alpha(x{i}) is not invertible over {P.domain}")
            self.mats[i] = m
            self.mats[-i] = inv

    def psi(self, word: Word) -> tuple[int, ...]:
        out = [0] * self.P.rank
        for a in word:
            sign = 1 if a > 0 else -1
            for j, v in enumerate(self.P.psi[abs(a) - 1]):
                out[j] += sign * v
        return tuple(out)

    def alpha(self, word: Word) -> Mat:
        dom = self.P.domain
        return reduce(lambda m, a: _mat_mul(dom, m, self.mats[a]), word, _identity(dom, self.P.k))


def validate_presentation(P: TwistedPresentation) -> None:
    """Raise ValidationError naming the first relator on which psi or alpha is ill defined."""
    cs = _CoefficientSystem(P)
    ident = _identity(P.domain, P.k)
    for j, r in enumerate(P.relators):
        if any(cs.psi(r)):
            raise ValidationError(f"psi is not well defined: relator {j} maps to {cs.psi(r)}")
        if cs.alpha(r) != ident:
            raise ValidationError(f"alpha is not well defined: relator {j} does not map to the identity")


def psi_image_index(P: TwistedPresentation) -> int | None:
    """Index of psi(F) in Z^r, or None if the image has rank < r."""
    r = P.rank
    vecs = [list(v) for v in P.psi]
    if r == 0:
        return 1
    g = 0
    for rows in combinations(range(len(vecs)), r):
        minor = [[Fraction(x) for x in vecs[i]] for i in rows]
        g = math.gcd(g, abs(_int_det(minor)))
    return g or None


def _int_det(m: list[list[Fraction]]) -> int:
    n = len(m)
    m = [row[:] for row in m]
    det = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c]), None)
        if piv is None:
            return 0
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        for i in range(c + 1, n):
            f = m[i][c] / m[c][c]
            m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return int(det)


def push_forward(s: FormalSum, P: TwistedPresentation, _cs: _CoefficientSystem | None = None) -> PolyMatrix:
    """The k x k block sum_u c_u * alpha(u) * t^psi(u) over S[Z^r]."""
    cs = _cs or _CoefficientSystem(P)
    k, dom, r = P.k, P.domain, P.rank
    acc = [[{} for _ in range(k)] for _ in range(k)]
    for word, c in s.items():
        m = cs.alpha(word)
        e = cs.psi(word)
        for a in range(k):
            for b in range(k):
                if m[a][b]:
                    acc[a][b][e] = acc[a][b].get(e, 0) + c * m[a][b]
    return PolyMatrix(dom, r, k, k, [LaurentPoly(dom, r, acc[a][b]) for a in range(k) for b in range(k)])


def presentation_complex(P: TwistedPresentation) -> BasedChainComplex:
    """C_2 -> C_1 -> C_0 of the presentation 2-complex, twisted by alpha (x) psi.

    dims are (k, g*k, h*k).  The block of the generator x_i in the first
    boundary is alpha(x_i) t^psi(x_i) - I; the block (relator j, generator i)
    of the second is the push-forward of d r_j / d x_i.
    """
    validate_presentation(P)
    index = psi_image_index(P)
    if index is None:
        raise ValidationError(f"the image of psi has rank below {P.rank}")
    if index != 1:
        log.warning("psi is not onto Z^%d: its image has index %d", P.rank, index)
    cs = _CoefficientSystem(P)
    k, g, h, dom, r = P.k, P.generators, len(P.relators), P.domain, P.rank

    a0_rows = []
    for i in range(1, g + 1):
        blk = push_forward({(i,): 1, (): -1}, P, cs)
        a0_rows.extend(blk.to_rows())
    a1_rows = []
    for rel in P.relators:
        blocks = [push_forward(fox_derivative(rel, i), P, cs) for i in range(1, g + 1)]
        for a in range(k):
            a1_rows.append([e for blk in blocks for e in blk.row(a)])
    A0 = PolyMatrix(dom, r, g * k, k, [e for row in a0_rows for e in row])
    A1 = PolyMatrix(dom, r, h * k, g * k, [e for row in a1_rows for e in row])
    C = BasedChainComplex(dom, r, (k, g * k, h * k), (A0, A1))
    v = validate_complex(C)
    if v is not None:
        raise ValidationError(f"presentation complex violates the chain condition: {v}")
    return C


# --- 2-bridge knots ----------------------------------------------------------

def two_bridge_relator(p: int, q: int) -> Word:
    """Relator a w b^-1 w^-1 of the 2-bridge knot group K(p/q), p odd.

    w = b^e1 a^e2 b^e3 ... with e_i = (-1)^floor(i q / p), i = 1..p-1.
    The word needs q odd; an even q is replaced by p - q (the mirror
    image, whose group is isomorphic).
    """
    if p % 2 == 0:
        raise ValueError("p must be odd for a knot")
    if q % 2 == 0:
        q = p - q
    w = []
    for i in range(1, p):
        e = -1 if (i * q // p) % 2 else 1
        gen = 2 if i % 2 else 1
        w.append(e * gen)
    w = tuple(w)
    return free_reduce((1,) + w + (-2,) + invert_word(w))


def knot_presentation(p: int, q: int, domain: CoefficientDomain = ZZ) -> TwistedPresentation:
    """Untwisted (k = 1) presentation of K(p/q) with psi = abelianization."""
    return TwistedPresentation(domain, 1, 2, (two_bridge_relator(p, q),), ((1,), (1,)))


TREFOIL = (3, 1)
FIGURE_EIGHT = (5, 3)
KNOT_5_2 = (7, 3)
