"""Sparse Laurent polynomials over exact coefficient domains.

Elements of S[Gamma] with Gamma = Z^r are stored as a map from integer
exponent vectors to nonzero coefficients.  A character xi of Gamma is a
tuple of Fractions; it pairs with an exponent vector by the dot product.

Besides ring arithmetic the module provides the xi-graded leading-term
calculus used to decide invertibility over the rational Novikov ring:
``leading_value`` (the maximal xi-value on the support), ``leading_part``
(the terms attaining it) and ``in_novikov_units``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

from .errors import InexactDivisionError, StructuralError, UndefinedError

Coefficient = Union[int, Fraction]
Exponent = tuple[int, ...]
Character = tuple[Fraction, ...]


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class CoefficientDomain:
    """One of the exact domains Z, Q or GF(p).

    ``kind`` is ``"Z"``, ``"Q"`` or ``"GF"``; ``prime`` is set only for GF.
    Elements are Python ints (Z, GF as residues in [0, p)) or Fractions (Q).
    """

    kind: str
    prime: int | None = None

    def __post_init__(self):
        if self.kind not in ("Z", "Q", "GF"):
            raise StructuralError(f"unknown coefficient domain {self.kind!r}")
        if self.kind == "GF":
            if self.prime is None or not _is_prime(self.prime):
                raise StructuralError(f"modulus must be prime, got {self.prime}")
        elif self.prime is not None:
            raise StructuralError(f"domain {self.kind} takes no modulus")

    def __str__(self):
        return f"GF({self.prime})" if self.kind == "GF" else self.kind

    def coerce(self, value) -> Coefficient:
        """Map an int/Fraction/str into this domain."""
        if isinstance(value, str):
            value = Fraction(value)
        if isinstance(value, bool):
            raise StructuralError("booleans are not coefficients")
        if self.kind == "Q":
            return Fraction(value)
        if isinstance(value, Fraction):
            if self.kind == "Z":
                if value.denominator != 1:
                    raise StructuralError(f"{value} is not an integer")
                return int(value)
            return value.numerator * pow(value.denominator, -1, self.prime) % self.prime
        if not isinstance(value, int):
            raise StructuralError(f"cannot coerce {value!r} into {self}")
        return value % self.prime if self.kind == "GF" else value

    def is_unit(self, a: Coefficient) -> bool:
        if self.kind == "Z":
            return a in (1, -1)
        return a != 0

    def normalize(self, a: Coefficient) -> Coefficient:
        return a % self.prime if self.kind == "GF" else a

    def divide(self, a: Coefficient, b: Coefficient) -> Coefficient:
        """Exact quotient a / b; raises if b does not divide a in this domain."""
        if b == 0:
            raise ZeroDivisionError("division by zero coefficient")
        if self.kind == "Z":
            q, r = divmod(a, b)
            if r:
                raise InexactDivisionError(f"{b} does not divide {a} in Z")
            return q
        if self.kind == "Q":
            return Fraction(a) / b
        return a * pow(b, -1, self.prime) % self.prime


ZZ = CoefficientDomain("Z")
QQ = CoefficientDomain("Q")


def GF(p: int) -> CoefficientDomain:
    return CoefficientDomain("GF", p)


def character(*coords) -> Character:
    """Build a character from ints, Fractions or strings like ``"3/2"``."""
    if len(coords) == 1 and isinstance(coords[0], (list, tuple)):
        coords = tuple(coords[0])
    return tuple(Fraction(c) for c in coords)


def pair(xi: Sequence[Fraction], gamma: Sequence[int]) -> Fraction:
    """The value xi(gamma) as an exact dot product."""
    return sum((Fraction(a) * b for a, b in zip(xi, gamma)), Fraction(0))


def _add_exp(a: Exponent, b: Exponent) -> Exponent:
    return tuple(x + y for x, y in zip(a, b))


def _sub_exp(a: Exponent, b: Exponent) -> Exponent:
    return tuple(x - y for x, y in zip(a, b))


class LaurentPoly:
    """Immutable element of S[Z^r].

    >>> t = LaurentPoly.monomial(ZZ, (1,))
    >>> (1 + t) * (1 - t)
    LaurentPoly(Z, 1, {(0,): 1, (2,): -1})
    """

    __slots__ = ("domain", "rank", "_terms", "_hash")

    def __init__(self, domain: CoefficientDomain, rank: int,
                 terms: Mapping[Sequence[int], Coefficient] | Iterable = ()):
        self.domain = domain
        self.rank = rank
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Exponent, Coefficient] = {}
        for exp, c in items:
            exp = tuple(int(e) for e in exp)
            if len(exp) != rank:
                raise StructuralError(f"exponent {exp} has length {len(exp)}, expected {rank}")
            acc[exp] = acc.get(exp, 0) + domain.coerce(c)
        self._terms = {e: domain.normalize(c) for e, c in sorted(acc.items())
                       if domain.normalize(c) != 0}
        self._hash = None

    @classmethod
    def _raw(cls, domain, rank, terms: dict) -> "LaurentPoly":
        # terms already normalized, nonzero, sorted
        obj = cls.__new__(cls)
        obj.domain = domain
        obj.rank = rank
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def zero(cls, domain, rank):
        return cls._raw(domain, rank, {})

    @classmethod
    def constant(cls, domain, rank, c=1):
        return cls(domain, rank, {(0,) * rank: c})

    @classmethod
    def monomial(cls, domain, exponent: Sequence[int], c=1):
        return cls(domain, len(exponent), {tuple(exponent): c})

    # --- introspection -------------------------------------------------
    @property
    def terms(self) -> tuple[tuple[Exponent, Coefficient], ...]:
        """Terms in lexicographic exponent order."""
        return tuple(self._terms.items())

    def support(self) -> list[Exponent]:
        return list(self._terms)

    def coefficient(self, exp: Sequence[int]) -> Coefficient:
        return self._terms.get(tuple(exp), 0)

    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self._lift(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return (self.domain == other.domain and self.rank == other.rank
                and self._terms == other._terms)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.domain, self.rank, tuple(self._terms.items())))
        return self._hash

    def __repr__(self):
        return f"LaurentPoly({self.domain}, {self.rank}, {self._terms})"

    def __str__(self):
        if not self._terms:
            return "0"
        names = "xyzuvw" if self.rank > 1 else "t"
        out = []
        for exp, c in self._terms.items():
            mono = "*".join(
                (names[i] if i < len(names) else f"g{i}") + ("" if e == 1 else f"^{e}")
                for i, e in enumerate(exp) if e
            )
            if not mono:
                out.append(str(c))
            elif c == 1:
                out.append(mono)
            elif c == -1:
                out.append("-" + mono)
            else:
                out.append(f"{c}*{mono}")
        return " + ".join(out).replace("+ -", "- ")

    # --- arithmetic ----------------------------------------------------
    def _lift(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            if other.domain != self.domain or other.rank != self.rank:
                raise StructuralError(
                    f"mismatch: {self.domain}[rank {self.rank}] vs {other.domain}[rank {other.rank}]")
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return LaurentPoly.constant(self.domain, self.rank, other)
        raise TypeError(f"cannot combine LaurentPoly with {type(other).__name__}")

    def _combine(self, other: "LaurentPoly", sign: int) -> "LaurentPoly":
        dom = self.domain
        acc = dict(self._terms)
        for e, c in other._terms.items():
            v = dom.normalize(acc.get(e, 0) + sign * c)
            if v:
                acc[e] = v
            else:
                acc.pop(e, None)
        return LaurentPoly._raw(dom, self.rank, dict(sorted(acc.items())))

    def __add__(self, other):
        return self._combine(self._lift(other), 1)

    __radd__ = __add__

    def __sub__(self, other):
        return self._combine(self._lift(other), -1)

    def __rsub__(self, other):
        return self._lift(other)._combine(self, -1)

    def __neg__(self):
        dom = self.domain
        return LaurentPoly._raw(dom, self.rank,
                                {e: dom.normalize(-c) for e, c in self._terms.items()})

    def __mul__(self, other):
        other = self._lift(other)
        dom = self.domain
        acc: dict[Exponent, Coefficient] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = _add_exp(e1, e2)
                acc[e] = acc.get(e, 0) + c1 * c2
        terms = {}
        for e, c in sorted(acc.items()):
            c = dom.normalize(c)
            if c:
                terms[e] = c
        return LaurentPoly._raw(dom, self.rank, terms)

    __rmul__ = __mul__

    def scale(self, c: Coefficient) -> "LaurentPoly":
        return self * self.domain.coerce(c)

    def shift(self, exponent: Sequence[int]) -> "LaurentPoly":
        """Multiply by the group element with the given exponent vector."""
        exponent = tuple(exponent)
        return LaurentPoly._raw(self.domain, self.rank,
                                {_add_exp(e, exponent): c for e, c in self._terms.items()})

    def __pow__(self, n: int):
        if n < 0:
            if len(self._terms) != 1:
                raise UndefinedError("only monomials have negative powers")
            (e, c), = self._terms.items()
            inv = self.domain.divide(1, c)
            return LaurentPoly.monomial(self.domain, tuple(-x for x in e), inv) ** (-n)
        result = LaurentPoly.constant(self.domain, self.rank, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def exact_divide(self, q: "LaurentPoly") -> "LaurentPoly":
        """Return d with d * q == self.

        Uses division by leading terms in the lexicographic order on Z^r,
        which is a group order, so lead(d*q) = lead(d) + lead(q).  Per
        coordinate, degrees add under multiplication, so every exponent of an
        exact quotient lies in a known box; leaving the box or meeting a
        non-divisible coefficient means q does not divide self.
        """
        q = self._lift(q)
        if q.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        if self.is_zero():
            return self
        dom = self.domain
        q_items = list(q._terms.items())
        q_lead_e, q_lead_c = q_items[-1]
        lo = [min(e[i] for e in self._terms) - min(e[i] for e in q._terms) for i in range(self.rank)]
        hi = [max(e[i] for e in self._terms) - max(e[i] for e in q._terms) for i in range(self.rank)]
        rem = dict(self._terms)
        quot: dict[Exponent, Coefficient] = {}
        while rem:
            lead_e = max(rem)
            e = _sub_exp(lead_e, q_lead_e)
            if any(x < a or x > b for x, a, b in zip(e, lo, hi)):
                raise InexactDivisionError("divisor does not divide dividend")
            c = dom.divide(rem[lead_e], q_lead_c)
            quot[e] = c
            for qe, qc in q_items:
                k = _add_exp(e, qe)
                v = dom.normalize(rem.get(k, 0) - c * qc)
                if v:
                    rem[k] = v
                else:
                    rem.pop(k, None)
        return LaurentPoly._raw(dom, self.rank, dict(sorted(quot.items())))

    def evaluate(self, point: Sequence) -> Coefficient:
        """Evaluate at a point of (S^x)^r given as exact nonzero values."""
        total = 0
        for e, c in self._terms.items():
            v = c
            for x, k in zip(point, e):
                v = v * (Fraction(x) ** k if self.domain.kind != "GF"
                         else pow(int(x), k, self.domain.prime))
            total += v
        return self.domain.normalize(total) if self.domain.kind == "GF" else total

    # --- xi-graded calculus --------------------------------------------
    def _check_character(self, xi):
        if len(xi) != self.rank:
            raise StructuralError(f"character of length {len(xi)} for rank {self.rank}")

    def leading_value(self, xi: Sequence[Fraction]) -> Fraction:
        """m_xi(p): the largest xi-value over the support."""
        self._check_character(xi)
        if not self._terms:
            raise UndefinedError("leading value of the zero polynomial is undefined")
        return max(pair(xi, e) for e in self._terms)

    def leading_part(self, xi: Sequence[Fraction]) -> "LaurentPoly":
        """t_xi(p): the sum of terms whose xi-value is maximal."""
        self._check_character(xi)
        if not self._terms:
            raise UndefinedError("leading part of the zero polynomial is undefined")
        values = {e: pair(xi, e) for e in self._terms}
        top = max(values.values())
        return LaurentPoly._raw(self.domain, self.rank,
                                {e: c for e, c in self._terms.items() if values[e] == top})

    def in_novikov_units(self, xi: Sequence[Fraction]) -> bool:
        """True iff p becomes a unit in the rational Novikov ring at xi.

        That is the case exactly when the leading part is a single term with
        a unit coefficient.
        """
        if not self._terms:
            return False
        lead = self.leading_part(xi)
        if len(lead._terms) != 1:
            return False
        (c,) = lead._terms.values()
        return self.domain.is_unit(c)


def leading_value(p: LaurentPoly, xi) -> Fraction:
    return p.leading_value(xi)


def leading_part(p: LaurentPoly, xi) -> LaurentPoly:
    return p.leading_part(xi)


def in_novikov_units(p: LaurentPoly, xi) -> bool:
    return p.in_novikov_units(xi)


def exact_divide(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    return p.exact_divide(q)


def poly(domain: CoefficientDomain, rank: int, terms) -> LaurentPoly:
    """Shorthand constructor; ``terms`` maps exponent tuples (or ints for rank 1) to coefficients."""
    items = terms.items() if isinstance(terms, Mapping) else terms
    fixed = []
    for e, c in items:
        if isinstance(e, int):
            e = (e,)
        fixed.append((e, c))
    return LaurentPoly(domain, rank, fixed)
