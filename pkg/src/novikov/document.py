"""JSON problem documents: parsing with field-path diagnostics and canonical serialization.

See ``docs/format.md`` for the grammar.  ``serialize(parse_document(text))``
reproduces any canonical document byte for byte.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .complexes import BasedChainComplex
from .errors import NovikovError, StructuralError
from .foxfront import TwistedPresentation
from .grouprings import GF, QQ, ZZ, CoefficientDomain, LaurentPoly
from .invertibility import PolyMatrix


class DocumentError(NovikovError):
    """Malformed problem document; ``path`` locates the offending field."""

    def __init__(self, path: str, message: str, line: int | None = None):
        self.path = path
        self.line = line
        where = f"line {line}: " if line is not None else ""
        super().__init__(f"{where}{path or '<document>'}: {message}")


@dataclass(frozen=True)
class TorusSpec:
    fiber_dims: tuple[int, ...]
    monodromy: tuple                     # per degree: tuple of rows of scalars
    fiber_boundaries: tuple | None = None


@dataclass
class ProblemDocument:
    domain: CoefficientDomain
    gamma_rank: int
    complex: BasedChainComplex | None = None
    presentation: TwistedPresentation | None = None
    torus: TorusSpec | None = None
    meridians: list[tuple[int, ...]] | None = None
    points: list[tuple[Fraction, ...]] = field(default_factory=list)

    @property
    def payload_kind(self) -> str:
        return "complex" if self.complex else "presentation" if self.presentation else "torus"


# --- scalar helpers ----------------------------------------------------------

def _int(value, path) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise DocumentError(path, f"expected an integer, got {json.dumps(value)}")
    return value


def _nonneg(value, path) -> int:
    v = _int(value, path)
    if v < 0:
        raise DocumentError(path, "expected a non-negative integer")
    return v


def _list(value, path, length: int | None = None) -> list:
    if not isinstance(value, list):
        raise DocumentError(path, f"expected a list, got {type(value).__name__}")
    if length is not None and len(value) != length:
        raise DocumentError(path, f"expected {length} entries, got {len(value)}")
    return value


def _rational(value, path) -> Fraction:
    if isinstance(value, bool):
        raise DocumentError(path, "expected a number")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError):
            raise DocumentError(path, f"not a rational number: {value!r}") from None
    raise DocumentError(path, f"expected an integer or a string 'p/q', got {json.dumps(value)}")


def _scalar(domain: CoefficientDomain, value, path):
    q = _rational(value, path)
    try:
        return domain.coerce(q)
    except (StructuralError, ValueError) as exc:
        raise DocumentError(path, str(exc)) from None


def _dump_scalar(c):
    if isinstance(c, Fraction):
        return int(c) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"
    return c


# --- polynomials and matrices ------------------------------------------------

def _poly(domain, rank, value, path) -> LaurentPoly:
    terms = _list(value, path)
    seen = set()
    out = []
    for j, term in enumerate(terms):
        tp = f"{path}[{j}]"
        if not isinstance(term, dict) or set(term) != {"c", "e"}:
            raise DocumentError(tp, 'a term is an object with exactly the keys "c" and "e"')
        exp = tuple(_int(x, f"{tp}.e[{i}]") for i, x in enumerate(_list(term["e"], f"{tp}.e", rank)))
        if exp in seen:
            raise DocumentError(tp, f"repeated exponent {list(exp)}")
        seen.add(exp)
        out.append((exp, _scalar(domain, term["c"], f"{tp}.c")))
    return LaurentPoly(domain, rank, out)


def _dump_poly(p: LaurentPoly) -> list:
    return [{"c": _dump_scalar(c), "e": list(e)} for e, c in p.terms]


def _matrix(domain, rank, value, rows, cols, path, name) -> PolyMatrix:
    data = _list(value, path)
    if len(data) != rows or any(not isinstance(r, list) or len(r) != cols for r in data):
        got = f"{len(data)}x{len(data[0]) if data and isinstance(data[0], list) else 0}"
        raise DocumentError(path, f"shape error: {name} must be {rows}x{cols}, got {got}")
    entries = [_poly(domain, rank, e, f"{path}[{i}][{j}]") for i, r in enumerate(data) for j, e in enumerate(r)]
    return PolyMatrix(domain, rank, rows, cols, entries)


def _scalar_matrix(domain, value, rows, cols, path, name) -> tuple:
    data = _list(value, path)
    if len(data) != rows or any(not isinstance(r, list) or len(r) != cols for r in data):
        raise DocumentError(path, f"shape error: {name} must be {rows}x{cols}")
    return tuple(tuple(_scalar(domain, x, f"{path}[{i}][{j}]") for j, x in enumerate(r))
                 for i, r in enumerate(data))


def _dump_scalar_matrix(m) -> list:
    return [[_dump_scalar(x) for x in row] for row in m]


# --- document ----------------------------------------------------------------

_TOP_KEYS = {"domain", "prime", "gamma_rank", "complex", "presentation", "torus", "meridians", "points"}


def parse_domain(tag, prime, path="domain") -> CoefficientDomain:
    if tag == "Z":
        dom = ZZ
    elif tag == "Q":
        dom = QQ
    elif tag == "GF":
        if prime is None:
            raise DocumentError("prime", 'domain "GF" needs a "prime" field')
        p = _int(prime, "prime")
        try:
            dom = GF(p)
        except StructuralError:
            raise DocumentError("prime", f"modulus must be prime, got {p}") from None
        return dom
    else:
        raise DocumentError(path, f"unknown domain tag {json.dumps(tag)} (expected \"Z\", \"Q\" or \"GF\")")
    if prime is not None:
        raise DocumentError("prime", f'domain "{tag}" takes no "prime" field')
    return dom


def parse_document(text: str | bytes) -> ProblemDocument:
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise DocumentError("", f"input is not UTF-8: {exc}") from None
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError("", f"syntax error: {exc.msg} (column {exc.colno})", line=exc.lineno) from None
    if not isinstance(raw, dict):
        raise DocumentError("", "the document must be a JSON object")
    unknown = sorted(set(raw) - _TOP_KEYS)
    if unknown:
        raise DocumentError(unknown[0], "unknown field")
    if "domain" not in raw:
        raise DocumentError("domain", "missing field")
    domain = parse_domain(raw["domain"], raw.get("prime"))
    if "gamma_rank" not in raw:
        raise DocumentError("gamma_rank", "missing field")
    r = _nonneg(raw["gamma_rank"], "gamma_rank")
    payloads = [k for k in ("complex", "presentation", "torus") if k in raw]
    if len(payloads) != 1:
        raise DocumentError("", 'exactly one of "complex", "presentation", "torus" is required')
    doc = ProblemDocument(domain, r)
    kind = payloads[0]
    if kind == "complex":
        doc.complex = _parse_complex(domain, r, raw["complex"])
    elif kind == "presentation":
        doc.presentation = _parse_presentation(domain, r, raw["presentation"])
    else:
        if r != 1:
            raise DocumentError("gamma_rank", "a torus document needs gamma_rank 1")
        doc.torus = _parse_torus(domain, raw["torus"])
    if "meridians" in raw:
        doc.meridians = [tuple(_int(x, f"meridians[{i}][{j}]") for j, x in enumerate(_list(m, f"meridians[{i}]", r)))
                         for i, m in enumerate(_list(raw["meridians"], "meridians"))]
    if "points" in raw:
        doc.points = [tuple(_rational(x, f"points[{i}][{j}]") for j, x in enumerate(_list(p, f"points[{i}]", r)))
                      for i, p in enumerate(_list(raw["points"], "points"))]
    return doc


def _check_keys(obj, path, required, optional=()):
    if not isinstance(obj, dict):
        raise DocumentError(path, "expected an object")
    for k in required:
        if k not in obj:
            raise DocumentError(f"{path}.{k}", "missing field")
    extra = sorted(set(obj) - set(required) - set(optional))
    if extra:
        raise DocumentError(f"{path}.{extra[0]}", "unknown field")


def _parse_complex(domain, r, obj) -> BasedChainComplex:
    _check_keys(obj, "complex", ("dims", "boundaries"))
    dims = [_nonneg(d, f"complex.dims[{i}]") for i, d in enumerate(_list(obj["dims"], "complex.dims"))]
    if not dims:
        raise DocumentError("complex.dims", "at least one chain module is required")
    bds = _list(obj["boundaries"], "complex.boundaries", len(dims) - 1)
    mats = tuple(_matrix(domain, r, b, dims[i + 1], dims[i], f"complex.boundaries[{i}]", f"A_{i}")
                 for i, b in enumerate(bds))
    return BasedChainComplex(domain, r, tuple(dims), mats)


def _parse_presentation(domain, r, obj) -> TwistedPresentation:
    _check_keys(obj, "presentation", ("generators", "relators", "psi"), ("k", "alpha"))
    g = _nonneg(obj["generators"], "presentation.generators")
    k = _nonneg(obj.get("k", 1), "presentation.k")
    if k == 0:
        raise DocumentError("presentation.k", "k must be positive")
    relators = []
    for j, w in enumerate(_list(obj["relators"], "presentation.relators")):
        word = []
        for i, a in enumerate(_list(w, f"presentation.relators[{j}]")):
            a = _int(a, f"presentation.relators[{j}][{i}]")
            if a == 0 or abs(a) > g:
                raise DocumentError(f"presentation.relators[{j}][{i}]", f"generator index {a} outside ±1..{g}")
            word.append(a)
        relators.append(tuple(word))
    psi = tuple(tuple(_int(x, f"presentation.psi[{i}][{j}]") for j, x in enumerate(_list(v, f"presentation.psi[{i}]", r)))
                for i, v in enumerate(_list(obj["psi"], "presentation.psi", g)))
    alpha = None
    if "alpha" in obj:
        alpha = tuple(_scalar_matrix(domain, m, k, k, f"presentation.alpha[{i}]", f"alpha(x{i + 1})")
                      for i, m in enumerate(_list(obj["alpha"], "presentation.alpha", g)))
    return TwistedPresentation(domain, r, g, tuple(relators), psi, alpha, k)


def _parse_torus(domain, obj) -> TorusSpec:
    _check_keys(obj, "torus", ("fiber_dims", "monodromy"), ("fiber_boundaries",))
    dims = tuple(_nonneg(d, f"torus.fiber_dims[{i}]") for i, d in enumerate(_list(obj["fiber_dims"], "torus.fiber_dims")))
    if not dims:
        raise DocumentError("torus.fiber_dims", "at least one fiber module is required")
    mono = tuple(_scalar_matrix(domain, m, dims[i], dims[i], f"torus.monodromy[{i}]", f"phi_{i}")
                 for i, m in enumerate(_list(obj["monodromy"], "torus.monodromy", len(dims))))
    bds = None
    if "fiber_boundaries" in obj:
        bds = tuple(_scalar_matrix(domain, b, dims[i + 1], dims[i], f"torus.fiber_boundaries[{i}]", f"d_{i}")
                    for i, b in enumerate(_list(obj["fiber_boundaries"], "torus.fiber_boundaries", len(dims) - 1)))
    return TorusSpec(dims, mono, bds)


# --- serialization -----------------------------------------------------------

def complex_to_json(C: BasedChainComplex) -> dict:
    return {"dims": list(C.dims),
            "boundaries": [[[_dump_poly(e) for e in row] for row in A.to_rows()] for A in C.boundaries]}


def document_to_json(doc: ProblemDocument) -> dict:
    out: dict[str, Any] = {"domain": doc.domain.kind, "gamma_rank": doc.gamma_rank}
    if doc.domain.kind == "GF":
        out["prime"] = doc.domain.prime
    if doc.complex is not None:
        out["complex"] = complex_to_json(doc.complex)
    elif doc.presentation is not None:
        P = doc.presentation
        pres: dict[str, Any] = {"generators": P.generators, "relators": [list(w) for w in P.relators],
                                "psi": [list(v) for v in P.psi], "k": P.k,
                                "alpha": [_dump_scalar_matrix(m) for m in P.alpha]}
        out["presentation"] = pres
    else:
        T = doc.torus
        tor: dict[str, Any] = {"fiber_dims": list(T.fiber_dims),
                               "monodromy": [_dump_scalar_matrix(m) for m in T.monodromy]}
        if T.fiber_boundaries is not None:
            tor["fiber_boundaries"] = [_dump_scalar_matrix(m) for m in T.fiber_boundaries]
        out["torus"] = tor
    if doc.meridians is not None:
        out["meridians"] = [list(m) for m in doc.meridians]
    if doc.points:
        out["points"] = [[_dump_scalar(Fraction(x)) for x in p] for p in doc.points]
    return out


def serialize(doc: ProblemDocument) -> str:
    """Canonical text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(document_to_json(doc), indent=2, sort_keys=True) + "\n"
