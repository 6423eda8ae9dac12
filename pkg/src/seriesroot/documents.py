"""JSON documents for maps, polynomials and report values.

Map file::

    {"n": 2, "components": [[[[1, 0], [2, 0]], [[0, 2], [1, 0]]], [[[0, 1], [3, 0]]]]}

Each component is a list of ``[exponents, [re, im]]`` terms; repeated
exponent vectors are summed.  Polynomial file: ``{"coeffs": [[re, im], ...]}``
in ascending degree.
"""

from __future__ import annotations

import json
import math
from typing import Any

from .errors import DocumentError
from .extscalar import ExtScalar
from .jets import PolyMap
from .polynomials import DensePoly


def _reject_constant(name: str):
    raise DocumentError(f"non-finite number {name} is not allowed")


def _load(text: bytes | str) -> Any:
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise DocumentError(f"input is not UTF-8 (byte {exc.start})") from None
    try:
        return json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"malformed JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def _number(x: Any, where: str) -> float:
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise DocumentError(f"{where}: expected a number, got {json.dumps(x)}")
    x = float(x)
    if not math.isfinite(x):
        raise DocumentError(f"{where}: non-finite number")
    return x


def _complex(x: Any, where: str) -> complex:
    if not isinstance(x, list) or len(x) != 2:
        raise DocumentError(f"{where}: expected a [re, im] pair")
    return complex(_number(x[0], f"{where}[0]"), _number(x[1], f"{where}[1]"))


def _exponents(x: Any, n: int, where: str) -> tuple[int, ...]:
    if not isinstance(x, list):
        raise DocumentError(f"{where}: expected a list of {n} exponents")
    if len(x) != n:
        raise DocumentError(f"{where}: dimension mismatch, {len(x)} exponents for n={n}")
    out = []
    for k, e in enumerate(x):
        if isinstance(e, bool) or not isinstance(e, int) or e < 0:
            raise DocumentError(f"{where}[{k}]: exponents must be non-negative integers")
        out.append(e)
    return tuple(out)


def map_from_document(doc: Any) -> PolyMap:
    if not isinstance(doc, dict):
        raise DocumentError("top level: expected an object with keys 'n' and 'components'")
    missing = {"n", "components"} - doc.keys()
    if missing:
        raise DocumentError(f"top level: missing key(s) {sorted(missing)}")
    n = doc["n"]
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise DocumentError("n: expected a positive integer")
    comps = doc["components"]
    if not isinstance(comps, list) or len(comps) != n:
        raise DocumentError(f"components: expected a list of {n} components")
    parsed = []
    for k, comp in enumerate(comps):
        if not isinstance(comp, list):
            raise DocumentError(f"components[{k}]: expected a list of terms")
        terms = []
        for t, term in enumerate(comp):
            where = f"components[{k}][{t}]"
            if not isinstance(term, list) or len(term) != 2:
                raise DocumentError(f"{where}: expected [exponents, [re, im]]")
            terms.append((_exponents(term[0], n, f"{where}[0]"), _complex(term[1], f"{where}[1]")))
        parsed.append(terms)
    return PolyMap.from_terms(n, parsed)


def parse_map(text: bytes | str) -> PolyMap:
    return map_from_document(_load(text))


def complex_pair(z: complex) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def map_to_document(F: PolyMap) -> dict:
    comps = []
    for comp in F.components:
        terms = sorted(comp.terms.items(), key=lambda kv: (sum(kv[0]), tuple(-e for e in kv[0])))
        comps.append([[list(v), complex_pair(complex(c))] for v, c in terms])
    return {"n": F.n_vars, "components": comps}


def serialize_map(F: PolyMap) -> str:
    return json.dumps(map_to_document(F), sort_keys=True)


def poly_from_document(doc: Any) -> DensePoly:
    if not isinstance(doc, dict) or "coeffs" not in doc:
        raise DocumentError("top level: expected an object with key 'coeffs'")
    cs = doc["coeffs"]
    if not isinstance(cs, list) or not cs:
        raise DocumentError("coeffs: expected a non-empty list of [re, im] pairs")
    return DensePoly(_complex(c, f"coeffs[{i}]") for i, c in enumerate(cs))


def parse_poly(text: bytes | str) -> DensePoly:
    return poly_from_document(_load(text))


def poly_to_document(p: DensePoly) -> dict:
    return {"coeffs": [complex_pair(c) for c in p.coeffs]}


def ext_pair(x: ExtScalar) -> dict:
    return {"log2_mag": x.log2abs(), "arg": x.arg()}


def univariate(F: PolyMap) -> DensePoly:
    """The one-variable polynomial of a map with n = 1."""
    if F.n_vars != 1:
        raise DocumentError(f"expected a one-variable map, got n={F.n_vars}")
    terms = F.components[0].terms
    deg = max((v[0] for v in terms), default=0)
    return DensePoly(complex(terms.get((i,), 0)) for i in range(deg + 1))


def map_from_univariate(p: DensePoly) -> PolyMap:
    return PolyMap.from_terms(1, [[((i,), c) for i, c in enumerate(p.coeffs) if c != 0]])
