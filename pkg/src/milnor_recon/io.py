"""JSON file formats. Rationals are strings ``"p/q"`` (``"p"`` when q = 1)."""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any, Sequence

from .algebra import AlgebraTable
from .exact import Polynomial


class MalformedInput(ValueError):
    pass


def q2s(x: Fraction) -> str:
    return str(Fraction(x))


def s2q(s: Any) -> Fraction:
    if isinstance(s, bool) or not isinstance(s, (str, int)):
        raise MalformedInput(f"expected a rational string, got {s!r}")
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise MalformedInput(f"bad rational {s!r}") from exc


def _int(x: Any, what: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise MalformedInput(f"{what} must be an integer, got {x!r}")
    return x


def algebra_to_json(T: AlgebraTable) -> dict:
    rows = []
    for (k, l) in sorted(T.products):
        vec = T.products[(k, l)]
        rows.append([k, l, [[j, q2s(vec[j])] for j in sorted(vec)]])
    return {"dim": T.dim, "table": rows}


def algebra_from_json(obj: Any) -> AlgebraTable:
    try:
        dim = _int(obj["dim"], "dim")
        products: dict[tuple[int, int], dict[int, Fraction]] = {}
        for entry in obj["table"]:
            k, l, vec = entry
            k, l = _int(k, "k"), _int(l, "l")
            if k > l:
                raise MalformedInput(f"pair ({k}, {l}) must be listed with k <= l")
            if (k, l) in products:
                raise MalformedInput(f"pair ({k}, {l}) listed twice")
            out: dict[int, Fraction] = {}
            for j, c in vec:
                j = _int(j, "j")
                if j in out:
                    raise MalformedInput(f"index {j} repeated in product ({k}, {l})")
                out[j] = s2q(c)
            products[(k, l)] = out
        return AlgebraTable(dim, products)
    except MalformedInput:
        raise
    except Exception as exc:
        raise MalformedInput(f"malformed algebra: {exc}") from exc


def poly_to_json(p: Polynomial) -> dict:
    terms = [{"c": q2s(c), "e": list(e)} for e, c in sorted(p.terms.items(), reverse=True)]
    return {"vars": p.nvars, "terms": terms}


def poly_from_json(obj: Any) -> Polynomial:
    try:
        n = _int(obj["vars"], "vars")
        terms: dict[tuple[int, ...], Fraction] = {}
        for t in obj["terms"]:
            e = tuple(_int(x, "exponent") for x in t["e"])
            if e in terms:
                raise MalformedInput(f"exponent {list(e)} repeated")
            terms[e] = s2q(t["c"])
        return Polynomial(n, terms)
    except MalformedInput:
        raise
    except Exception as exc:
        raise MalformedInput(f"malformed polynomial: {exc}") from exc


def map_to_json(P: Sequence[Polynomial]) -> dict:
    n = P[0].nvars if P else 0
    return {"vars": n, "components": [poly_to_json(p) for p in P]}


def map_from_json(obj: Any) -> tuple[Polynomial, ...]:
    try:
        n = _int(obj["vars"], "vars")
        comps = tuple(poly_from_json(c) for c in obj["components"])
    except MalformedInput:
        raise
    except Exception as exc:
        raise MalformedInput(f"malformed map: {exc}") from exc
    if any(c.nvars != n for c in comps):
        raise MalformedInput("component variable count differs from 'vars'")
    return comps


def basis_from_json(obj: Any) -> list[tuple[int, Polynomial]]:
    """``{"basis": [{"degree": d, "poly": {...}}, ...]}``"""
    try:
        return [(_int(b["degree"], "degree"), poly_from_json(b["poly"])) for b in obj["basis"]]
    except MalformedInput:
        raise
    except Exception as exc:
        raise MalformedInput(f"malformed basis file: {exc}") from exc


def basis_to_json(basis: Sequence[tuple[int, Polynomial]]) -> dict:
    return {"basis": [{"degree": d, "poly": poly_to_json(p)} for d, p in basis]}


def matrix_to_json(M: Sequence[Sequence[Fraction]]) -> list[list[str]]:
    return [[q2s(x) for x in row] for row in M]


def matrix_from_json(obj: Any) -> list[list[Fraction]]:
    return [[s2q(x) for x in row] for row in obj]


def dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def loads(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"invalid JSON: {exc}") from exc
