"""JSON encoding of fans, divisors, bundles and polytopes.

Rationals travel as strings ``"p/q"`` (integers may also be plain numbers
on input).  Schemas::

    fan      {"rank": n, "rays": [[int]], "cones": [[rayIdx]]}
    divisor  {"fan": fan, "u": {"coneIdx": [rational]}}
    bundle   {"fan": fan, "rank": r,
              "filtrations": {"rayIdx": [{"threshold": int, "basis": [[rational]]}]}}
    polytope {"rank": n, "vertices": [[int]]}
"""

from __future__ import annotations

import json
import sys
from fractions import Fraction
from typing import Any

from .errors import MalformedInput
from .fan import Fan
from .geometry import exact
from .klyachko import Filtration, ToricVectorBundle
from .polytope import LatticePolytope
from .tdivisor import TCartierDivisor


def parse_rational(x) -> Fraction | int:
    if isinstance(x, bool):
        raise MalformedInput(f"not a rational: {x!r}")
    if isinstance(x, int):
        return x
    if isinstance(x, str):
        try:
            return exact(Fraction(x.strip()))
        except (ValueError, ZeroDivisionError):
            raise MalformedInput(f"not a rational string: {x!r}") from None
    raise MalformedInput(f"rationals must be integers or 'p/q' strings, got {x!r}")


def format_rational(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _int(x) -> int:
    v = parse_rational(x)
    if isinstance(v, Fraction):
        raise MalformedInput(f"expected an integer, got {x!r}")
    return v


def _get(obj: dict, key: str):
    if not isinstance(obj, dict) or key not in obj:
        raise MalformedInput(f"missing field {key!r}")
    return obj[key]


def _indexed(obj, n: int, what: str) -> list:
    """A ``{"idx": value}`` mapping (or a plain list) as a list of length ``n``."""
    if isinstance(obj, list):
        items = list(obj)
    elif isinstance(obj, dict):
        try:
            keyed = {int(k): v for k, v in obj.items()}
        except ValueError:
            raise MalformedInput(f"{what} keys must be indices") from None
        if sorted(keyed) != list(range(n)):
            raise MalformedInput(f"{what} must cover indices 0..{n - 1}")
        items = [keyed[i] for i in range(n)]
    else:
        raise MalformedInput(f"{what} must be a list or an index mapping")
    if len(items) != n:
        raise MalformedInput(f"expected {n} {what}, got {len(items)}")
    return items


# ---------------------------------------------------------------------------
# decoding


def fan_from_json(obj: dict) -> Fan:
    rays = [[_int(x) for x in r] for r in _get(obj, "rays")]
    cones = [[_int(i) for i in c] for c in _get(obj, "cones")]
    fan = Fan(rays, cones)
    if "rank" in obj and _int(obj["rank"]) != fan.rank:
        raise MalformedInput(f"rank {obj['rank']} does not match rays of length {fan.rank}")
    return fan


def divisor_from_json(obj: dict, fan: Fan | None = None) -> TCartierDivisor:
    fan = fan or fan_from_json(_get(obj, "fan"))
    chars = _indexed(_get(obj, "u"), fan.n_cones, "characters")
    return TCartierDivisor(fan, [[parse_rational(x) for x in u] for u in chars])


def filtration_from_json(items: list, r: int) -> Filtration:
    jumps = []
    for it in items:
        basis = [[parse_rational(x) for x in row] for row in _get(it, "basis")]
        for row in basis:
            if len(row) != r:
                raise MalformedInput(f"basis vector of length {len(row)} in rank {r}")
        jumps.append((_int(_get(it, "threshold")), basis))
    return Filtration(r, jumps)


def bundle_from_json(obj: dict) -> ToricVectorBundle:
    fan = fan_from_json(_get(obj, "fan"))
    r = _int(_get(obj, "rank"))
    items = _indexed(_get(obj, "filtrations"), len(fan.rays), "filtrations")
    return ToricVectorBundle(fan, r, [filtration_from_json(f, r) for f in items])


def polytope_from_json(obj: dict) -> LatticePolytope:
    verts = [[_int(x) for x in v] for v in _get(obj, "vertices")]
    p = LatticePolytope(verts)
    if "rank" in obj and _int(obj["rank"]) != p.rank:
        raise MalformedInput("polytope rank does not match its vertices")
    return p


# ---------------------------------------------------------------------------
# encoding


def fan_to_json(fan: Fan) -> dict:
    return {
        "rank": fan.rank,
        "rays": [list(r) for r in fan.rays],
        "cones": [list(c) for c in fan.cones],
    }


def vector_to_json(v) -> list:
    return [format_rational(x) for x in v]


def divisor_to_json(d: TCartierDivisor) -> dict:
    return {
        "fan": fan_to_json(d.fan),
        "u": {str(i): vector_to_json(u) for i, u in enumerate(d.characters)},
    }


def bundle_to_json(b: ToricVectorBundle) -> dict:
    return {
        "fan": fan_to_json(b.fan),
        "rank": b.rank,
        "filtrations": {
            str(k): [
                {"threshold": t, "basis": [vector_to_json(row) for row in s.basis]}
                for t, s in f.jumps
            ]
            for k, f in enumerate(b.filtrations)
        },
    }


def polytope_to_json(p: LatticePolytope) -> dict:
    return {"rank": p.rank, "vertices": [list(v) for v in p.vertices]}


def plain(obj: Any) -> Any:
    """Recursively convert tuples and rationals into JSON-ready values."""
    if isinstance(obj, Fraction):
        return format_rational(obj) if obj.denominator != 1 else obj.numerator
    if isinstance(obj, dict):
        return {str(k): plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [plain(x) for x in obj]
    return obj


def dumps(obj: Any) -> str:
    return json.dumps(plain(obj), sort_keys=True, separators=(", ", ": "))


def load_json(path: str) -> Any:
    """Read JSON from a file, or from stdin when ``path`` is ``-``."""
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None
    except OSError as exc:
        raise MalformedInput(f"{path}: {exc.strerror}") from None
