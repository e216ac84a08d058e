"""JSON formats for polytopes, H-representations and reports.

Rational entries are written as strings (``"1/2"``, ``"-3"``) and read from
strings, ints, or finite decimals.
"""

from __future__ import annotations

import json
from pathlib import Path

from .linalg import rational_str, to_rational
from .polytope import HRepresentation, Polytope

__all__ = [
    "FormatError",
    "polytope_to_json",
    "polytope_from_json",
    "hrep_to_json",
    "hrep_from_json",
    "load_json",
    "load_input",
    "dump_json",
    "write_json",
]


class FormatError(ValueError):
    pass


def _rationals(values, what):
    try:
        return [to_rational(x) for x in values]
    except (TypeError, ValueError) as exc:
        raise FormatError(f"bad {what}: {exc}") from None


def polytope_to_json(p: Polytope) -> dict:
    out = {
        "dim": p.dim,
        "vertices": [[rational_str(x) for x in v] for v in p.vertices()],
    }
    if p.label is not None:
        out["label"] = p.label
    out.update(p.meta)
    return out


def polytope_from_json(d: dict) -> Polytope:
    if not isinstance(d, dict) or "vertices" not in d:
        raise FormatError("polytope JSON needs a 'vertices' list")
    verts = d["vertices"]
    if not isinstance(verts, list) or not verts:
        raise FormatError("'vertices' must be a nonempty list")
    dim = d.get("dim", len(verts[0]) if isinstance(verts[0], list) else None)
    if not isinstance(dim, int) or dim < 1:
        raise FormatError(f"bad dim {dim!r}")
    rows = []
    for k, v in enumerate(verts):
        if not isinstance(v, list) or len(v) != dim:
            raise FormatError(f"vertex {k} does not have {dim} coordinates")
        rows.append(_rationals(v, f"vertex {k}"))
    meta = {k: v for k, v in d.items() if k not in ("dim", "vertices", "label")}
    label = d.get("label")
    return Polytope.from_vertices(rows, label=label, meta=meta)


def hrep_to_json(h: HRepresentation) -> dict:
    return {
        "dim": h.dim,
        "A": h.a_matrix.to_json(),
        "b": [rational_str(x) for x in h.b_vector],
    }


def hrep_from_json(d: dict) -> HRepresentation:
    if not isinstance(d, dict) or "A" not in d or "b" not in d:
        raise FormatError("H-representation JSON needs 'A' and 'b'")
    a, b = d["A"], d["b"]
    if not isinstance(a, list) or not isinstance(b, list) or len(a) != len(b):
        raise FormatError("'A' and 'b' must be lists of equal length")
    dim = d.get("dim", len(a[0]) if a and isinstance(a[0], list) else None)
    if not isinstance(dim, int) or dim < 1:
        raise FormatError(f"bad dim {dim!r}")
    rows = []
    for k, r in enumerate(a):
        if not isinstance(r, list) or len(r) != dim:
            raise FormatError(f"row {k} of A does not have {dim} entries")
        rows.append(_rationals(r, f"row {k} of A"))
    try:
        return HRepresentation.from_rows(rows, _rationals(b, "b"), dim=dim)
    except ValueError as exc:
        raise FormatError(str(exc)) from None


def load_json(path) -> object:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: invalid JSON ({exc})") from None


def load_input(path) -> Polytope | HRepresentation:
    """Read a polytope or an H-representation, telling them apart by keys."""
    d = load_json(path)
    if isinstance(d, dict) and "vertices" in d:
        return polytope_from_json(d)
    if isinstance(d, dict) and "A" in d and "b" in d:
        return hrep_from_json(d)
    raise FormatError(f"{path}: neither a polytope ('vertices') nor an H-representation ('A', 'b')")


def dump_json(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def write_json(path, obj) -> None:
    Path(path).write_text(dump_json(obj), encoding="utf-8")
