"""JSON file formats for complexes, stratified spaces and actions.

Every document carries a ``format`` field:

* ``strata-complex/1``: ``{"facets": [[v, ...], ...], "vertices": [...]}``
* ``strata-space/1``: ``{"complex": <complex>, "filtration": [[facets], ...],
  "strata": [{"id": str, "simplices": [[v, ...], ...]}], "repair": bool}``
* ``strata-action/1``: ``{"name", "space", "orbit_space", "stratum_map",
  "isotropy", "links", "euler_flags"}`` plus optional ``shape``, ``base``,
  ``factor`` and ``metadata``.

Wherever a nested document is expected, a string may be given instead: a
path relative to the referring file, or ``catalog:<name>`` for actions.
Parse errors name the offending location as a JSON path (``$.facets[2]``).
"""
from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from .errors import FormatError, StrataError
from .simplicial import SimplicialComplex
from .stratification import StratifiedSpace, _components

COMPLEX, SPACE, ACTION = "strata-complex/1", "strata-space/1", "strata-action/1"


def _render(obj: Any, depth: int) -> str:
    pad = "  " * (depth + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = (f"{pad}{json.dumps(str(k), ensure_ascii=False)}: {_render(obj[k], depth + 1)}" for k in sorted(obj, key=str))
        return "{\n" + ",\n".join(items) + "\n" + "  " * depth + "}"
    if isinstance(obj, (list, tuple)):
        if all(not isinstance(v, (dict, list, tuple)) for v in obj):
            return json.dumps(list(obj), ensure_ascii=False)
        return "[\n" + ",\n".join(pad + _render(v, depth + 1) for v in obj) + "\n" + "  " * depth + "]"
    return json.dumps(obj, ensure_ascii=False)


def dumps(obj: Any) -> str:
    """Canonical JSON text: sorted keys, two-space indent, scalar lists kept
    on one line, trailing newline.  ``dumps(json.loads(dumps(x))) == dumps(x)``."""
    return _render(obj, 0) + "\n"


def read_json(path: str | Path) -> Any:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise FormatError(str(path), f"cannot read file ({exc.strerror})") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}:{exc.lineno}:{exc.colno}", exc.msg) from None


class _Ctx:
    """Location tracking for error messages."""

    def __init__(self, source: str, base: Path | None) -> None:
        self.source = source
        self.base = base

    def fail(self, where: str, msg: str) -> FormatError:
        return FormatError(f"{self.source}:{where}", msg)


def _expect(ctx: _Ctx, where: str, value: Any, kind: type | tuple, what: str) -> Any:
    if not isinstance(value, kind) or isinstance(value, bool) and kind is not bool:
        raise ctx.fail(where, f"expected {what}, got {type(value).__name__}")
    return value


def _int_list(ctx: _Ctx, where: str, value: Any) -> tuple[int, ...]:
    _expect(ctx, where, value, list, "a list of vertex ids")
    for k, v in enumerate(value):
        _expect(ctx, f"{where}[{k}]", v, int, "an integer vertex id")
    return tuple(value)


def _facets(ctx: _Ctx, where: str, value: Any) -> list[tuple[int, ...]]:
    _expect(ctx, where, value, list, "a list of simplices")
    out = []
    for k, f in enumerate(value):
        s = _int_list(ctx, f"{where}[{k}]", f)
        if not s:
            raise ctx.fail(f"{where}[{k}]", "empty simplex")
        if len(set(s)) != len(s):
            raise ctx.fail(f"{where}[{k}]", "repeated vertex")
        out.append(s)
    return out


def _check_format(ctx: _Ctx, where: str, doc: Any, fmt: str) -> dict:
    _expect(ctx, where, doc, dict, "an object")
    got = doc.get("format", fmt)
    if got != fmt:
        raise ctx.fail(f"{where}.format", f"expected {fmt!r}, got {got!r}")
    return doc


def _unknown_keys(ctx: _Ctx, where: str, doc: dict, allowed: set[str]) -> None:
    extra = sorted(set(doc) - allowed - {"format"})
    if extra:
        raise ctx.fail(f"{where}.{extra[0]}", "unknown field")


def _resolve(ctx: _Ctx, where: str, value: Any) -> tuple[Any, _Ctx, str]:
    """Follow a path reference; returns the document and its context."""
    if isinstance(value, str):
        path = (ctx.base / value) if ctx.base is not None else Path(value)
        return read_json(path), _Ctx(str(path), path.parent), "$"
    return value, ctx, where


# -- complexes ------------------------------------------------------------------


def complex_from_json(doc: Any, ctx: _Ctx | None = None, where: str = "$") -> SimplicialComplex:
    ctx = ctx or _Ctx("<input>", None)
    doc, ctx, where = _resolve(ctx, where, doc)
    _check_format(ctx, where, doc, COMPLEX)
    _unknown_keys(ctx, where, doc, {"facets", "vertices"})
    if "facets" not in doc:
        raise ctx.fail(where, "missing field 'facets'")
    facets = _facets(ctx, f"{where}.facets", doc["facets"])
    verts = _int_list(ctx, f"{where}.vertices", doc["vertices"]) if "vertices" in doc else ()
    return SimplicialComplex(facets, verts)


def complex_to_json(K: SimplicialComplex) -> dict:
    out: dict[str, Any] = {"format": COMPLEX, "facets": [list(f) for f in K.facets]}
    used = {v for f in K.facets for v in f}
    if set(K.vertices) != used:
        out["vertices"] = list(K.vertices)
    return out


# -- spaces ---------------------------------------------------------------------


def space_from_json(doc: Any, ctx: _Ctx | None = None, where: str = "$") -> StratifiedSpace:
    ctx = ctx or _Ctx("<input>", None)
    doc, ctx, where = _resolve(ctx, where, doc)
    _check_format(ctx, where, doc, SPACE)
    _unknown_keys(ctx, where, doc, {"complex", "filtration", "strata", "repair"})
    if "complex" not in doc:
        raise ctx.fail(where, "missing field 'complex'")
    K = complex_from_json(doc["complex"], ctx, f"{where}.complex")
    terms = []
    filt = doc.get("filtration", [])
    _expect(ctx, f"{where}.filtration", filt, list, "a list of filtration terms")
    for k, term in enumerate(filt):
        facets = _facets(ctx, f"{where}.filtration[{k}]", term)
        for j, f in enumerate(facets):
            if f not in K:
                raise ctx.fail(f"{where}.filtration[{k}][{j}]", f"{list(f)} is not a simplex of the complex")
        terms.append(SimplicialComplex(facets))
    names: dict[str, list] = {}
    strata = doc.get("strata", [])
    _expect(ctx, f"{where}.strata", strata, list, "a list of strata")
    for k, entry in enumerate(strata):
        w = f"{where}.strata[{k}]"
        _expect(ctx, w, entry, dict, "an object")
        _unknown_keys(ctx, w, entry, {"id", "simplices"})
        sid = _expect(ctx, f"{w}.id", entry.get("id"), str, "a string id")
        if sid in names:
            raise ctx.fail(f"{w}.id", f"duplicate stratum id {sid!r}")
        names[sid] = _facets(ctx, f"{w}.simplices", entry.get("simplices"))
    repair = _expect(ctx, f"{where}.repair", doc.get("repair", False), bool, "a boolean")
    try:
        return StratifiedSpace.build(K, terms, names, repair=repair)
    except StrataError as exc:
        raise ctx.fail(where, exc.message) from None


def space_to_json(space: StratifiedSpace) -> dict:
    strata = []
    for st in space.strata:
        reps = [min(c) for c in _components(st.simplices)]
        strata.append({"id": st.id, "simplices": [list(r) for r in sorted(reps)]})
    return {
        "format": SPACE,
        "complex": complex_to_json(space.complex),
        "filtration": [[list(f) for f in t.facets] for t in space.filtration],
        "strata": strata,
    }


def load_space(path: str | Path) -> StratifiedSpace:
    """Read a space file; a bare complex document is read as a manifold."""
    path = Path(path)
    doc = read_json(path)
    ctx = _Ctx(str(path), path.parent)
    if isinstance(doc, dict) and doc.get("format") == COMPLEX:
        return StratifiedSpace.build(complex_from_json(doc, ctx))
    return space_from_json(doc, ctx)


# -- actions --------------------------------------------------------------------


def _str_map(ctx: _Ctx, where: str, value: Any) -> dict[str, str]:
    _expect(ctx, where, value, dict, "an object")
    for k, v in value.items():
        _expect(ctx, f"{where}.{k}", v, str, "a string")
    return dict(value)


def action_from_json(doc: Any, ctx: _Ctx | None = None, where: str = "$"):
    from . import catalog
    from .gysin import ActionModel

    ctx = ctx or _Ctx("<input>", None)
    if isinstance(doc, str) and doc.startswith("catalog:"):
        try:
            return catalog.get(doc.split(":", 1)[1])
        except StrataError as exc:
            raise ctx.fail(where, exc.message) from None
    doc, ctx, where = _resolve(ctx, where, doc)
    _check_format(ctx, where, doc, ACTION)
    allowed = {"name", "space", "orbit_space", "stratum_map", "isotropy", "links", "euler_flags"}
    _unknown_keys(ctx, where, doc, allowed | {"shape", "base", "factor", "metadata"})
    for key in ("name", "space", "orbit_space", "stratum_map"):
        if key not in doc:
            raise ctx.fail(where, f"missing field {key!r}")
    name = _expect(ctx, f"{where}.name", doc["name"], str, "a string")
    X = space_from_json(doc["space"], ctx, f"{where}.space")
    B = space_from_json(doc["orbit_space"], ctx, f"{where}.orbit_space")
    smap_raw = doc["stratum_map"]
    if isinstance(smap_raw, list):
        smap = {}
        for k, pair in enumerate(smap_raw):
            w = f"{where}.stratum_map[{k}]"
            _expect(ctx, w, pair, list, "an [x_id, b_id] pair")
            if len(pair) != 2 or not all(isinstance(p, str) for p in pair):
                raise ctx.fail(w, "expected an [x_id, b_id] pair of strings")
            smap[pair[0]] = pair[1]
    else:
        smap = _str_map(ctx, f"{where}.stratum_map", smap_raw)
    links_raw = doc.get("links", {})
    _expect(ctx, f"{where}.links", links_raw, dict, "an object")
    links = {k: action_from_json(v, ctx, f"{where}.links.{k}") for k, v in links_raw.items()}
    base = action_from_json(doc["base"], ctx, f"{where}.base") if "base" in doc else None
    factor = complex_from_json(doc["factor"], ctx, f"{where}.factor") if "factor" in doc else None
    metadata = _expect(ctx, f"{where}.metadata", doc.get("metadata", {}), dict, "an object")
    shape = doc.get("shape")
    if shape is not None:
        _expect(ctx, f"{where}.shape", shape, str, "a string")
    try:
        return ActionModel(
            name,
            X,
            B,
            smap,
            isotropy=_str_map(ctx, f"{where}.isotropy", doc.get("isotropy", {})),
            links=links,
            euler_flags=_str_map(ctx, f"{where}.euler_flags", doc.get("euler_flags", {})),
            shape=shape,
            base=base,
            factor=factor,
            metadata=metadata,
        )
    except StrataError as exc:
        raise ctx.fail(where, f"{exc.code}: {exc.message}") from None


def action_to_json(action) -> dict:
    out: dict[str, Any] = {
        "format": ACTION,
        "name": action.name,
        "space": space_to_json(action.X),
        "orbit_space": space_to_json(action.B),
        "stratum_map": [[x, b] for x, b in sorted(action.stratum_map.items())],
        "isotropy": dict(action.isotropy),
        "links": {k: action_to_json(v) for k, v in action.links.items()},
        "euler_flags": dict(action.euler_flags),
    }
    if action.shape is not None:
        out["shape"] = action.shape
    if action.base is not None:
        out["base"] = action_to_json(action.base)
    if action.factor is not None:
        out["factor"] = complex_to_json(action.factor)
    if action.metadata:
        out["metadata"] = dict(action.metadata)
    return out


def load_action(path: str | Path):
    path = Path(path)
    return action_from_json(read_json(path), _Ctx(str(path), path.parent))
