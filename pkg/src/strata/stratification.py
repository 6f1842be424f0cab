"""Filtered simplicial complexes, strata, perversities.

A stratified space is a simplicial complex together with a descending list
of full subcomplexes ``Σ = F_0 ⊇ F_1 ⊇ ...`` (the singular terms of the
filtration; the whole complex is implicit).  Each open simplex lies in the
deepest term containing it, and the strata are the connected components of
the differences between consecutive terms.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from .errors import StrataError
from .simplicial import (
    EMPTY,
    Simplex,
    SimplicialComplex,
    all_faces,
    barycentric_subdivision,
    cone,
    faces,
    homology_betti,
    product_with_pairs,
    suspension,
)

APEX = "star"


@dataclass(frozen=True)
class Stratum:
    id: str
    codim: int
    simplices: tuple  # sorted open simplices
    link: SimplicialComplex | None = field(default=None, compare=False)

    @property
    def is_regular(self) -> bool:
        return self.codim == 0

    @property
    def dim(self) -> int:
        return max(len(s) for s in self.simplices) - 1

    def closure(self) -> SimplicialComplex:
        return SimplicialComplex(self.simplices)


class _UnionFind:
    def __init__(self, items: Iterable) -> None:
        self.parent = {x: x for x in items}

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            if rb < ra:
                ra, rb = rb, ra
            self.parent[rb] = ra

    def groups(self) -> list[list]:
        out: dict = {}
        for x in self.parent:
            out.setdefault(self.find(x), []).append(x)
        return list(out.values())


def _components(simplices: Iterable[Simplex]) -> list[list[Simplex]]:
    """Components of a set of open simplices glued along shared faces."""
    members = set(simplices)
    uf = _UnionFind(members)
    for s in members:
        for f in faces(s):
            if f in members:
                uf.union(s, f)
    return [sorted(g) for g in uf.groups()]


@dataclass(frozen=True)
class StratifiedSpace:
    complex: SimplicialComplex
    filtration: tuple = ()
    strata: tuple = ()

    @classmethod
    def build(
        cls,
        complex: SimplicialComplex,
        filtration: Sequence[SimplicialComplex] = (),
        names: Mapping[str, Sequence[Simplex]] | None = None,
        links: Mapping[str, SimplicialComplex] | None = None,
        repair: bool = False,
    ) -> StratifiedSpace:
        """Derive strata from ``filtration``.

        ``names`` maps a stratum id to representative simplices; the derived
        components containing them are merged under that id.  Unnamed
        singular components get ids ``s0, s1, ...`` and regular ones
        ``r0, r1, ...``.  With ``repair`` the complex is replaced by its
        barycentric subdivision first, which makes every filtration term full.
        """
        filtration = tuple(f for f in filtration if not f.is_empty)
        if filtration and set(filtration[0].facets) == set(complex.facets):
            filtration = filtration[1:]
        if repair:
            sub, bary = barycentric_subdivision(complex)
            names = {k: [_subdivided_rep(bary, sub, r) for r in reps] for k, reps in (names or {}).items()}
            filtration = tuple(_subdivide_term(sub, bary, f) for f in filtration)
            complex = sub
        level: dict[Simplex, int] = {}
        for s in complex.simplices():
            depth = 0
            for term in filtration:
                if s in term:
                    depth += 1
                else:
                    break
            level[s] = depth
        by_level: dict[int, list] = {}
        for s, d in level.items():
            by_level.setdefault(d, []).append(s)
        comps = [c for d in sorted(by_level) for c in _components(by_level[d])]
        n = complex.dimension
        owner: dict[Simplex, int] = {}
        for k, c in enumerate(comps):
            for s in c:
                owner[s] = k
        groups: dict[str, set[int]] = {}
        claimed: set[int] = set()
        for sid, reps in (names or {}).items():
            ks = set()
            for r in reps:
                r = tuple(sorted(r))
                if r not in owner:
                    raise StrataError("MISSING_SIMPLEX", f"stratum {sid!r} names {list(r)}, not a simplex")
                ks.add(owner[r])
            if ks & claimed:
                raise StrataError("BORDER_VIOLATION", f"stratum {sid!r} overlaps another named stratum")
            claimed |= ks
            groups[sid] = ks

        def codim_of(ks: Iterable[int]) -> int:
            return n - max(len(s) - 1 for k in ks for s in comps[k])

        rest = sorted(
            (k for k in range(len(comps)) if k not in claimed),
            key=lambda k: (-codim_of([k]), comps[k][0]),
        )
        counters = {"s": 0, "r": 0}
        for k in rest:
            tag = "r" if codim_of([k]) == 0 else "s"
            while f"{tag}{counters[tag]}" in groups:
                counters[tag] += 1
            groups[f"{tag}{counters[tag]}"] = {k}
            counters[tag] += 1
        strata = []
        for sid, ks in groups.items():
            simplices = tuple(sorted(s for k in ks for s in comps[k]))
            strata.append(Stratum(sid, codim_of(ks), simplices, (links or {}).get(sid)))
        strata.sort(key=lambda st: (-st.codim, st.simplices[0]))
        return cls(complex, filtration, tuple(strata))

    @property
    def dimension(self) -> int:
        return self.complex.dimension

    @cached_property
    def _owner(self) -> dict[Simplex, Stratum]:
        return {s: st for st in self.strata for s in st.simplices}

    def stratum_of(self, simplex: Simplex) -> Stratum:
        return self._owner[tuple(sorted(simplex))]

    def stratum(self, sid: str) -> Stratum:
        for st in self.strata:
            if st.id == sid:
                return st
        raise StrataError("MISSING_STRATUM", f"no stratum {sid!r}")

    @property
    def singular_strata(self) -> tuple[Stratum, ...]:
        return tuple(st for st in self.strata if not st.is_regular)

    @property
    def regular_strata(self) -> tuple[Stratum, ...]:
        return tuple(st for st in self.strata if st.is_regular)

    @property
    def singular_ids(self) -> tuple[str, ...]:
        return tuple(sorted(st.id for st in self.singular_strata))

    @cached_property
    def singular_simplices(self) -> frozenset:
        return frozenset(s for st in self.singular_strata for s in st.simplices)

    @cached_property
    def singular_vertices(self) -> frozenset:
        return frozenset(s[0] for s in self.singular_simplices if len(s) == 1)

    def is_singular(self, simplex: Simplex) -> bool:
        return simplex in self.singular_simplices

    @cached_property
    def _closures(self) -> dict[str, frozenset]:
        return {st.id: frozenset(f for s in st.simplices for f in all_faces(s)) for st in self.strata}

    def below(self, a: str, b: str) -> bool:
        """Border relation ``a < b``: stratum ``a`` lies in the closure of ``b``."""
        if a == b:
            return False
        sa = self.stratum(a)
        return sa.simplices[0] in self._closures[b]

    @cached_property
    def length(self) -> int:
        ids = [st.id for st in self.strata]
        best: dict[str, int] = {}

        def depth(sid: str) -> int:
            if sid not in best:
                best[sid] = max((depth(o) + 1 for o in ids if self.below(o, sid)), default=0)
            return best[sid]

        return max((depth(s) for s in ids), default=0)


def _subdivided_rep(bary: dict[int, Simplex], sub: SimplicialComplex, rep: Sequence[int]) -> Simplex:
    inv = {s: v for v, s in bary.items()}
    return (inv[tuple(sorted(rep))],)


def _subdivide_term(sub: SimplicialComplex, bary: dict[int, Simplex], term: SimplicialComplex) -> SimplicialComplex:
    keep = [v for v, s in bary.items() if s in term]
    return sub.full_subcomplex(keep)


def manifold_space(complex: SimplicialComplex) -> StratifiedSpace:
    """Trivial stratification: connected components are the strata."""
    return StratifiedSpace.build(complex)


# -- validation ---------------------------------------------------------------

CODES = ("DENSITY_VIOLATION", "CODIM1_STRATUM", "BORDER_VIOLATION", "NOT_FULL", "DISCONNECTED_STRATUM")


@dataclass(frozen=True)
class Violation:
    code: str
    witness: str
    detail: str = ""


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...]
    length: int

    @property
    def valid(self) -> bool:
        return not self.violations

    @property
    def verdict(self) -> str:
        return "valid" if self.valid else "invalid"

    def codes(self) -> tuple[str, ...]:
        return tuple(v.code for v in self.violations)

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "length": self.length,
            "violations": [{"code": v.code, "witness": v.witness, "detail": v.detail} for v in self.violations],
        }


@lru_cache(maxsize=512)
def validate_pseudomanifold(space: StratifiedSpace) -> ValidationReport:
    """Combinatorial pseudomanifold conditions; see ``CODES``."""
    out: list[Violation] = []
    K = space.complex
    n = K.dimension
    for f in K.facets:
        if len(f) - 1 != n:
            out.append(Violation("DENSITY_VIOLATION", str(list(f)), f"facet of dimension {len(f) - 1} < {n}"))
    for st in space.strata:
        if st.codim == 1:
            out.append(Violation("CODIM1_STRATUM", st.id))
    closures = space._closures
    for st in space.strata:
        cl = closures[st.id]
        for other in space.strata:
            if other.id == st.id:
                continue
            hits = [s for s in other.simplices if s in cl]
            if hits and len(hits) != len(other.simplices):
                out.append(Violation("BORDER_VIOLATION", other.id, f"meets closure of {st.id} without lying in it"))
    prev = K
    for k, term in enumerate(space.filtration):
        if not term.is_subcomplex_of(prev):
            out.append(Violation("NOT_FULL", f"term {k}", "filtration is not descending"))
        verts = set(term.vertices)
        for s in K.simplices():
            if set(s) <= verts and s not in term:
                out.append(Violation("NOT_FULL", str(list(s)), f"spanned by term {k} but missing from it"))
                break
        prev = term
    for st in space.strata:
        if len(_components(st.simplices)) > 1:
            out.append(Violation("DISCONNECTED_STRATUM", st.id))
    return ValidationReport(tuple(out), space.length if not out else _safe_length(space))


def _safe_length(space: StratifiedSpace) -> int:
    try:
        return space.length
    except RecursionError:  # border relation with cycles
        return -1


def require_valid(space: StratifiedSpace, code: str = "INVALID_SPACE") -> None:
    report = validate_pseudomanifold(space)
    if not report.valid:
        raise StrataError(code, ", ".join(f"{v.code}({v.witness})" for v in report.violations))


# -- perversities ---------------------------------------------------------------


@dataclass(frozen=True)
class Perversity:
    """Integer value per singular stratum id."""

    values: tuple = ()

    def __post_init__(self) -> None:
        items = self.values.items() if isinstance(self.values, Mapping) else self.values
        object.__setattr__(self, "values", tuple(sorted((str(k), int(v)) for k, v in items)))

    @classmethod
    def of(cls, mapping: Mapping[str, int]) -> Perversity:
        return cls(tuple(mapping.items()))

    def as_dict(self) -> dict[str, int]:
        return dict(self.values)

    def keys(self) -> tuple[str, ...]:
        return tuple(k for k, _ in self.values)

    def __getitem__(self, sid: str) -> int:
        for k, v in self.values:
            if k == sid:
                return v
        raise KeyError(sid)

    def __contains__(self, sid: object) -> bool:
        return any(k == sid for k, _ in self.values)

    def restrict(self, ids: Iterable[str]) -> Perversity:
        ids = set(ids)
        return Perversity(tuple((k, v) for k, v in self.values if k in ids))

    def shifted(self, n: int) -> Perversity:
        return Perversity(tuple((k, v + n) for k, v in self.values))

    def le(self, other: Perversity) -> bool:
        _same_keys(self, other)
        return all(a <= b for (_, a), (_, b) in zip(self.values, other.values))

    def __add__(self, other: Perversity) -> Perversity:
        return perversity_combine(self, other, "add")

    def __sub__(self, other: Perversity) -> Perversity:
        return perversity_combine(self, other, "sub")

    def __str__(self) -> str:
        return "{" + ", ".join(f"{k}↦{v}" for k, v in self.values) + "}"


def _same_keys(p: Perversity, q: Perversity) -> None:
    if p.keys() != q.keys():
        raise StrataError("SPACE_MISMATCH", f"perversities on different strata: {p.keys()} vs {q.keys()}")


_OPS = {
    "add": lambda a, b: a + b,
    "sub": lambda a, b: a - b,
    "min": min,
    "max": max,
}


def perversity_combine(p: Perversity, q: Perversity, op: str) -> Perversity:
    _same_keys(p, q)
    f = _OPS[op]
    return Perversity(tuple((k, f(a, b)) for (k, a), (_, b) in zip(p.values, q.values)))


def named_perversity(space: StratifiedSpace, name: str | int, value: int | None = None) -> Perversity:
    """``zero``, ``top`` (codim - 2) or a constant (``"constant", n`` / ``"const:n"`` / an int)."""
    if isinstance(name, int):
        name, value = "constant", name
    elif name.startswith("const:"):
        name, value = "constant", int(name.split(":", 1)[1])
    sing = space.singular_strata
    if name == "zero":
        return Perversity(tuple((st.id, 0) for st in sing))
    if name == "top":
        return Perversity(tuple((st.id, st.codim - 2) for st in sing))
    if name == "constant":
        if value is None:
            raise ValueError("constant perversity needs a value")
        return Perversity(tuple((st.id, value) for st in sing))
    raise ValueError(f"unknown perversity name {name!r}")


def top_perversity(space: StratifiedSpace) -> Perversity:
    return named_perversity(space, "top")


def perversity_from_codims(space: StratifiedSpace, by_codim: Mapping[int, int]) -> Perversity:
    """Expand a codimension-indexed perversity to per-stratum form."""
    return Perversity(tuple((st.id, by_codim[st.codim]) for st in space.singular_strata))


def check_total(space: StratifiedSpace, q: Perversity) -> None:
    if tuple(sorted(q.keys())) != space.singular_ids:
        raise StrataError("SPACE_MISMATCH", f"perversity on {q.keys()} but singular strata are {space.singular_ids}")


# -- constructions ----------------------------------------------------------------


def _fresh(base: str, taken: Iterable[str]) -> str:
    taken = set(taken)
    if base not in taken:
        return base
    k = 1
    while f"{base}{k}" in taken:
        k += 1
    return f"{base}{k}"


def cone_stratified(link: StratifiedSpace, apex_id: str = APEX) -> StratifiedSpace:
    """Open cone ``c(L)``: the apex is a new minimal stratum, ``S`` becomes ``S × (0, ∞)``.

    Stratum ids of the link are kept; the apex gets ``apex_id`` (suffixed if taken).
    """
    require_valid(link, "INVALID_LINK")
    K = cone(link.complex)
    apex = K.vertices[-1]
    if link.complex.is_empty:
        return StratifiedSpace.build(K, names={apex_id: [(apex,)]})
    sid = _fresh(apex_id, (st.id for st in link.strata))
    filtration = tuple(_cone_at(term, apex) for term in link.filtration) + (SimplicialComplex(((apex,),)),)
    names = {st.id: [st.simplices[0]] for st in link.strata}
    names[sid] = [(apex,)]
    return StratifiedSpace.build(K, filtration, names, links={sid: link.complex})


def _cone_at(term: SimplicialComplex, apex: int) -> SimplicialComplex:
    return SimplicialComplex(tuple(f + (apex,) for f in term.facets))


def suspension_stratified(link: StratifiedSpace, ids: tuple[str, str] = ("north", "south")) -> StratifiedSpace:
    """Suspension with both apexes as point strata (two cones glued along ``L``)."""
    require_valid(link, "INVALID_LINK")
    K = suspension(link.complex)
    a, b = K.vertices[-2], K.vertices[-1]
    filtration = tuple(
        SimplicialComplex(tuple(f + (a,) for f in t.facets) + tuple(f + (b,) for f in t.facets)) for t in link.filtration
    ) + (SimplicialComplex(((a,), (b,))),)
    names = {st.id: [st.simplices[0]] for st in link.strata}
    names[ids[0]] = [(a,)]
    names[ids[1]] = [(b,)]
    return StratifiedSpace.build(K, filtration, names, links={ids[0]: link.complex, ids[1]: link.complex})


def product_stratified(manifold: SimplicialComplex, space: StratifiedSpace) -> StratifiedSpace:
    """Canonical stratification of ``M × X``: strata ``C × S`` for components ``C`` of ``M``.

    With a connected ``M`` the stratum ids of ``X`` are kept; otherwise the
    id of ``C × S`` is ``"<S>@<k>"`` for the ``k``-th component.
    """
    m = manifold_space(manifold)
    report = validate_pseudomanifold(m)
    if manifold.is_empty or not report.valid or m.singular_strata:
        raise StrataError("NOT_A_MANIFOLD", "manifold factor must be pure and unstratified")
    K, pairs = product_with_pairs(manifold, space.complex)
    comps = m.regular_strata
    comp_of = {s[0]: c.id for c in comps for s in c.simplices if len(s) == 1}
    filtration = tuple(_product_term(K, pairs, manifold, term) for term in space.filtration)
    names: dict[str, list] = {}
    inv = {p: k for k, p in pairs.items()}
    for c_index, c in enumerate(comps):
        mv = next(s[0] for s in c.simplices if len(s) == 1)
        for st in space.strata:
            rep = st.simplices[0]
            if len(comps) == 1:
                sid = st.id
            else:
                sid = f"{st.id}@{c_index}"
            names[sid] = [(inv[(mv, rep[0])],)] if len(rep) == 1 else [_lift(inv, mv, rep)]
    return StratifiedSpace.build(K, filtration, names)


def _lift(inv: dict, mv: int, rep: Simplex) -> Simplex:
    return tuple(sorted(inv[(mv, v)] for v in rep))


def _product_term(K: SimplicialComplex, pairs: dict, manifold: SimplicialComplex, term: SimplicialComplex) -> SimplicialComplex:
    keep = [k for k, (u, v) in pairs.items() if v in set(term.vertices)]
    return K.full_subcomplex(keep)


def stratum_homology(space: StratifiedSpace, sid: str):
    return homology_betti(space.stratum(sid).closure())


__all__ = [
    "APEX",
    "EMPTY",
    "Perversity",
    "StratifiedSpace",
    "Stratum",
    "ValidationReport",
    "Violation",
    "check_total",
    "cone_stratified",
    "manifold_space",
    "named_perversity",
    "perversity_combine",
    "perversity_from_codims",
    "product_stratified",
    "require_valid",
    "suspension_stratified",
    "top_perversity",
    "validate_pseudomanifold",
]
