"""Finite abstract simplicial complexes and their rational homology."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations, permutations
from typing import Iterable, Mapping, Sequence

from .errors import StrataError
from .linalg import rank

Simplex = tuple  # sorted tuple of vertex ids


def faces(simplex: Simplex) -> list[Simplex]:
    """Codimension-one faces, in the order matching the boundary signs."""
    return [simplex[:k] + simplex[k + 1:] for k in range(len(simplex))]


def all_faces(simplex: Simplex) -> Iterable[Simplex]:
    """All nonempty faces of ``simplex`` (including itself)."""
    for k in range(1, len(simplex) + 1):
        yield from combinations(simplex, k)


@dataclass(frozen=True)
class SimplicialComplex:
    """Finite abstract simplicial complex stored by its facets.

    The constructor normalises its input: facets are sorted, non-maximal
    simplices are dropped, and ``vertices`` is the sorted vertex set.  A
    vertex passed in ``vertices`` that lies in no facet becomes a 0-facet.
    """

    facets: tuple = ()
    vertices: tuple = ()

    def __post_init__(self) -> None:
        raw = {tuple(sorted(set(map(int, f)))) for f in self.facets}
        raw.discard(())
        used = {v for f in raw for v in f}
        for v in self.vertices:
            if int(v) not in used:
                raw.add((int(v),))
                used.add(int(v))
        kept: list[Simplex] = []
        kept_sets: list[frozenset] = []
        for f in sorted(raw, key=lambda s: (-len(s), s)):
            fs = frozenset(f)
            if not any(fs <= k for k in kept_sets if len(k) > len(fs)):
                kept.append(f)
                kept_sets.append(fs)
        object.__setattr__(self, "facets", tuple(sorted(kept)))
        object.__setattr__(self, "vertices", tuple(sorted(used)))

    @property
    def dimension(self) -> int:
        return max((len(f) for f in self.facets), default=0) - 1

    @property
    def is_empty(self) -> bool:
        return not self.facets

    @cached_property
    def _by_dim(self) -> tuple[tuple[Simplex, ...], ...]:
        found: list[set] = [set() for _ in range(self.dimension + 1)]
        for f in self.facets:
            for s in all_faces(f):
                found[len(s) - 1].add(s)
        return tuple(tuple(sorted(level)) for level in found)

    @cached_property
    def _all(self) -> frozenset:
        return frozenset(s for level in self._by_dim for s in level)

    def simplices(self, dim: int | None = None) -> tuple[Simplex, ...]:
        if dim is None:
            return tuple(s for level in self._by_dim for s in level)
        if 0 <= dim < len(self._by_dim):
            return self._by_dim[dim]
        return ()

    def __contains__(self, simplex: object) -> bool:
        return tuple(sorted(simplex)) in self._all  # type: ignore[arg-type]

    def __len__(self) -> int:
        return len(self._all)

    def face_counts(self) -> tuple[int, ...]:
        return tuple(len(level) for level in self._by_dim)

    def euler_characteristic(self) -> int:
        return sum((-1) ** i * n for i, n in enumerate(self.face_counts()))

    def full_subcomplex(self, vertices: Iterable[int]) -> SimplicialComplex:
        keep = set(vertices)
        cut = [tuple(v for v in f if v in keep) for f in self.facets]
        return SimplicialComplex(tuple(c for c in cut if c))

    def is_subcomplex_of(self, other: SimplicialComplex) -> bool:
        return all(f in other for f in self.facets)

    def relabel(self, mapping: Mapping[int, int]) -> SimplicialComplex:
        return SimplicialComplex(tuple(tuple(mapping[v] for v in f) for f in self.facets))

    def next_id(self) -> int:
        return self.vertices[-1] + 1 if self.vertices else 0


EMPTY = SimplicialComplex()


@dataclass(frozen=True, eq=False)
class BettiTable:
    """Graded dimensions over Q; ``entries[k]`` sits in degree ``offset + k``.

    Equality and hashing ignore zero padding, so ``(1, 0)`` equals ``(1, 0, 0)``
    and the empty table equals any all-zero table.  Plain tuples compare as
    tables with offset 0.
    """

    entries: tuple = ()
    offset: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "entries", tuple(int(e) for e in self.entries))
        if any(e < 0 for e in self.entries):
            raise ValueError(f"negative Betti number in {self.entries}")

    def support(self) -> tuple[int, tuple[int, ...]]:
        e = list(self.entries)
        lo = 0
        while lo < len(e) and e[lo] == 0:
            lo += 1
        hi = len(e)
        while hi > lo and e[hi - 1] == 0:
            hi -= 1
        if lo == hi:
            return 0, ()
        return self.offset + lo, tuple(e[lo:hi])

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (tuple, list)):
            other = BettiTable(tuple(other))
        if not isinstance(other, BettiTable):
            return NotImplemented
        return self.support() == other.support()

    def __hash__(self) -> int:
        return hash(self.support())

    def __getitem__(self, degree: int) -> int:
        k = degree - self.offset
        return self.entries[k] if 0 <= k < len(self.entries) else 0

    def __iter__(self):
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def top(self) -> int:
        """One past the highest degree stored."""
        return self.offset + len(self.entries)

    def euler_characteristic(self) -> int:
        return sum((-1) ** (self.offset + k) * e for k, e in enumerate(self.entries))

    def total(self) -> int:
        return sum(self.entries)

    def shift(self, k: int) -> BettiTable:
        """Table ``T`` with ``T[d + k] = self[d]``."""
        return BettiTable(self.entries, self.offset + k)

    def convolve(self, other: BettiTable | Sequence[int]) -> BettiTable:
        """Graded tensor product (Künneth over a field)."""
        if not isinstance(other, BettiTable):
            other = BettiTable(tuple(other))
        if not self.entries or not other.entries:
            return BettiTable(())
        out = [0] * (len(self.entries) + len(other.entries) - 1)
        for i, a in enumerate(self.entries):
            if a:
                for j, b in enumerate(other.entries):
                    out[i + j] += a * b
        return BettiTable(tuple(out), self.offset + other.offset)

    def __add__(self, other: BettiTable) -> BettiTable:
        lo = min(self.offset, other.offset)
        hi = max(self.top, other.top)
        return BettiTable(tuple(self[d] + other[d] for d in range(lo, hi)), lo)

    def window(self, lo: int, hi: int) -> BettiTable:
        """Entries for degrees ``lo <= d < hi``."""
        return BettiTable(tuple(self[d] for d in range(lo, hi)), lo)

    def __str__(self) -> str:
        body = "(" + ",".join(str(e) for e in self.entries) + ")"
        return body if self.offset == 0 else f"{body}@{self.offset}"

    __repr__ = __str__


@dataclass(frozen=True)
class ChainComplexQ:
    """Chain complex with sparse integer boundary matrices.

    ``boundaries[i]`` maps degree ``i`` to degree ``i - 1``; it is a list of
    columns, one sparse dict (row index -> entry) per degree-``i`` generator.
    """

    sizes: tuple[int, ...]
    boundaries: tuple[tuple[dict, ...], ...] = field(repr=False)

    def boundary_rank(self, i: int) -> int:
        if not 0 < i < len(self.sizes):
            return 0
        return rank(self.boundaries[i])

    def betti(self) -> BettiTable:
        ranks = [self.boundary_rank(i) for i in range(len(self.sizes) + 1)]
        return BettiTable(tuple(
            n - ranks[i] - ranks[i + 1] for i, n in enumerate(self.sizes)
        ))

    def squares_to_zero(self) -> bool:
        for i in range(2, len(self.sizes)):
            upper, lower = self.boundaries[i], self.boundaries[i - 1]
            for col in upper:
                acc: dict[int, int] = {}
                for r, a in col.items():
                    for rr, b in lower[r].items():
                        acc[rr] = acc.get(rr, 0) + a * b
                if any(acc.values()):
                    return False
        return True

    def shapes_chain(self) -> bool:
        for i in range(1, len(self.sizes)):
            if len(self.boundaries[i]) != self.sizes[i]:
                return False
            if any(r >= self.sizes[i - 1] or r < 0 for col in self.boundaries[i] for r in col):
                return False
        return True


def chain_complex(complex: SimplicialComplex) -> ChainComplexQ:
    levels = [complex.simplices(d) for d in range(complex.dimension + 1)]
    index = [{s: k for k, s in enumerate(level)} for level in levels]
    mats: list[tuple[dict, ...]] = [()]
    for d in range(1, len(levels)):
        cols = []
        for s in levels[d]:
            cols.append({index[d - 1][f]: (-1) ** k for k, f in enumerate(faces(s))})
        mats.append(tuple(cols))
    return ChainComplexQ(tuple(len(level) for level in levels), tuple(mats))


def homology_betti(complex: SimplicialComplex) -> BettiTable:
    """Betti numbers of simplicial homology over Q in degrees ``0..dim``."""
    if complex.is_empty:
        return BettiTable(())
    return chain_complex(complex).betti()


def cone(complex: SimplicialComplex) -> SimplicialComplex:
    """Join with a fresh apex (id ``max + 1``); the cone on the empty complex is a point."""
    apex = complex.next_id()
    if complex.is_empty:
        return SimplicialComplex(((apex,),))
    return SimplicialComplex(tuple(f + (apex,) for f in complex.facets))


def suspension(complex: SimplicialComplex) -> SimplicialComplex:
    """Join with two fresh apexes ``max + 1`` and ``max + 2``."""
    a = complex.next_id()
    b = a + 1
    if complex.is_empty:
        return SimplicialComplex(((a,), (b,)))
    return SimplicialComplex(
        tuple(f + (a,) for f in complex.facets) + tuple(f + (b,) for f in complex.facets)
    )


def join(a: SimplicialComplex, b: SimplicialComplex) -> SimplicialComplex:
    """Simplicial join; ``b`` is shifted to ids past ``a`` when the vertex sets meet."""
    if set(a.vertices) & set(b.vertices):
        shift = a.next_id() - b.vertices[0]
        b = b.relabel({v: v + shift for v in b.vertices})
    if a.is_empty:
        return b
    if b.is_empty:
        return a
    return SimplicialComplex(tuple(f + g for f in a.facets for g in b.facets))


def staircase(p: int, q: int) -> list[list[tuple[int, int]]]:
    """Top cells of the ordered triangulation of Δ^p × Δ^q as index paths."""
    cells = []
    for right in combinations(range(p + q), p):
        i = j = 0
        path = [(0, 0)]
        rs = set(right)
        for step in range(p + q):
            if step in rs:
                i += 1
            else:
                j += 1
            path.append((i, j))
        cells.append(path)
    return cells


def product_with_pairs(a: SimplicialComplex, b: SimplicialComplex) -> tuple[SimplicialComplex, dict[int, tuple[int, int]]]:
    """Staircase product plus the map from new vertex ids to vertex pairs.

    New ids are assigned sequentially from 0 in lexicographic order of
    ``(vertex of a, vertex of b)``.
    """
    pairs = [(u, v) for u in a.vertices for v in b.vertices]
    ids = {p: k for k, p in enumerate(pairs)}
    facets = []
    for f in a.facets:
        for g in b.facets:
            for path in staircase(len(f) - 1, len(g) - 1):
                facets.append(tuple(ids[(f[i], g[j])] for i, j in path))
    return SimplicialComplex(tuple(facets)), {k: p for p, k in ids.items()}


def product(a: SimplicialComplex, b: SimplicialComplex) -> SimplicialComplex:
    """Staircase triangulation of ``|a| × |b|`` using the vertex-id order of each factor."""
    return product_with_pairs(a, b)[0]


def link_of_simplex(complex: SimplicialComplex, simplex: Sequence[int]) -> SimplicialComplex:
    """Abstract link ``{τ : τ ∩ σ = ∅, τ ∪ σ ∈ K}``."""
    sigma = tuple(sorted(simplex))
    if sigma and sigma not in complex:
        raise StrataError("MISSING_SIMPLEX", f"{list(sigma)} is not a simplex of the complex")
    s = set(sigma)
    rest = [tuple(v for v in f if v not in s) for f in complex.facets if s <= set(f)]
    return SimplicialComplex(tuple(r for r in rest if r))


def barycentric_subdivision(complex: SimplicialComplex) -> tuple[SimplicialComplex, dict[int, Simplex]]:
    """First barycentric subdivision.

    Vertices of ``complex`` keep their ids; barycentres of higher simplices get
    ids ``max + 1, max + 2, ...`` in (dimension, lexicographic) order.  Returns
    the subdivision and the map from new vertex id to the simplex it is the
    barycentre of.
    """
    ids: dict[Simplex, int] = {(v,): v for v in complex.vertices}
    nxt = complex.next_id()
    for d in range(1, complex.dimension + 1):
        for s in complex.simplices(d):
            ids[s] = nxt
            nxt += 1
    facets = []
    for f in complex.facets:
        for order in permutations(f):
            chain = [tuple(sorted(order[: k + 1])) for k in range(len(order))]
            facets.append(tuple(ids[c] for c in chain))
    return SimplicialComplex(tuple(facets)), {v: s for s, v in ids.items()}

