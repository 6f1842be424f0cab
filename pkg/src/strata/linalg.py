"""Exact sparse linear algebra over the rationals.

Vectors are ``dict`` objects mapping an index to a nonzero coefficient
(``int`` or ``Fraction``).  Every vector is scaled to a primitive integer
vector before elimination, which leaves ranks and spans unchanged and lets
the elimination run fraction-free on Python integers.
"""
from __future__ import annotations

from collections import Counter
from fractions import Fraction
from math import gcd, lcm
from typing import Callable, Hashable, Iterable, Mapping, Sequence

Vector = dict


def primitive(vec: Mapping[Hashable, int | Fraction]) -> dict:
    """Return the primitive integer multiple of ``vec`` (content 1, zeros dropped)."""
    den = 1
    for v in vec.values():
        if isinstance(v, Fraction):
            den = lcm(den, v.denominator)
    out = {k: int(v * den) for k, v in vec.items() if v}
    g = 0
    for v in out.values():
        g = gcd(g, v)
        if g == 1:
            return out
    if g > 1:
        out = {k: v // g for k, v in out.items()}
    return out


def _combine(a: dict, ca: int, b: dict, cb: int) -> dict:
    """``ca*a - cb*b`` with zero entries removed."""
    out = {k: ca * v for k, v in a.items()} if ca != 1 else dict(a)
    for k, v in b.items():
        w = out.get(k, 0) - cb * v
        if w:
            out[k] = w
        else:
            out.pop(k, None)
    return out


def _content(*vecs: dict) -> int:
    g = 0
    for vec in vecs:
        for v in vec.values():
            g = gcd(g, v)
            if g == 1:
                return 1
    return g


class Echelon:
    """Incremental fraction-free row echelon form.

    Each stored row is keyed by its leading column under ``key``; a new row is
    reduced against stored rows until its leading column is unclaimed (the
    row is independent) or it vanishes.  When ``track`` is set, every row
    carries the combination of inserted rows that produced it, so rows that
    vanish yield kernel vectors.
    """

    def __init__(self, key: Callable[[Hashable], object] | None = None, track: bool = False) -> None:
        self._key = key
        self._track = track
        self.pivots: dict[Hashable, tuple[dict, dict | None]] = {}

    def _lead(self, row: dict) -> Hashable:
        return min(row, key=self._key) if self._key is not None else min(row)

    def reduce(self, row: dict, combo: dict | None = None) -> tuple[dict, dict | None]:
        while row:
            c = self._lead(row)
            hit = self.pivots.get(c)
            if hit is None:
                break
            prow, pcombo = hit
            a, b = row[c], prow[c]
            g = gcd(a, b)
            a, b = a // g, b // g
            row = _combine(row, b, prow, a)
            if combo is not None:
                combo = _combine(combo, b, pcombo, a)
                g = _content(row, combo)
            else:
                g = _content(row)
            if g > 1:
                row = {k: v // g for k, v in row.items()}
                if combo is not None:
                    combo = {k: v // g for k, v in combo.items()}
        return row, combo

    def insert(self, row: Mapping, label: Hashable | None = None) -> dict | None:
        """Insert a row.  Returns ``None`` if it was independent; otherwise the
        kernel combination (tracked mode) or an empty dict."""
        if self._track:
            # clear denominators only; the content is divided out jointly with
            # the combination so that it keeps describing the original row
            den = 1
            for v in row.values():
                if isinstance(v, Fraction):
                    den = lcm(den, v.denominator)
            row = {k: int(v * den) for k, v in row.items() if v}
            combo = {label: den}
            g = _content(row, combo)
            if g > 1:
                row = {k: v // g for k, v in row.items()}
                combo = {label: den // g}
        else:
            row = primitive(row)
            combo = None
        row, combo = self.reduce(row, combo)
        if row:
            self.pivots[self._lead(row)] = (row, combo)
            return None
        return combo if combo is not None else {}

    def contains(self, row: Mapping) -> bool:
        """True when ``row`` lies in the span of the inserted rows."""
        reduced, _ = self.reduce(primitive(row))
        return not reduced

    @property
    def rank(self) -> int:
        return len(self.pivots)


def count_key(rows: Sequence[Mapping]) -> Callable[[Hashable], tuple]:
    """Pivot order preferring sparse columns (fewest nonzeros first)."""
    counts = Counter(c for row in rows for c in row)
    return lambda c: (counts[c], c)


def rank(rows: Iterable[Mapping]) -> int:
    """Rank over Q of the matrix whose rows are the given sparse vectors."""
    rows = [r for r in rows if r]
    if not rows:
        return 0
    ech = Echelon(key=count_key(rows))
    for r in rows:
        ech.insert(r)
    return ech.rank


def kernel_basis(columns: Sequence[Mapping]) -> list[dict]:
    """Basis of ``{x : sum_j x_j * columns[j] = 0}`` as sparse integer vectors.

    Each basis vector has a distinct largest index, so the basis is
    triangular and hence independent.
    """
    ech = Echelon(key=count_key(columns), track=True)
    out = []
    for j, col in enumerate(columns):
        combo = ech.insert(col, label=j)
        if combo is not None:
            out.append(primitive(combo))
    return out


def in_span(vectors: Iterable[Mapping], target: Mapping) -> bool:
    ech = Echelon()
    for v in vectors:
        if v:
            ech.insert(v)
    return ech.contains(target)
