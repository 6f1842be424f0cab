"""Intersection (co)homology from allowable simplicial chains.

Degree-``i`` intersection cohomology for a perversity ``q`` is computed as
the dual of the allowable chain complex for the complementary chain
perversity ``p = t - q`` (``t`` the top perversity).  Chains follow the
stratified-coefficient convention: simplices contained in the singular part
carry zero coefficient and are dropped from boundaries.  With this choice

* the cone formula truncates at ``i <= q(apex)``,
* ``q > t`` gives the cohomology of the regular part,
* ``q < 0`` gives the cohomology of the pair ``(X, Σ)``.

Allowability of an ``i``-simplex ``σ`` for ``p``: for every singular stratum
``S`` meeting ``σ``, the largest face of ``σ`` lying in ``S`` has dimension
at most ``i - codim(S) + p(S)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache

from .errors import StrataError
from .linalg import kernel_basis, rank
from .simplicial import BettiTable, Simplex, all_faces, faces, homology_betti
from .stratification import (
    Perversity,
    StratifiedSpace,
    check_total,
    perversity_combine,
    require_valid,
    top_perversity,
)


@dataclass(frozen=True, eq=False)
class AllowableComplex:
    """Allowable chains ``ξ`` with ``∂ξ`` allowable, for one chain perversity.

    ``simplices[i]`` indexes the degree-``i`` simplices not contained in the
    singular part; ``bases[i]`` spans the allowable chains in those
    coordinates.  Bases for different perversities on the same space share
    the coordinates, so spans can be compared directly.
    """

    space: StratifiedSpace
    chain_perversity: Perversity
    simplices: tuple
    allowable: tuple
    bases: tuple

    @cached_property
    def _index(self) -> tuple[dict, ...]:
        return tuple({s: k for k, s in enumerate(level)} for level in self.simplices)

    def boundary(self, i: int, vec: dict) -> dict:
        """Boundary of a degree-``i`` chain, singular faces dropped."""
        if i == 0:
            return {}
        idx = self._index[i - 1]
        out: dict[int, int] = {}
        level = self.simplices[i]
        for k, c in vec.items():
            for sign_k, f in enumerate(faces(level[k])):
                j = idx.get(f)
                if j is not None:
                    w = out.get(j, 0) + (c if sign_k % 2 == 0 else -c)
                    if w:
                        out[j] = w
                    else:
                        del out[j]
        return out

    def dim(self, i: int) -> int:
        return len(self.bases[i]) if 0 <= i < len(self.bases) else 0

    def boundary_images(self, i: int) -> list[dict]:
        if not 0 < i < len(self.bases):
            return []
        return [self.boundary(i, b) for b in self.bases[i]]

    @cached_property
    def boundary_ranks(self) -> tuple[int, ...]:
        return tuple(rank(self.boundary_images(i)) for i in range(len(self.bases)))

    def betti(self) -> BettiTable:
        r = self.boundary_ranks + (0,)
        return BettiTable(tuple(self.dim(i) - r[i] - r[i + 1] for i in range(len(self.bases))))

    def spans_within(self, other: AllowableComplex) -> bool:
        """Degreewise ``span(self) ⊆ span(other)``."""
        for i in range(len(self.bases)):
            if not self.bases[i]:
                continue
            if rank(list(other.bases[i]) + list(self.bases[i])) != rank(other.bases[i]):
                return False
        return True


def _singular_faces(space: StratifiedSpace, s: Simplex) -> dict[str, int]:
    """Largest dimension of a face of ``s`` inside each singular stratum."""
    sv = space.singular_vertices
    rho = tuple(v for v in s if v in sv)
    out: dict[str, int] = {}
    for f in all_faces(rho):
        st = space.stratum_of(f)
        d = len(f) - 1
        if out.get(st.id, -1) < d:
            out[st.id] = d
    return out


def is_allowable(space: StratifiedSpace, p: Perversity, s: Simplex) -> bool:
    i = len(s) - 1
    for sid, d in _singular_faces(space, s).items():
        if d > i - space.stratum(sid).codim + p[sid]:
            return False
    return True


@lru_cache(maxsize=256)
def allowable_complex(space: StratifiedSpace, chain_perversity: Perversity) -> AllowableComplex:
    n = space.dimension
    sing = space.singular_simplices
    levels = tuple(tuple(s for s in space.complex.simplices(i) if s not in sing) for i in range(n + 1))
    codim = {st.id: st.codim for st in space.singular_strata}
    p = chain_perversity.as_dict()
    allowed: list[tuple[int, ...]] = []
    for i, level in enumerate(levels):
        ok = []
        for k, s in enumerate(level):
            if all(d <= i - codim[sid] + p[sid] for sid, d in _singular_faces(space, s).items()):
                ok.append(k)
        allowed.append(tuple(ok))
    bases = []
    for i, level in enumerate(levels):
        if i == 0:
            bases.append(tuple({k: 1} for k in allowed[0]))
            continue
        good_below = set(allowed[i - 1])
        prev_index = {s: k for k, s in enumerate(levels[i - 1])}
        free, tied, cols = [], [], []
        for k in allowed[i]:
            col = {}
            for sign_k, f in enumerate(faces(level[k])):
                j = prev_index.get(f)
                if j is not None and j not in good_below:
                    col[j] = 1 if sign_k % 2 == 0 else -1
            if col:
                tied.append(k)
                cols.append(col)
            else:
                free.append(k)
        basis = [{k: 1} for k in free]
        for vec in kernel_basis(cols):
            basis.append({tied[j]: c for j, c in sorted(vec.items())})
        bases.append(tuple(basis))
    return AllowableComplex(space, chain_perversity, levels, tuple(allowed), tuple(bases))


def chain_perversity(space: StratifiedSpace, q: Perversity) -> Perversity:
    """Complementary perversity ``t - q`` used on the chain side."""
    return perversity_combine(top_perversity(space), q, "sub")


def _checked(space: StratifiedSpace, q: Perversity) -> None:
    require_valid(space)
    check_total(space, q)


def ih_complex(space: StratifiedSpace, q: Perversity) -> AllowableComplex:
    _checked(space, q)
    return allowable_complex(space, chain_perversity(space, q))


def ih_betti(space: StratifiedSpace, q: Perversity) -> BettiTable:
    """Graded dimensions of ``q``-intersection cohomology, degrees ``0..dim``."""
    return ih_complex(space, q).betti()


def regular_part_betti(space: StratifiedSpace) -> BettiTable:
    """Betti numbers of ``X - Σ``.

    ``Σ`` is a full subcomplex, so ``X - Σ`` deformation retracts onto the
    full subcomplex spanned by the regular vertices.
    """
    require_valid(space)
    n = space.dimension
    if not space.singular_strata:
        return homology_betti(space.complex).window(0, n + 1)
    keep = [v for v in space.complex.vertices if v not in space.singular_vertices]
    return homology_betti(space.complex.full_subcomplex(keep)).window(0, n + 1)


def relative_betti(space: StratifiedSpace) -> BettiTable:
    """Betti numbers of the pair ``(X, Σ)``."""
    require_valid(space)
    n = space.dimension
    sing = space.singular_simplices
    levels = [[s for s in space.complex.simplices(i) if s not in sing] for i in range(n + 1)]
    index = [{s: k for k, s in enumerate(level)} for level in levels]
    ranks = [0] * (n + 2)
    for i in range(1, n + 1):
        cols = []
        for s in levels[i]:
            col = {}
            for k, f in enumerate(faces(s)):
                j = index[i - 1].get(f)
                if j is not None:
                    col[j] = (-1) ** k
            cols.append(col)
        ranks[i] = rank(cols)
    return BettiTable(tuple(len(levels[i]) - ranks[i] - ranks[i + 1] for i in range(n + 1)))


def step_ih_betti(space: StratifiedSpace, lower: Perversity, upper: Perversity) -> BettiTable:
    """Cohomology of the quotient of the ``upper`` complex by the ``lower`` one.

    On the chain side the inclusion reverses: ``t - upper <= t - lower``.  The
    step group in degree ``j`` is the degree ``j + 1`` homology of the
    quotient of chain complexes ``I^{t-lower} / I^{t-upper}``, which makes the
    long exact sequence ``H_lower -> H_upper -> H_step -> H_lower[+1]``
    hold degreewise.
    """
    _checked(space, lower)
    _checked(space, upper)
    if not lower.le(upper):
        raise StrataError("NOT_NESTED", f"{lower} is not <= {upper}")
    big = allowable_complex(space, chain_perversity(space, lower))
    small = allowable_complex(space, chain_perversity(space, upper))
    n = space.dimension

    def cycles_rel(i: int) -> int:
        # dim {u in big_i : ∂u ∈ small_{i-1}}
        imgs = big.boundary_images(i)
        if i == 0 or not imgs:
            return big.dim(i)
        below = list(small.bases[i - 1])
        return big.dim(i) - (rank(imgs + below) - rank(below))

    def bounds_rel(i: int) -> int:
        # dim (∂ big_{i+1} + small_i)
        return rank(big.boundary_images(i + 1) + list(small.bases[i])) if i + 1 <= n else rank(small.bases[i])

    quotient = [cycles_rel(i) - bounds_rel(i) for i in range(n + 1)]
    if quotient[0] != 0:
        raise AssertionError("degree-0 quotient homology must vanish")
    return BettiTable(tuple(quotient[1:]) + (0,))
