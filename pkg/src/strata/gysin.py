"""Circle actions modelled as catalog data, and their Gysin and residue tables.

An :class:`ActionModel` pairs an independently triangulated space ``X`` with
an orbit space ``B`` and a stratum correspondence.  Orbit maps are never
simulated; every sequence-level statement is checked through graded rank
feasibility of the long exact sequences involved.

Perversities passed to the functions here live on the singular strata of
``B``; the perversity used on ``X`` is pulled back along ``stratum_map``.

Degree conventions for the step table follow :func:`strata.ih.step_ih_betti`
(``step^j`` sits after the upper table in degree ``j``), and the layouts of
the two sequences are documented on :func:`gysin_sequence` and
:func:`lower_sequence`.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Mapping, Sequence

from .errors import StrataError
from .ih import ih_betti, step_ih_betti
from .simplicial import BettiTable, SimplicialComplex, homology_betti
from .stratification import Perversity, StratifiedSpace, require_valid, top_perversity

MOBILE, FIXED = "mobile", "fixed"
ZERO, NONZERO, UNKNOWN = "zero", "nonzero", "unknown"
NONPERVERSE, PERVERSE = "fixed-nonperverse", "perverse"
SHAPES = ("free", "mobile", "cone", "suspension", "product")

CONVENTIONS = {
    "ih": "ih^i_q = dual of allowable chains for chain perversity t - q",
    "step": "step^j = H_{j+1}(I^{t-lower} / I^{t-upper}); lower -> upper -> step -> lower[+1]",
    "gysin": "H^0_q(B), H^0_q(X), then for i >= -1: HG^i, H^{i+2}_q(B), H^{i+2}_q(X)",
    "lower": "for i >= 0: H^i_{q-e}(B), HG^i, Resder^i",
}


@dataclass(frozen=True, eq=False)
class ActionModel:
    """A modelled circle action.

    ``stratum_map`` sends every stratum id of ``X`` (regular ones included)
    to a stratum id of ``B``.  ``isotropy`` and ``euler_flags`` are keyed by
    singular stratum ids of ``X``; ``links`` gives the link action at each
    fixed stratum.  ``shape`` selects the closed form used for the Gysin
    term; ``base`` and ``factor`` describe product entries ``factor × base``.
    """

    name: str
    X: StratifiedSpace
    B: StratifiedSpace
    stratum_map: Mapping[str, str]
    isotropy: Mapping[str, str] = field(default_factory=dict)
    links: Mapping[str, ActionModel] = field(default_factory=dict)
    euler_flags: Mapping[str, str] = field(default_factory=dict)
    shape: str | None = None
    base: ActionModel | None = None
    factor: SimplicialComplex | None = None
    metadata: Mapping[str, object] = field(default_factory=dict)

    def __post_init__(self) -> None:
        _check_action(self)

    @property
    def length(self) -> int:
        return self.X.length

    def fixed_ids(self) -> tuple[str, ...]:
        return tuple(sorted(k for k, v in self.isotropy.items() if v == FIXED))

    def x_perversity(self, q: Perversity) -> Perversity:
        """Pull a perversity on ``B`` back to ``X``."""
        qd = q.as_dict()
        try:
            return Perversity(tuple((st.id, qd[self.stratum_map[st.id]]) for st in self.X.singular_strata))
        except KeyError as exc:
            raise StrataError("SPACE_MISMATCH", f"perversity has no value for {exc}") from None

    def b_id(self, sid: str) -> str:
        """Orbit-space stratum for an id of either space."""
        if sid in self.stratum_map:
            return self.stratum_map[sid]
        if sid in {st.id for st in self.B.strata}:
            return sid
        raise StrataError("MISSING_STRATUM", f"{self.name}: no stratum {sid!r}")

    def x_ids_over(self, b: str) -> tuple[str, ...]:
        return tuple(sorted(x for x, y in self.stratum_map.items() if y == b))


def _bad(action: ActionModel, msg: str) -> StrataError:
    return StrataError("INVALID_ACTION", f"{action.name}: {msg}")


def _check_action(a: ActionModel) -> None:
    require_valid(a.X)
    require_valid(a.B)
    xs = {st.id for st in a.X.strata}
    bs = {st.id for st in a.B.strata}
    xsing = set(a.X.singular_ids)
    if set(a.stratum_map) != xs:
        raise _bad(a, f"stratum_map covers {sorted(a.stratum_map)} but X has {sorted(xs)}")
    if set(a.stratum_map.values()) != bs:
        raise _bad(a, "stratum_map is not onto the strata of B")
    for x, b in a.stratum_map.items():
        if a.X.stratum(x).is_regular != a.B.stratum(b).is_regular:
            raise _bad(a, f"{x} and {b} disagree on regularity")
    for x in xs:
        for y in xs:
            if a.X.below(x, y) and not a.B.below(a.stratum_map[x], a.stratum_map[y]):
                raise _bad(a, f"stratum_map does not preserve {x} < {y}")
    if set(a.isotropy) != xsing:
        raise _bad(a, f"isotropy given for {sorted(a.isotropy)} but singular strata are {sorted(xsing)}")
    for x, iso in a.isotropy.items():
        if iso not in (MOBILE, FIXED):
            raise _bad(a, f"isotropy of {x} must be mobile or fixed, got {iso!r}")
    fixed = set(a.fixed_ids())
    if set(a.links) - fixed:
        raise _bad(a, f"links given for non-fixed strata {sorted(set(a.links) - fixed)}")
    if set(a.euler_flags) - fixed:
        raise _bad(a, f"euler flags given for non-fixed strata {sorted(set(a.euler_flags) - fixed)}")
    for x, flag in a.euler_flags.items():
        if flag not in (ZERO, NONZERO, UNKNOWN):
            raise _bad(a, f"euler flag of {x} must be zero, nonzero or unknown, got {flag!r}")
    for x, link in a.links.items():
        if link.length >= a.X.length:
            raise _bad(a, f"link at {x} is not shallower than X")
    if a.shape is not None and a.shape not in SHAPES:
        raise _bad(a, f"unknown shape {a.shape!r}")
    if a.shape == "product" and (a.base is None or a.factor is None):
        raise _bad(a, "product shape needs base and factor")


# -- classification -------------------------------------------------------------


@dataclass(frozen=True)
class StrataClassification:
    """Labels, characteristic perversity ``chi`` and Euler perversity ``e`` on ``B``."""

    labels: tuple  # sorted (b_id, label)
    chi: Perversity
    e: Perversity
    resolved_flags: tuple = ()  # (x_id, flag) pairs decided by the product test

    def label(self, b: str) -> str:
        return dict(self.labels)[b]

    @property
    def perverse(self) -> tuple[str, ...]:
        return tuple(b for b, lab in self.labels if lab == PERVERSE)

    @property
    def fixed(self) -> tuple[str, ...]:
        return tuple(b for b, lab in self.labels if lab != MOBILE)

    def to_dict(self) -> dict:
        return {
            "labels": dict(self.labels),
            "chi": self.chi.as_dict(),
            "e": self.e.as_dict(),
            "resolved_flags": dict(self.resolved_flags),
        }


@lru_cache(maxsize=None)
def classify(action: ActionModel) -> StrataClassification:
    labels: dict[str, str] = {}
    resolved: dict[str, str] = {}
    for st in action.B.singular_strata:
        xs = [x for x in action.x_ids_over(st.id) if x in action.isotropy]
        if not xs:
            raise _bad(action, f"singular stratum {st.id} of B is not the image of a singular stratum")
        found = set()
        for x in xs:
            if action.isotropy[x] == MOBILE:
                found.add(MOBILE)
                continue
            flag = action.euler_flags.get(x, UNKNOWN)
            if flag == UNKNOWN:
                flag = _resolve_flag(action, x)
                resolved[x] = flag
            found.add(PERVERSE if flag == NONZERO else NONPERVERSE)
        if len(found) != 1:
            raise _bad(action, f"strata over {st.id} disagree: {sorted(found)}")
        labels[st.id] = found.pop()
    chi = Perversity(tuple((b, 0 if lab == MOBILE else 1) for b, lab in labels.items()))
    e = Perversity(tuple((b, {MOBILE: 0, NONPERVERSE: 1, PERVERSE: 2}[lab]) for b, lab in labels.items()))
    return StrataClassification(tuple(sorted(labels.items())), chi, e, tuple(sorted(resolved.items())))


def _resolve_flag(action: ActionModel, x: str) -> str:
    link = action.links.get(x)
    if link is None:
        raise StrataError("UNRESOLVED_EULER_FLAG", f"{action.name}: no link action at {x}")
    try:
        verdict = euler_product_test(link, _sweep(link))
    except StrataError as exc:
        if exc.code == "PERVERSE_PRESENT":
            raise StrataError("UNRESOLVED_EULER_FLAG", f"{action.name}: link at {x} has perverse strata") from None
        raise
    if verdict != "nonzero_certified":
        raise StrataError(
            "UNRESOLVED_EULER_FLAG", f"{action.name}: product test on the link at {x} is only zero_consistent"
        )
    return NONZERO


def _sweep(action: ActionModel) -> list[Perversity]:
    """Constant perversities on ``B`` from -1 to one past the top of ``X``."""
    ids = action.B.singular_ids
    if not ids:
        return [Perversity()]
    top = max(top_perversity(action.X).as_dict().values(), default=0)
    return [Perversity(tuple((b, k) for b in ids)) for k in range(-1, top + 2)]


def euler_product_test(action: ActionModel, perversities: Sequence[Perversity] | None = None) -> str:
    """Compare ``ih(X)`` with the table a split Gysin sequence would give.

    If the Euler class vanished the sequence would split, forcing
    ``ih^j(X, q) = ih^j(B, q) + ih^{j-1}(B, q - e)``.  A mismatch for any
    supplied ``q`` certifies a nonzero Euler class; agreement everywhere
    is reported as ``zero_consistent`` and proves nothing.
    """
    cl = classify(action)
    if cl.perverse:
        raise StrataError("PERVERSE_PRESENT", f"{action.name} has perverse strata {list(cl.perverse)}")
    for q in perversities if perversities is not None else _sweep(action):
        x = ih_betti(action.X, action.x_perversity(q))
        expected = ih_betti(action.B, q) + ih_betti(action.B, q - cl.e).shift(1)
        if x != expected:
            return "nonzero_certified"
    return "zero_consistent"


# -- long exact sequences -------------------------------------------------------


@dataclass(frozen=True)
class LESReport:
    """Rank witnesses for a prescribed long exact sequence of dimensions.

    ``ranks[j]`` is the rank of the arrow leaving position ``j`` (0-based);
    positions are reported 1-based in ``first_violation``.
    """

    pattern: str
    labels: tuple[str, ...]
    dims: tuple[int, ...]
    ranks: tuple[int, ...]
    feasible: bool
    first_violation: int | None = None

    @property
    def verdict(self) -> str:
        return "feasible" if self.feasible else "infeasible"

    def kernel_out(self, label: str) -> int:
        """Dimension of the kernel of the arrow leaving ``label``."""
        if label not in self.labels:
            return 0  # beyond the support of every table
        j = self.labels.index(label)
        if not self.feasible:
            raise StrataError("INFEASIBLE", f"kernel requested from an infeasible {self.pattern} sequence")
        return self.dims[j] - self.ranks[j]

    def alternating_sum(self) -> int:
        return sum((-1) ** j * d for j, d in enumerate(self.dims))

    def to_dict(self) -> dict:
        out = {
            "pattern": self.pattern,
            "verdict": self.verdict,
            "labels": list(self.labels),
            "dims": list(self.dims),
            "ranks": list(self.ranks),
        }
        if not self.feasible:
            j = self.first_violation - 1
            out["first_violation"] = {"position": self.first_violation, "label": self.labels[j], "rank": self.ranks[j]}
        return out


def _tables_top(*tables: BettiTable) -> int:
    """One past the highest nonzero degree."""
    tops = [lo + len(e) for lo, e in (t.support() for t in tables) if e]
    return max(tops, default=0)


def gysin_sequence(ih_x: BettiTable, hg: BettiTable, ih_b: BettiTable) -> tuple[list[str], list[int]]:
    """``0 → H^0_q(B) → H^0_q(X) → HG^{-1} → H^1_q(B) → H^1_q(X) → HG^0 → H^2_q(B) → …``"""
    labels = ["H^0_q(B)", "H^0_q(X)"]
    dims = [ih_b[0], ih_x[0]]
    for i in range(-1, _tables_top(ih_x, hg, ih_b)):
        labels += [f"HG^{i}", f"H^{i + 2}_q(B)", f"H^{i + 2}_q(X)"]
        dims += [hg[i], ih_b[i + 2], ih_x[i + 2]]
    return labels, dims


def lower_sequence(low: BettiTable, hg: BettiTable, res: BettiTable) -> tuple[list[str], list[int]]:
    """``0 → H^0_{q-e}(B) → HG^0 → Resder^0 → H^1_{q-e}(B) → …``"""
    labels: list[str] = []
    dims: list[int] = []
    for i in range(_tables_top(low, hg, res) + 1):
        labels += [f"H^{i}_(q-e)(B)", f"HG^{i}", f"Resder^{i}"]
        dims += [low[i], hg[i], res[i]]
    return labels, dims


PATTERNS: dict[str, Callable] = {"gysin": gysin_sequence, "lower_approximation": lower_sequence}


def les_feasible(dims: Sequence, pattern: str | None = None, labels: Sequence[str] | None = None) -> LESReport:
    """Run ``r_j = d_j - r_{j-1}`` from ``r = 0``.

    With ``pattern`` set, ``dims`` is the triple of tables for that pattern
    (see :data:`PATTERNS`); otherwise it is the raw list of consecutive
    dimensions.  A trailing zero is appended so that a nonzero final rank
    shows up as a negative one.
    """
    if pattern is not None:
        if pattern not in PATTERNS:
            raise ValueError(f"unknown pattern {pattern!r}")
        labels, flat = PATTERNS[pattern](*[t if isinstance(t, BettiTable) else BettiTable(tuple(t)) for t in dims])
        name = pattern
    else:
        flat = [int(d) for d in dims]
        labels = list(labels) if labels is not None else [f"d{j + 1}" for j in range(len(flat))]
        name = "raw"
    flat = list(flat)
    if not flat or flat[-1] != 0:
        flat.append(0)
        labels = list(labels) + ["0"]
    ranks: list[int] = []
    prev = 0
    first = None
    for j, d in enumerate(flat):
        r = d - prev
        ranks.append(r)
        if r < 0 and first is None:
            first = j + 1
            break
        prev = r
    if first is None and ranks[-1] != 0:
        first = len(flat)
    ranks += [0] * (len(flat) - len(ranks))
    return LESReport(name, tuple(labels), tuple(flat), tuple(ranks), first is None, first)


# -- closed forms ---------------------------------------------------------------


def _restrict_to(q: Perversity, space: StratifiedSpace) -> Perversity:
    return q.restrict(space.singular_ids)


def _cone_table(action: ActionModel, x: str, q: Perversity) -> BettiTable:
    """Gysin term of the cone neighbourhood of the fixed stratum ``x``."""
    link = action.links.get(x)
    if link is None:
        raise StrataError("UNRESOLVED_LINK", f"{action.name}: no link action at {x}")
    qa = q[action.b_id(x)]
    ql = _restrict_to(q, link.B)
    hg_l = gysin_term_dims(link, ql)
    if qa <= 0:
        return BettiTable(())
    out = [hg_l[i] for i in range(qa - 1)]
    report = gysin_report(link, ql)
    out.append(report.kernel_out(f"HG^{qa - 1}"))
    return BettiTable(tuple(out))


@lru_cache(maxsize=None)
def gysin_term_dims(action: ActionModel, q: Perversity) -> BettiTable:
    """Graded dimensions of the Gysin term ``HG(B)`` at ``q``.

    * no perverse strata: ``ih(B, q - chi)``;
    * cone on a link action: the link's table up to ``q(★) - 2``, then the
      kernel of the link's connecting map, then zero;
    * suspension: Mayer–Vietoris over the two cone neighbourhoods, whose
      restrictions to the link are nested subspaces;
    * product with a contractible manifold: the base table.
    """
    cl = classify(action)
    if not cl.perverse:
        return ih_betti(action.B, q - cl.chi)
    if action.shape == "cone":
        (x,) = _cone_points(action, 1)
        return _cone_table(action, x, q)
    if action.shape == "suspension":
        xn, xs = _cone_points(action, 2)
        a1, a2 = _cone_table(action, xn, q), _cone_table(action, xs, q)
        links = action.links[xn], action.links[xs]
        b = gysin_term_dims(links[0], _restrict_to(q, links[0].B))
        if b != gysin_term_dims(links[1], _restrict_to(q, links[1].B)):
            raise StrataError("NO_CLOSED_FORM", f"{action.name}: suspension with different links")
        top = max(a1.top, a2.top, b.top + 1)
        return BettiTable(
            tuple(min(a1[i], a2[i]) + b[i - 1] - max(a1[i - 1], a2[i - 1]) for i in range(top))
        )
    if action.shape == "product":
        if homology_betti(action.factor) != (1,):
            raise StrataError("NO_CLOSED_FORM", f"{action.name}: manifold factor is not contractible")
        return gysin_term_dims(action.base, _restrict_to(q, action.base.B))
    raise StrataError("NO_CLOSED_FORM", f"{action.name}: no closed form for shape {action.shape!r}")


def _cone_points(action: ActionModel, count: int) -> tuple[str, ...]:
    pts = tuple(x for x in action.fixed_ids() if action.X.stratum(x).dim == 0 and x in action.links)
    if len(pts) != count:
        raise StrataError("NO_CLOSED_FORM", f"{action.name}: expected {count} cone point(s), found {list(pts)}")
    return pts


def gysin_report(action: ActionModel, q: Perversity) -> LESReport:
    ih_x = ih_betti(action.X, action.x_perversity(q))
    ih_b = ih_betti(action.B, q)
    return les_feasible((ih_x, gysin_term_dims(action, q), ih_b), "gysin")


def lower_report(action: ActionModel, q: Perversity) -> LESReport:
    cl = classify(action)
    low = ih_betti(action.B, q - cl.e)
    return les_feasible((low, gysin_term_dims(action, q), lower_residue_dims(action, q)), "lower_approximation")


def stalk_table(action: ActionModel, q: Perversity, fixed_stratum: str) -> BettiTable:
    """Stalk of the lower residue at a perverse stratum ``S`` with ``k = q(S)``.

    Degree ``i``: the link's lower residue for ``i <= k - 3``; the kernel of
    ``Resder^{k-2}(L/S¹) → H^{k-1}_{q-e}(L/S¹)`` at ``k - 2``; the kernel of
    ``HG^{k-1}(L/S¹) → H^{k+1}_q(L/S¹)`` at ``k - 1``; zero from ``k`` on.
    """
    b = action.b_id(fixed_stratum)
    if b not in action.B.singular_ids or classify(action).label(b) != PERVERSE:
        raise StrataError("NOT_PERVERSE", f"{action.name}: {fixed_stratum} is not a perverse stratum")
    xs = [x for x in action.x_ids_over(b) if x in action.links]
    if not xs:
        raise StrataError("UNRESOLVED_LINK", f"{action.name}: no link action at {fixed_stratum}")
    link = action.links[xs[0]]
    k = q[b]
    ql = _restrict_to(q, link.B)
    if k <= 0:
        return BettiTable(())
    out = []
    if k - 2 >= 0:
        res_l = lower_residue_dims(link, ql)
        out += [res_l[i] for i in range(k - 2)]
        out.append(lower_report(link, ql).kernel_out(f"Resder^{k - 2}"))
    out.append(gysin_report(link, ql).kernel_out(f"HG^{k - 1}"))
    return BettiTable(tuple(out))


def _sphere_like(t: BettiTable) -> bool:
    e = list(t.entries)
    while e and e[-1] == 0:
        e.pop()
    return e == [1] or (len(e) >= 2 and e[0] == 1 and e[-1] == 1 and not any(e[1:-1]))


def lower_residue_dims(action: ActionModel, q: Perversity) -> BettiTable:
    """``Resder(B)``: zero without perverse strata, otherwise a sum over the
    perverse strata ``S`` of ``H(S) ⊗ stalk(S)`` (trivial monodromy)."""
    cl = classify(action)
    if not cl.perverse:
        return BettiTable(())
    total = BettiTable(())
    for b in cl.perverse:
        st = action.B.stratum(b)
        if any(action.B.below(o.id, b) for o in action.B.strata):
            raise StrataError("NONEXCEPTIONAL", f"{action.name}: perverse stratum {b} is not closed")
        hs = homology_betti(st.closure())
        if not _sphere_like(hs):
            raise StrataError("NONEXCEPTIONAL", f"{action.name}: perverse stratum {b} is not a point or sphere")
        for x in action.x_ids_over(b):
            link = action.links.get(x)
            if link is not None and classify(link).perverse:
                raise StrataError("NONEXCEPTIONAL", f"{action.name}: link at {x} has perverse strata")
        total = total + hs.convolve(stalk_table(action, q, b))
    return total


# -- verification ---------------------------------------------------------------


@dataclass(frozen=True)
class Check:
    name: str
    ok: bool
    detail: str = ""


@dataclass(frozen=True)
class VerifyReport:
    action: str
    q: Perversity
    in_theorem_range: bool
    classification: StrataClassification
    tables: tuple  # sorted (name, BettiTable)
    gysin: LESReport
    lower: LESReport
    checks: tuple[Check, ...]

    @property
    def passed(self) -> bool:
        return self.gysin.feasible and self.lower.feasible and all(c.ok for c in self.checks)

    @property
    def verdict(self) -> str:
        return "PASS" if self.passed else "FAIL"

    def table(self, name: str) -> BettiTable:
        return dict(self.tables)[name]

    def to_dict(self) -> dict:
        return {
            "action": self.action,
            "q": self.q.as_dict(),
            "verdict": self.verdict,
            "in_theorem_range": self.in_theorem_range,
            "conventions": dict(CONVENTIONS),
            "classification": self.classification.to_dict(),
            "tables": {k: list(v.entries) for k, v in self.tables},
            "sequences": {"gysin": self.gysin.to_dict(), "lower": self.lower.to_dict()},
            "checks": [{"name": c.name, "ok": c.ok, "detail": c.detail} for c in self.checks],
        }


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("STRATA_THREADS", "1")))
    except ValueError:
        return 1


def _pad(t: BettiTable, n: int) -> BettiTable:
    return t.window(0, max(n, _tables_top(t)))


def verify(action: ActionModel, q: Perversity, overrides: Mapping[str, Sequence[int]] | None = None) -> VerifyReport:
    """Compute every table and run both sequence checks plus Euler identities.

    ``overrides`` replaces computed tables by name (``ih_X``, ``ih_B``,
    ``HG``, ``Resder``, ``ih_B_q-e``, ``ih_B_q-chi``, ``step``) before the
    checks run; it exists to exercise the failure path.
    """
    cl = classify(action)
    qx = action.x_perversity(q)
    jobs: dict[str, Callable[[], BettiTable]] = {
        "ih_X": lambda: ih_betti(action.X, qx),
        "ih_B": lambda: ih_betti(action.B, q),
        "HG": lambda: gysin_term_dims(action, q),
        "Resder": lambda: lower_residue_dims(action, q),
        "ih_B_q-e": lambda: ih_betti(action.B, q - cl.e),
        "ih_B_q-chi": lambda: ih_betti(action.B, q - cl.chi),
        "step": lambda: step_ih_betti(action.B, q - cl.e, q - cl.chi),
    }
    workers = min(_threads(), len(jobs))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = {k: pool.submit(f) for k, f in jobs.items()}
            tables = {k: futures[k].result() for k in jobs}
    else:
        tables = {k: f() for k, f in jobs.items()}
    for k, v in (overrides or {}).items():
        if k not in tables:
            raise ValueError(f"unknown table {k!r}")
        tables[k] = v if isinstance(v, BettiTable) else BettiTable(tuple(v))
    nx, nb = action.X.dimension + 1, action.B.dimension + 1
    for k in tables:
        tables[k] = _pad(tables[k], nx if k == "ih_X" else nb)

    gys = les_feasible((tables["ih_X"], tables["HG"], tables["ih_B"]), "gysin")
    low = les_feasible((tables["ih_B_q-e"], tables["HG"], tables["Resder"]), "lower_approximation")
    chi = {k: v.euler_characteristic() for k, v in tables.items()}
    checks = [
        Check(
            "step_euler",
            chi["step"] == chi["ih_B_q-chi"] - chi["ih_B_q-e"],
            f"{chi['step']} vs {chi['ih_B_q-chi']} - {chi['ih_B_q-e']}",
        ),
        Check(
            "braid_euler",
            chi["ih_B_q-chi"] - chi["HG"] == chi["step"] - chi["Resder"],
            f"{chi['ih_B_q-chi']} - {chi['HG']} vs {chi['step']} - {chi['Resder']}",
        ),
    ]
    if not cl.perverse:
        checks.append(Check("resder_vanishes", tables["Resder"] == (), str(tables["Resder"])))
    top = top_perversity(action.X).as_dict()
    in_range = all(0 <= v <= top[k] for k, v in qx.as_dict().items())
    return VerifyReport(
        action.name,
        q,
        in_range,
        cl,
        tuple(sorted(tables.items())),
        gys,
        low,
        tuple(checks),
    )
