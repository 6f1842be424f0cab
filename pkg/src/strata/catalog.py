"""Built-in spaces and circle actions.

Every entry is built on demand from small triangulations and cached, so
repeated lookups return the identical object.
"""
from __future__ import annotations

from functools import lru_cache

from .errors import StrataError
from .gysin import FIXED, MOBILE, NONZERO, ActionModel
from .simplicial import SimplicialComplex, join, product, suspension
from .stratification import (
    StratifiedSpace,
    cone_stratified,
    manifold_space,
    product_stratified,
    suspension_stratified,
)


def four_cycle() -> SimplicialComplex:
    return SimplicialComplex([(0, 1), (1, 2), (2, 3), (0, 3)])


def octahedron() -> SimplicialComplex:
    return suspension(four_cycle())


def interval() -> SimplicialComplex:
    return SimplicialComplex([(0, 1)])


def three_sphere() -> SimplicialComplex:
    """Join of two 4-cycles; vertices 0..3 and 4..7 are the two Hopf circles."""
    return join(four_cycle(), four_cycle())


@lru_cache(maxsize=None)
def _hopf() -> ActionModel:
    return ActionModel(
        "hopf",
        manifold_space(three_sphere()),
        manifold_space(octahedron()),
        {"r0": "r0"},
        shape="free",
        metadata={"X": "S^3", "B": "S^2", "euler_class": "generator of H^2(S^2)"},
    )


def _weighted(k: int) -> ActionModel:
    # the circle on vertices 0..3 has isotropy Z_k; its image is one point of B
    X = StratifiedSpace.build(three_sphere(), [four_cycle()], names={"c": [(0,)]})
    oct_ = octahedron()
    B = StratifiedSpace.build(oct_, [SimplicialComplex([(oct_.vertices[-2],)])], names={"c": [(oct_.vertices[-2],)]})
    return ActionModel(
        f"weighted_hopf_{k}",
        X,
        B,
        {"c": "c", "r0": "r0"},
        isotropy={"c": MOBILE},
        shape="mobile",
        metadata={"weights": [1, k], "X": "S^3", "B": f"S^2 with one Z_{k} cone point"},
    )


@lru_cache(maxsize=None)
def _weighted_2() -> ActionModel:
    return _weighted(2)


@lru_cache(maxsize=None)
def _weighted_3() -> ActionModel:
    return _weighted(3)


@lru_cache(maxsize=None)
def _cone_hopf() -> ActionModel:
    h = _hopf()
    return ActionModel(
        "cone_hopf",
        cone_stratified(h.X),
        cone_stratified(h.B),
        {"r0": "r0", "star": "star"},
        isotropy={"star": FIXED},
        links={"star": h},
        euler_flags={"star": NONZERO},
        shape="cone",
        metadata={"X": "c(S^3)", "B": "c(S^2)"},
    )


@lru_cache(maxsize=None)
def _susp_hopf() -> ActionModel:
    h = _hopf()
    return ActionModel(
        "susp_hopf",
        suspension_stratified(h.X),
        suspension_stratified(h.B),
        {"r0": "r0", "north": "north", "south": "south"},
        isotropy={"north": FIXED, "south": FIXED},
        links={"north": h, "south": h},
        euler_flags={"north": NONZERO, "south": NONZERO},
        shape="suspension",
        metadata={"X": "S^4", "B": "S^3"},
    )


@lru_cache(maxsize=None)
def _free_torus_rotation() -> ActionModel:
    return ActionModel(
        "free_torus_rotation",
        manifold_space(product(octahedron(), four_cycle())),
        manifold_space(octahedron()),
        {"r0": "r0"},
        shape="free",
        metadata={"X": "S^2 x S^1", "B": "S^2", "euler_class": "zero (trivial bundle)"},
    )


@lru_cache(maxsize=None)
def _interval_cone_hopf() -> ActionModel:
    c = _cone_hopf()
    return ActionModel(
        "interval_cone_hopf",
        product_stratified(interval(), c.X),
        product_stratified(interval(), c.B),
        {"r0": "r0", "star": "star"},
        isotropy={"star": FIXED},
        links={"star": c.links["star"]},
        euler_flags={"star": NONZERO},
        shape="product",
        base=c,
        factor=interval(),
        metadata={"X": "I x c(S^3)", "B": "I x c(S^2)"},
    )


_BUILDERS = {
    "hopf": _hopf,
    "weighted_hopf_2": _weighted_2,
    "weighted_hopf_3": _weighted_3,
    "cone_hopf": _cone_hopf,
    "susp_hopf": _susp_hopf,
    "free_torus_rotation": _free_torus_rotation,
    "interval_cone_hopf": _interval_cone_hopf,
}


def names() -> tuple[str, ...]:
    return tuple(_BUILDERS)


def get(name: str) -> ActionModel:
    try:
        return _BUILDERS[name]()
    except KeyError:
        raise StrataError("UNKNOWN_CATALOG", f"no catalog entry {name!r}; known: {', '.join(_BUILDERS)}") from None


def spaces() -> dict[str, StratifiedSpace]:
    """Every distinct space in the catalog, keyed ``<entry>.X`` / ``<entry>.B``."""
    out: dict[str, StratifiedSpace] = {}
    seen: set[StratifiedSpace] = set()
    for name in _BUILDERS:
        a = get(name)
        for tag, sp in (("X", a.X), ("B", a.B)):
            if sp not in seen:
                seen.add(sp)
                out[f"{name}.{tag}"] = sp
    return out
