"""Named formulas used throughout the library and its tests."""

from __future__ import annotations

from functools import lru_cache

from .formula import Formula, parse_formula

TEXT = {
    # no three pairwise adjacent vertices
    "triangle_free": "A x A y A z ((x = y) | (y = z) | (x = z) | !(x ~ y) | !(y ~ z) | !(x ~ z))",
    "diameter_le_2": "A u A v E w ((u = v) | (u ~ v) | ((u ~ w) & (v ~ w)))",
    "nonadjacent_pair": "E u E v (!(u = v) & !(u ~ v))",
    "all_equal": "A x A y (x = y)",
    # every vertex has a vertex of degree <= 1 within distance two
    "hardness_dist2_degree1": (
        "A x E y1 E y2 A z1 A z2 "
        "(((x = y2) | (x ~ y2) | ((x ~ y1) & (y1 ~ y2))) & (((y2 ~ z1) & (y2 ~ z2)) -> (z1 = z2)))"
    ),
}

# The distance-two sentence with the universal z-block shared by all three
# disjuncts. It does not express the distance-two property (C_5 satisfies it),
# so it is kept only for documentation and regression tests.
SHARED_Z_HARDNESS = (
    "A x E y1 E y2 A z1 A z2 ("
    "(((x ~ z1) & (x ~ z2)) -> (z1 = z2))"
    " | ((x ~ y1) & (((y1 ~ z1) & (y1 ~ z2)) -> (z1 = z2)))"
    " | ((x ~ y1) & (y1 ~ y2) & (((y2 ~ z1) & (y2 ~ z2)) -> (z1 = z2))))"
)

NAMES = tuple(TEXT)
SIGMA3_NAMES = ("triangle_free", "diameter_le_2", "nonadjacent_pair", "all_equal")


@lru_cache(maxsize=None)
def get(name: str) -> Formula:
    try:
        return parse_formula(TEXT[name])
    except KeyError:
        raise KeyError(f"unknown catalog formula {name!r}") from None


def lookup(f: Formula) -> str | None:
    """Catalog name of ``f`` if it is structurally a catalog formula."""
    for name in NAMES:
        if get(name) == f:
            return name
    return None
