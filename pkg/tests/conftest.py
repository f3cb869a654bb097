"""Shared fixtures: the worked-example instances and random-instance helpers.

The geometric fixtures are small d=1 graphs whose slice structure realizes
the reference facts exercised across the suite:

  fork        one graph with two low forks joining at 1.5 and 7.5, giving
              slice distances 1 and 2 over the bands around heights 0 and 5;
  hook/lam    a long strand with a short high branch (hook) against two long
              legs joined at the top (lam); with the leg-to-strand n=1
              assignment the four diagram families come out (0, 1, 0, 1),
              the basis loss is 1, and the certified bound is 2;
  split pair  a connected strand against two parallel strands, where every
              assignment has infinite loss;
  chase pair  handcrafted cosheaves with friendly ids for the pointer-chase
              examples (b -> w, c -> z, ab -> xy, bc -> uv, x -> b, w -> c).
"""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from mapperbound import (
    Assignment,
    CosheafGraph,
    GeometricGraph,
    GridSpec,
    edge_cell,
    fit_grid,
    vertex_cell,
)
from mapperbound.ingest import MapperBuild, build

HALF = Fraction(1, 2)
V = vertex_cell
E = edge_cell


# -- the single-graph distance fixture -----------------------------------------


def fork_graph() -> GeometricGraph:
    return GeometricGraph(
        d=1,
        vertices={
            "x1": (-HALF,), "x2": (-HALF,), "j1": (Fraction(3, 2),),
            "y1": (Fraction(9, 2),), "y2": (Fraction(9, 2),), "j2": (Fraction(15, 2),),
        },
        edges=[("x1", "j1"), ("x2", "j1"), ("j1", "y1"), ("y1", "j2"), ("y2", "j2")],
    )


@pytest.fixture(scope="session")
def fork():
    g = fork_graph()
    grid = fit_grid([g], 1.0)
    return build(g, grid)


# -- the hook/lambda bound fixture ----------------------------------------------


def hook_graph(delta: Fraction = Fraction(1)) -> GeometricGraph:
    return GeometricGraph(
        d=1,
        vertices={
            "xm": (-HALF * delta,),
            "xj": (Fraction(7, 2) * delta,),
            "xb": (Fraction(11, 5) * delta,),
        },
        edges=[("xm", "xj"), ("xj", "xb")],
    )


def lam_graph(delta: Fraction = Fraction(1)) -> GeometricGraph:
    return GeometricGraph(
        d=1,
        vertices={
            "t1": (-HALF * delta,),
            "t2": (-HALF * delta,),
            "top": (Fraction(7, 2) * delta,),
        },
        edges=[("t1", "top"), ("t2", "top")],
    )


def hook_lam_pair(delta: float = 1.0) -> tuple[MapperBuild, MapperBuild]:
    dfrac = Fraction(str(delta))
    X, Y = hook_graph(dfrac), lam_graph(dfrac)
    grid = fit_grid([X, Y], delta)
    return build(X, grid), build(Y, grid)


def hook_lam_assignment(bF: MapperBuild, bG: MapperBuild) -> Assignment:
    """n=1: the long strand pairs with the first leg everywhere; the second
    leg redirects to the short branch where the radius allows it."""
    d = Fraction(str(bF.grid.delta))
    span = 4 * d

    def fnode(c, val):
        return bF.node_on_edge(c, ("xm", "xj"), (val + HALF * d) / span)

    def bnode(c, val):
        return bF.node_on_edge(c, ("xj", "xb"), (Fraction(7, 2) * d - val) / (Fraction(13, 10) * d))

    def wnode(c, val):
        return bG.node_on_edge(c, ("t1", "top"), (val + HALF * d) / span)

    def znode(c, val):
        return bG.node_on_edge(c, ("t2", "top"), (val + HALF * d) / span)

    phi: dict[str, str] = {}
    psi: dict[str, str] = {}
    low_cells = [V(-1), E(-1), V(0), E(0), V(1), E(1), V(2), E(2)]
    low_vals = [-HALF, Fraction(-1, 4), Fraction(0), HALF,
                Fraction(1), Fraction(3, 2), Fraction(2), Fraction(5, 2)]
    for c, val in zip(low_cells, low_vals):
        val = val * d
        phi[fnode(c, val)] = wnode(c, val)
        psi[wnode(c, val)] = fnode(c, val)
        psi[znode(c, val)] = fnode(c, val)
    tip = Fraction(5, 2) * d
    phi[bnode(V(2), tip)] = wnode(V(2), tip)
    phi[bnode(E(2), tip)] = wnode(E(2), tip)
    psi[znode(V(1), 1 * d)] = bnode(V(2), tip)
    psi[znode(E(1), Fraction(3, 2) * d)] = bnode(E(2), tip)
    psi[znode(V(2), 2 * d)] = bnode(V(2), tip)
    psi[znode(E(2), tip)] = bnode(E(2), tip)
    for c, val in zip([V(3), E(3), V(4)],
                      [Fraction(13, 4) * d, Fraction(13, 4) * d, Fraction(7, 2) * d]):
        phi[fnode(c, val)] = wnode(c, val)
        psi[wnode(c, val)] = fnode(c, val)
    return Assignment(n=1, phi=phi, psi=psi)


@pytest.fixture(scope="session")
def hook_lam():
    return hook_lam_pair()


@pytest.fixture(scope="session")
def hook_lam_asg(hook_lam):
    bF, bG = hook_lam
    return hook_lam_assignment(bF, bG)


# -- connected vs disconnected --------------------------------------------------


def split_graph() -> GeometricGraph:
    return GeometricGraph(
        d=1,
        vertices={"a1": (-HALF,), "a2": (Fraction(5, 2),),
                  "b1": (-HALF,), "b2": (Fraction(5, 2),)},
        edges=[("a1", "a2"), ("b1", "b2")],
    )


def strand_graph() -> GeometricGraph:
    return GeometricGraph(
        d=1,
        vertices={"m1": (-HALF,), "m2": (Fraction(5, 2),)},
        edges=[("m1", "m2")],
    )


def split_pair() -> tuple[MapperBuild, MapperBuild]:
    X, Y = split_graph(), strand_graph()
    grid = fit_grid([X, Y], 1.0)
    return build(X, grid), build(Y, grid)


@pytest.fixture(scope="session")
def split():
    return split_pair()


# -- handcrafted pointer-chase pair ---------------------------------------------


def chase_pair() -> tuple[CosheafGraph, CosheafGraph, Assignment]:
    grid = GridSpec(1, 1.0, 5)
    nodes_g = [
        ("x", V(-1)), ("xy", E(-1)), ("y", V(0)), ("yw", E(0)), ("w", V(1)),
        ("wp", E(1)), ("p2", V(2)), ("pe", E(2)),
        ("u", V(-1)), ("uv", E(-1)), ("vv", V(0)), ("vz", E(0)), ("z", V(1)),
        ("zq", E(1)), ("q2", V(2)), ("qe", E(2)),
        ("g3", V(3)), ("m3", E(3)), ("g4", V(4)),
    ]
    links_g = [
        ("xy", "x"), ("xy", "y"), ("yw", "y"), ("yw", "w"), ("wp", "w"), ("wp", "p2"),
        ("pe", "p2"), ("pe", "g3"),
        ("uv", "u"), ("uv", "vv"), ("vz", "vv"), ("vz", "z"), ("zq", "z"), ("zq", "q2"),
        ("qe", "q2"), ("qe", "g3"),
        ("m3", "g3"), ("m3", "g4"),
    ]
    G = CosheafGraph(grid, nodes_g, links_g)
    nodes_f = [
        ("a", V(-1)), ("ab", E(-1)), ("b", V(0)), ("bc", E(0)), ("c", V(1)),
        ("cf", E(1)), ("f2", V(2)), ("ff", E(2)), ("f3", V(3)), ("fe", E(3)), ("f4", V(4)),
    ]
    links_f = [
        ("ab", "a"), ("ab", "b"), ("bc", "b"), ("bc", "c"), ("cf", "c"), ("cf", "f2"),
        ("ff", "f2"), ("ff", "f3"), ("fe", "f3"), ("fe", "f4"),
    ]
    F = CosheafGraph(grid, nodes_f, links_f)
    a = Assignment(
        n=1,
        phi={"a": "x", "ab": "xy", "b": "w", "bc": "uv", "c": "z", "cf": "wp",
             "f2": "p2", "ff": "pe", "f3": "g3", "fe": "m3", "f4": "g4"},
        psi={"x": "b", "xy": "ab", "y": "b", "yw": "bc", "w": "c", "wp": "cf",
             "p2": "f2", "pe": "ff",
             "u": "a", "uv": "ab", "vv": "b", "vz": "bc", "z": "c", "zq": "cf",
             "q2": "f2", "qe": "ff",
             "g3": "f3", "m3": "fe", "g4": "f4"},
    )
    return F, G, a


@pytest.fixture(scope="session")
def chase():
    return chase_pair()


# -- the 14-element adjacency-listing instance ----------------------------------

LISTING_HEIGHTS = {1: 2, 2: 3, 3: 4, 4: 4, 5: 5, 6: 5, 7: 6, 8: 6,
                   9: 7, 10: 8, 11: 8, 12: 9, 13: 9, 14: 10}
LISTING_EDGES = [(1, 2), (2, 3), (3, 5), (4, 6), (5, 7), (5, 8), (6, 8), (7, 9),
                 (8, 9), (9, 10), (9, 11), (10, 12), (11, 13), (13, 14)]


def listing_graph() -> GeometricGraph:
    return GeometricGraph(
        d=1,
        vertices={f"v{k}": (Fraction(h),) for k, h in LISTING_HEIGHTS.items()},
        edges=[(f"v{a}", f"v{b}") for a, b in LISTING_EDGES],
    )


@pytest.fixture(scope="session")
def listing():
    g = listing_graph()
    return build(g, fit_grid([g], 1.0))


# -- random instance helpers -----------------------------------------------------


def random_geometric(rng: random.Random, tag: str, n_vertices: int,
                     d: int = 1, denom: int = 10, spread: int = 17,
                     extra_edges: int = 0) -> GeometricGraph:
    """A random PL graph: a path plus optional chords, rational values."""
    verts = {}
    for i in range(n_vertices):
        verts[f"{tag}{i}"] = tuple(
            Fraction(rng.randint(-spread, spread), denom) for _ in range(d))
    edges = [(f"{tag}{i-1}", f"{tag}{i}") for i in range(1, n_vertices)]
    for _ in range(extra_edges):
        i, j = rng.sample(range(n_vertices), 2)
        edges.append((f"{tag}{i}", f"{tag}{j}"))
    return GeometricGraph(d=d, vertices=verts, edges=edges)


def feasible_level(F: CosheafGraph, G: CosheafGraph) -> int:
    """Smallest n at which every node on either side has a nonempty target slice."""
    n = 0
    while True:
        if all(G.slice(F.cell_of(i), n).component_count for i in F.ids) and \
           all(F.slice(G.cell_of(j), n).component_count for j in G.ids):
            return n
        n += 1
        if n > 4 * max(F.grid.L, 1):
            raise AssertionError("no feasible assignment level found")


def random_assignment(F: CosheafGraph, G: CosheafGraph, n: int,
                      rng: random.Random) -> Assignment:
    phi = {i: rng.choice(G.slice(F.cell_of(i), n).members()) for i in F.ids}
    psi = {j: rng.choice(F.slice(G.cell_of(j), n).members()) for j in G.ids}
    return Assignment(n=n, phi=phi, psi=psi)
