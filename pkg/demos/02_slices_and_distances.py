"""Slices of a mapper graph and the merge-radius metric between elements.

A single height function on a graph with two forks: one pair of components
merges one band step up, the other needs two.  Run:

    python demos/02_slices_and_distances.py
"""

from fractions import Fraction

from mapperbound import GeometricGraph, diameter, distance, fit_grid, vertex_cell
from mapperbound.ingest import build

H = Fraction(1, 2)


def main() -> None:
    g = GeometricGraph(
        d=1,
        vertices={
            "x1": (-H,), "x2": (-H,), "j1": (Fraction(3, 2),),
            "y1": (Fraction(9, 2),), "y2": (Fraction(9, 2),), "j2": (Fraction(15, 2),),
        },
        edges=[("x1", "j1"), ("x2", "j1"), ("j1", "y1"), ("y1", "j2"), ("y2", "j2")],
    )
    grid = fit_grid([g], 1.0)
    built = build(g, grid)
    F = built.graph
    print(f"Ingested {len(g.vertices)} vertices / {len(g.edges)} edges "
          f"into {F.node_count()} cosheaf elements on a grid with L={grid.L}")

    s0 = vertex_cell(0)
    print("\nThe band (-1, 1) around height 0 sees the two low legs:")
    for r in range(3):
        sl = F.slice(s0, r)
        print(f"  radius {r}: {sl.component_count} component(s), members={len(sl.members())}")

    a = built.node_of_vertex(s0, "x1")
    b = built.node_of_vertex(s0, "x2")
    print(f"\nThe legs join at height 1.5, one thickening away:")
    print(f"  distance over the band at 0: {distance(F, s0, 0, a, b)}")

    s5 = vertex_cell(5)
    w = built.node_of_vertex(s5, "y1")
    z = built.node_of_vertex(s5, "y2")
    print(f"The upper fork joins at 7.5, two thickenings from the band at 5:")
    print(f"  distance over the band at 5: {distance(F, s5, 0, w, z)}")

    print("\nDiameters (largest pairwise merge radius) of those two slices:")
    print(f"  at height 0: {diameter(F, s0, 0)}")
    print(f"  at height 5: {diameter(F, s5, 0)}")


if __name__ == "__main__":
    main()
