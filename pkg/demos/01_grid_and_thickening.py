"""Tour of the cubical grid layer: cells, stars, thickening, saturation.

Run:  python demos/01_grid_and_thickening.py
"""

from mapperbound import GridSpec, basic_open, edge_cell, thicken, vertex_cell
from mapperbound.grid import all_cells, cofaces, faces, is_open, saturation_steps


def show(cells):
    return "{" + ", ".join(repr(c) for c in sorted(cells, key=lambda c: c.coords)) + "}"


def main() -> None:
    grid = GridSpec(d=1, delta=1.0, L=3)
    print(f"Grid: d={grid.d}, delta={grid.delta}, L={grid.L}  "
          f"-> box [-{grid.L * grid.delta}, {grid.L * grid.delta}], {grid.cell_count()} cells")

    v0, e0 = vertex_cell(0), edge_cell(0)
    print("\nA grid point and the open interval to its right:")
    print("  vertex", v0, " edge", e0)
    print("  faces(edge)   =", show(faces(e0)))
    print("  cofaces(vertex) =", show(cofaces(grid, v0)))

    star = basic_open(grid, v0)
    print("\nThe basic open (star) of the vertex covers the band (-1, 1):")
    print("  basic_open =", show(star))
    print("  is_open?", is_open(grid, star))

    print("\nThickening adds faces, then cofaces, once per level:")
    for n in range(3):
        t = thicken(grid, star, n)
        verts = sorted(c.coords[0] // 2 for c in t if c.dim == 0)
        edges = sorted((c.coords[0] - 1) // 2 for c in t if c.dim == 1)
        print(f"  n={n}: vertex indices {verts}, edge indices {edges}")

    print("\nSaturation: how many levels until the set is the whole complex?")
    for c in (vertex_cell(0), vertex_cell(2), vertex_cell(-3)):
        print(f"  from the star of {c}: {saturation_steps(grid, basic_open(grid, c))}"
              f"  (never more than 2L = {2 * grid.L})")

    grid2 = GridSpec(d=2, delta=1.0, L=2)
    sq = next(c for c in all_cells(grid2) if c.dim == 2 and c.coords == (1, 1))
    ring = thicken(grid2, basic_open(grid2, sq), 1)
    by_dim = {k: sum(1 for c in ring if c.dim == k) for k in (0, 1, 2)}
    print(f"\nIn d=2, one square thickened once covers a 3x3 block: {by_dim} cells by dimension")


if __name__ == "__main__":
    main()
