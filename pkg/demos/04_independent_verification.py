"""The oracle layer: slow independent checks backing the fast path.

Three cross-checks on desk-scale instances:
  * slice component counts against direct geometric recomputation,
  * the certified bound against an exhaustive interleaving search,
  * the basis loss against the full loss over every open set.

Run:  python demos/04_independent_verification.py
"""

import random
from fractions import Fraction

from mapperbound import (
    Assignment,
    GeometricGraph,
    TinyCaps,
    basis_loss,
    exhaustive_interleaving,
    fit_grid,
    full_loss,
    geometric_pi0,
)
from mapperbound.grid import basic_open, thicken
from mapperbound.ingest import build


def main() -> None:
    rng = random.Random(12)
    g = GeometricGraph(
        d=1,
        vertices={"a": (Fraction(-3, 10),), "b": (Fraction(17, 10),),
                  "c": (Fraction(9, 10),), "d": (Fraction(-8, 10),)},
        edges=[("a", "b"), ("b", "c"), ("c", "d")],
    )
    grid = fit_grid([g], 1.0)
    F = build(g, grid).graph
    print("Geometric cross-check: slice component counts vs direct recomputation")
    agree = total = 0
    for c in F.occupied_cells():
        for r in range(3):
            cells = thicken(grid, basic_open(grid, c), r)
            want, _ = geometric_pi0(g, grid, cells)
            got = F.slice(c, r).component_count
            agree += got == want
            total += 1
    print(f"  {agree}/{total} sampled open sets agree")

    h = GeometricGraph(
        d=1,
        vertices={"p": (Fraction(-3, 10),), "q": (Fraction(17, 10),)},
        edges=[("p", "q")],
    )
    G = build(h, grid).graph
    caps = TinyCaps(max_nodes_per_side=24)
    phi = {i: rng.choice(G.slice(F.cell_of(i), 1).members()) for i in F.ids}
    psi = {j: rng.choice(F.slice(G.cell_of(j), 1).members()) for j in G.ids}
    a = Assignment(n=1, phi=phi, psi=psi)

    res = basis_loss(F, G, a)
    print(f"\nRandom level-1 assignment: L_B = {res.L_B}, bound = {res.bound}")
    exact = exhaustive_interleaving(F, G, int(res.bound), caps)
    print(f"Exhaustive search finds an interleaving at level {exact} "
          f"(never above the bound)")

    rep = full_loss(F, G, a, caps)
    print(f"\nFull loss over all {rep.opens} open sets: {rep.value} "
          f"(basis loss {res.L_B} can only be smaller or equal)")
    print(f"Pointer extension consistent across representatives: "
          f"{rep.consistent_extension}")


if __name__ == "__main__":
    main()
