"""Slow, independent verifiers for desk-scale cross-checking.

Nothing here shares component-labeling code with the cosheaf module: the
geometric recomputation works on segment arithmetic over realized open sets,
the full loss walks every open set of the Alexandroff topology, and the
exhaustive search enumerates basis assignments at the component level.  All
enumerations enforce hard caps; exceeding a cap raises, never truncates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from .assignment import Assignment
from .cosheaf import INFINITE, CosheafGraph, SliceLabeling
from .grid import Cell, GridSpec, all_cells, cell_sort_key, cofaces, faces, is_open, thicken
from .ingest import GeometricGraph, _as_fraction


class OracleCapError(ValueError):
    pass


# -- geometric recomputation of component counts --------------------------------


def _point_in_cell(val: tuple[Fraction, ...], c: Cell, dfrac: Fraction) -> bool:
    for x, (kind, l) in zip(val, c.intervals()):
        if kind == "deg":
            if x != l * dfrac:
                return False
        else:
            if not (l * dfrac < x < (l + 1) * dfrac):
                return False
    return True


def _point_in_set(val: tuple[Fraction, ...], cells: frozenset[Cell], dfrac: Fraction) -> bool:
    return any(_point_in_cell(val, c, dfrac) for c in cells)


# intervals on an edge parameter are (lo, hi, lo_closed, hi_closed), Fractions
_FULL = (Fraction(0), Fraction(1), True, True)


def _axis_t_interval(u: Fraction, v: Fraction, kind: str, l: int, dfrac: Fraction):
    """Parameter set where (1-t)u + tv satisfies one axis constraint, clipped
    to [0, 1]; returns an interval tuple or None."""
    span = v - u
    if kind == "deg":
        target = l * dfrac
        if span == 0:
            return _FULL if u == target else None
        t = (target - u) / span
        if 0 <= t <= 1:
            return (t, t, True, True)
        return None
    lo_v, hi_v = l * dfrac, (l + 1) * dfrac
    if span == 0:
        return _FULL if lo_v < u < hi_v else None
    t1 = (lo_v - u) / span
    t2 = (hi_v - u) / span
    if t1 > t2:
        t1, t2 = t2, t1
    lo, hi, lc, hc = t1, t2, False, False
    if lo < 0:
        lo, lc = Fraction(0), True
    if hi > 1:
        hi, hc = Fraction(1), True
    if lo > hi or (lo == hi and not (lc and hc)):
        return None
    return (lo, hi, lc, hc)


def _intersect(a, b):
    if a is None or b is None:
        return None
    lo, lc = max((a[0], not a[2]), (b[0], not b[2]))
    hi, hc = min((a[1], a[3]), (b[1], b[3]))
    lc, hc = not lc, hc
    if lo > hi or (lo == hi and not (lc and hc)):
        return None
    return (lo, hi, lc, hc)


def _merge_intervals(parts):
    """Maximal connected unions of parameter intervals."""
    parts = sorted(parts, key=lambda p: (p[0], not p[2], p[1], not p[3]))
    out = []
    for p in parts:
        if out:
            q = out[-1]
            touches = p[0] < q[1] or (p[0] == q[1] and (q[3] or p[2]))
            if touches:
                hi, hc = max((q[1], q[3]), (p[1], p[3]))
                out[-1] = (q[0], hi, q[2], hc)
                continue
        out.append(p)
    return out


def geometric_pi0(
    g: GeometricGraph, grid: GridSpec, cells: frozenset[Cell]
) -> tuple[int, list[tuple]]:
    """Path components of the preimage of the realized open set, computed
    directly from segment arithmetic.  Returns the count and one
    representative point per component."""
    if not is_open(grid, cells):
        raise ValueError("geometric_pi0 requires an open cell set")
    dfrac = _as_fraction(grid.delta)

    parent: dict[tuple, tuple] = {}

    def find(x):
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)

    for vid in sorted(g.vertices):
        if _point_in_set(g.vertices[vid], cells, dfrac):
            key = ("v", vid)
            parent[key] = key

    piece_info: dict[tuple, tuple] = {}
    for eidx, (u, v) in enumerate(g.edges):
        uval, vval = g.vertices[u], g.vertices[v]
        parts = []
        for c in cells:
            got = _FULL
            for a, (kind, l) in enumerate(c.intervals()):
                got = _intersect(got, _axis_t_interval(uval[a], vval[a], kind, l, dfrac))
                if got is None:
                    break
            if got is not None:
                parts.append(got)
        for j, piece in enumerate(_merge_intervals(parts)):
            key = ("e", eidx, j)
            parent[key] = key
            piece_info[key] = piece
            lo, hi, lc, hc = piece
            if lo == 0 and lc and ("v", u) in parent:
                union(key, ("v", u))
            if hi == 1 and hc and ("v", v) in parent:
                union(key, ("v", v))

    roots: dict[tuple, tuple] = {}
    for key in sorted(parent):
        roots.setdefault(find(key), key)
    reps = []
    for root in sorted(roots):
        key = roots[root]
        if key[0] == "v":
            reps.append(("vertex", key[1]))
        else:
            eidx, j = key[1], key[2]
            lo, hi, _, _ = piece_info[key]
            mid = (lo + hi) / 2
            u, v = g.edges[eidx]
            reps.append(("edge", u, v, str(mid)))
    return len(roots), reps


# -- open set enumeration --------------------------------------------------------


def enumerate_opens(grid: GridSpec, cap: int = 1_000_000) -> list[frozenset[Cell]]:
    """Every coface-closed cell set, each exactly once.  Cells are decided in
    decreasing dimension so a cell may join only when all its cofaces did."""
    cells = sorted(all_cells(grid), key=lambda c: (-c.dim, cell_sort_key(c)))
    cof = {c: cofaces(grid, c) for c in cells}
    out: list[frozenset[Cell]] = []

    def rec(i: int, chosen: set[Cell]) -> None:
        if len(out) > cap:
            raise OracleCapError(f"open-set enumeration exceeded the cap of {cap}")
        if i == len(cells):
            out.append(frozenset(chosen))
            return
        c = cells[i]
        rec(i + 1, chosen)
        if cof[c] <= chosen:
            chosen.add(c)
            rec(i + 1, chosen)
            chosen.remove(c)

    rec(0, set())
    if len(out) > cap:
        raise OracleCapError(f"open-set enumeration exceeded the cap of {cap}")
    return sorted(out, key=lambda s: (len(s), sorted(map(cell_sort_key, s))))


# -- tiny instance guards --------------------------------------------------------


@dataclass(frozen=True)
class TinyCaps:
    max_nodes_per_side: int = 12
    max_L: int = 4
    max_candidates: int = 2_000_000


def check_tiny(F: CosheafGraph, G: CosheafGraph, caps: TinyCaps) -> None:
    if F.grid != G.grid:
        raise ValueError("both cosheaves must live on the same grid")
    if F.grid.L > caps.max_L:
        raise OracleCapError(f"grid half-extent {F.grid.L} exceeds the cap {caps.max_L}")
    for side, graph in (("F", F), ("G", G)):
        if graph.node_count() > caps.max_nodes_per_side:
            raise OracleCapError(
                f"{side} has {graph.node_count()} nodes, cap is {caps.max_nodes_per_side}")


# -- full loss over every open set -----------------------------------------------


@dataclass
class FullLossReport:
    value: float | int
    consistent_extension: bool
    opens: int


class _Labeler:
    """set_at labelings cached per open set, plus node-to-node merge radii."""

    def __init__(self, graph: CosheafGraph):
        self.graph = graph
        self.cache: dict[frozenset[Cell], SliceLabeling] = {}
        self.total = graph.grid.cell_count()

    def at(self, cells: frozenset[Cell]) -> SliceLabeling:
        hit = self.cache.get(cells)
        if hit is None:
            hit = self.graph.set_at(cells)
            self.cache[cells] = hit
        return hit

    def node_distance(self, cells: frozenset[Cell], i: int, j: int):
        """Least extra thickening of `cells` merging nodes i and j."""
        grid = self.graph.grid
        cur = cells
        k = 0
        while True:
            lab = self.at(cur)
            li = lab._lab[i]
            if li >= 0 and li == lab._lab[j]:
                return k
            if len(cur) == self.total:
                return INFINITE
            cur = thicken(grid, cur, 1)
            k += 1


def _extension(labeler_src: _Labeler, labeler_dst, ptr: list[int], opens, grid, n):
    """Canonical component-level extension of a pointer map: each component of
    the source over S maps through the pointer of its first member.  Returns
    ({(S, comp) -> dst node index}, all members agreed)."""
    consistent = True
    chosen: dict[tuple[frozenset[Cell], int], int] = {}
    for S in opens:
        lab = labeler_src.at(S)
        target = labeler_dst.at(thicken(grid, S, n))
        seen: dict[int, int] = {}
        for i in lab._members:
            c = lab._lab[i]
            t = ptr[i]
            if c not in seen:
                seen[c] = t
                chosen[(S, c)] = t
            elif target._lab[seen[c]] != target._lab[t]:
                consistent = False
    return chosen, consistent


def full_loss(
    F: CosheafGraph,
    G: CosheafGraph,
    a: Assignment,
    caps: TinyCaps = TinyCaps(),
    max_opens: int = 50_000,
) -> FullLossReport:
    """The loss over every pair of nested open sets, with phi and psi extended
    from the pointers component-wise through covering basic opens.

    The extension picks each component's first member as its representative;
    when members disagree about the target component the report flags it, and
    the value is still the loss of that concrete unnatural transformation.
    By construction the value is at least the basis loss of the same
    assignment.
    """
    check_tiny(F, G, caps)
    grid = F.grid
    opens = [S for S in enumerate_opens(grid, cap=max_opens) if S]
    n = a.n

    labF, labG = _Labeler(F), _Labeler(G)
    phi = [G.index[a.phi[nid]] for nid in F.ids]
    psi = [F.index[a.psi[nid]] for nid in G.ids]
    ext_phi, ok_phi = _extension(labF, labG, phi, opens, grid, n)
    ext_psi, ok_psi = _extension(labG, labF, psi, opens, grid, n)

    worst: float | int = 0

    def bump(v) -> None:
        nonlocal worst
        if v > worst:
            worst = v

    thick = {S: thicken(grid, S, n) for S in opens}
    thick2 = {S: thicken(grid, thick[S], n) for S in opens}

    for S in opens:
        repsS_F = _component_reps(labF.at(S))
        repsS_G = _component_reps(labG.at(S))
        # triangles at S
        for c, i in repsS_F:
            mid = ext_phi[(S, c)]
            c_mid = labG.at(thick[S])._lab[mid]
            back = ext_psi[(thick[S], c_mid)]
            d = labF.node_distance(thick2[S], i, back)
            bump(d if math.isinf(d) else (int(d) + 1) // 2)
        for c, j in repsS_G:
            mid = ext_psi[(S, c)]
            c_mid = labF.at(thick[S])._lab[mid]
            back = ext_phi[(thick[S], c_mid)]
            d = labG.node_distance(thick2[S], j, back)
            bump(d if math.isinf(d) else (int(d) + 1) // 2)
        # parallelograms for every strictly larger T
        for T in opens:
            if T == S or not S <= T:
                continue
            labT_F = labF.at(T)
            labT_G = labG.at(T)
            for c, i in repsS_F:
                via_T = ext_phi[(T, labT_F._lab[i])]
                via_S = ext_phi[(S, c)]
                bump(labG.node_distance(thick[T], via_T, via_S))
            for c, j in repsS_G:
                via_T = ext_psi[(T, labT_G._lab[j])]
                via_S = ext_psi[(S, c)]
                bump(labF.node_distance(thick[T], via_T, via_S))
        if math.isinf(worst):
            break

    return FullLossReport(value=worst, consistent_extension=ok_phi and ok_psi,
                          opens=len(opens))


def _component_reps(lab: SliceLabeling) -> list[tuple[int, int]]:
    """(component id, first member node index) pairs, in component order."""
    seen: dict[int, int] = {}
    for i in lab._members:
        seen.setdefault(lab._lab[i], i)
    return sorted(seen.items())


# -- exhaustive interleaving search ----------------------------------------------


def _assignment_candidates(
    src: CosheafGraph, dst: CosheafGraph, n: int, pair_checks, caps: TinyCaps
) -> list[list[int]] | None:
    """All component-level pointer maps src -> dst at level n that pass the
    given parallelogram family at slack 0, via backtracking.  None when some
    node has no target at all (no n-assignment exists)."""
    options: list[list[int]] = []
    for i, c in enumerate(src.cells):
        sl = dst.slice(c, n)
        reps = [dst.index[r] for r in sl.representatives()]
        if not reps:
            return None
        options.append(reps)

    count = 1
    for o in options:
        count *= len(o)
        if count > caps.max_candidates:
            raise OracleCapError("assignment enumeration exceeded the candidate cap")

    # pair_checks[i] = [(j, sigma)] with j < i: check choice[i] vs choice[j]
    by_later: list[list[tuple[int, Cell]]] = [[] for _ in src.ids]
    for x, xf, sigma in pair_checks:
        hi, lo = (x, xf) if x > xf else (xf, x)
        by_later[hi].append((lo, sigma))

    found: list[list[int]] = []
    choice: list[int] = [0] * len(src.ids)

    def ok_pair(i: int, j: int, sigma: Cell) -> bool:
        sl = dst.slice(sigma, n)
        return sl._lab[choice[i]] == sl._lab[choice[j]]

    def rec(i: int) -> None:
        if i == len(src.ids):
            found.append(choice.copy())
            return
        for pick in options[i]:
            choice[i] = pick
            if all(ok_pair(i, j, sigma) for j, sigma in by_later[i]):
                rec(i + 1)

    rec(0)
    return found


def _pair_checks(graph: CosheafGraph) -> list[tuple[int, int, Cell]]:
    out = []
    for tau in graph.occupied_cells():
        for sigma in faces(tau):
            for xi in graph.nodes_at[tau]:
                xf = graph._face_image_idx(xi, sigma)
                if xf is None:
                    raise OracleCapError(
                        f"input cosheaf is missing a face image at {sigma!r}")
                out.append((xi, xf, sigma))
    return out


def exhaustive_interleaving(
    F: CosheafGraph, G: CosheafGraph, n_max: int, caps: TinyCaps = TinyCaps()
) -> int | None:
    """Smallest n <= n_max admitting a basis assignment with zero loss at
    slack 0, i.e. the interleaving distance of the instance as an integer;
    None when every n up to n_max fails."""
    check_tiny(F, G, caps)
    checks_F = _pair_checks(F)
    checks_G = _pair_checks(G)

    for n in range(n_max + 1):
        phis = _assignment_candidates(F, G, n, checks_F, caps)
        psis = _assignment_candidates(G, F, n, checks_G, caps)
        if phis is None or psis is None:
            continue
        if len(phis) * len(psis) > caps.max_candidates:
            raise OracleCapError("assignment enumeration exceeded the candidate cap")
        if _find_interleaving(F, G, n, phis, psis) is not None:
            return n
    return None


def _find_interleaving(F, G, n, phis, psis):
    down_slices = {c: F.slice(c, 2 * n) for c in F.occupied_cells()}
    up_slices = {c: G.slice(c, 2 * n) for c in G.occupied_cells()}

    for phi in phis:
        for psi in psis:
            ok = True
            for c, sl in down_slices.items():
                lab = sl._lab
                for xi in F.nodes_at[c]:
                    if lab[xi] != lab[psi[phi[xi]]]:
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                for c, sl in up_slices.items():
                    lab = sl._lab
                    for yi in G.nodes_at[c]:
                        if lab[yi] != lab[phi[psi[yi]]]:
                            ok = False
                            break
                    if not ok:
                        break
            if ok:
                return phi, psi
    return None
