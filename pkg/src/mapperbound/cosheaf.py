"""The computational cosheaf: one node per element of each basic-open image.

A CosheafGraph stores, for a fixed grid, the elements of F(S_sigma) for every
cell sigma as nodes (each node carries its cell), plus links (x, y) meaning
that y is the image of x under the map induced by S_{cell(x)} inside
S_{cell(y)}, where cell(y) is a codimension-1 face of cell(x).  Images for
deeper faces are derived by composing stored links; path-independence of that
composition is a validated invariant rather than duplicated data.

Connectivity over an open cell set S is computed on the nodes whose carrier
cell lies in S, joining two nodes when a link connects them and both carriers
are in S.  These "slices" are not induced subgraphs: a link may leave the
slice even when cells of both endpoints would fit a naive index range.  For a
thickened basic open the component count equals the cardinality of the image
of the thickened set, which is what every diagram check consumes.

Extended naturals are represented as plain ints with float("inf") as the top
element; arithmetic saturates automatically.
"""

from __future__ import annotations

import json
import math
import threading
from collections import OrderedDict, deque
from dataclasses import dataclass, field
from typing import Iterable

from .grid import (
    Cell,
    GridSpec,
    basic_open,
    cell_from_wire,
    cell_sort_key,
    cell_to_wire,
    faces,
    is_face,
    is_open,
    saturation_steps,
    thicken,
)

INFINITE = float("inf")

# labelings bigger than this are not kept in the per-graph cache
_CACHE_MEMBER_LIMIT = 5000
_CACHE_MAX_ENTRIES = 256


def fmt_extended(x) -> int | str:
    """JSON form of an extended natural: an int or the string "inf"."""
    return "inf" if math.isinf(x) else int(x)


class CosheafError(ValueError):
    pass


class CosheafGraph:
    """Immutable after construction.  Nodes are (id, carrier cell); links are
    (child id, parent id) with the parent at a codimension-1 face of the child.
    """

    def __init__(
        self,
        grid: GridSpec,
        nodes: Iterable[tuple[str, Cell]],
        links: Iterable[tuple[str, str]],
    ) -> None:
        self.grid = grid
        pairs = sorted(nodes, key=lambda p: (cell_sort_key(p[1]), p[0]))
        self.ids: list[str] = [p[0] for p in pairs]
        self.cells: list[Cell] = [p[1] for p in pairs]
        if len(set(self.ids)) != len(self.ids):
            raise CosheafError("duplicate node ids")
        for c in self.cells:
            grid.check_cell(c)
        self.index: dict[str, int] = {nid: i for i, nid in enumerate(self.ids)}

        self.nodes_at: dict[Cell, list[int]] = {}
        for i, c in enumerate(self.cells):
            self.nodes_at.setdefault(c, []).append(i)

        self.adj: list[list[int]] = [[] for _ in self.ids]
        # stored face images: (child index, face cell) -> parent index
        self.face_link: dict[tuple[int, Cell], int] = {}
        self._raw_links: list[tuple[int, int]] = []
        for child, parent in links:
            if child not in self.index or parent not in self.index:
                raise CosheafError(f"link ({child!r}, {parent!r}) names unknown node")
            ci, pi = self.index[child], self.index[parent]
            self._raw_links.append((ci, pi))
            self.adj[ci].append(pi)
            self.adj[pi].append(ci)
            key = (ci, self.cells[pi])
            if key not in self.face_link:
                self.face_link[key] = pi
        self._raw_links.sort()
        for a in self.adj:
            a.sort()

        self._slice_cache: OrderedDict[tuple[Cell, int], "SliceLabeling"] = OrderedDict()
        self._cache_lock = threading.Lock()
        self._sat_cache: dict[Cell, int] = {}
        self._full: tuple[list[int], list[int], int] | None = None

    # -- basic queries ------------------------------------------------------

    def node_count(self) -> int:
        return len(self.ids)

    def link_count(self) -> int:
        return len(self._raw_links)

    def elements_of(self, c: Cell) -> list[str]:
        """Ids of the elements carried by cell c (empty when the cell is unoccupied)."""
        return [self.ids[i] for i in self.nodes_at.get(c, ())]

    def cell_of(self, node_id: str) -> Cell:
        return self.cells[self.index[node_id]]

    def occupied_cells(self) -> list[Cell]:
        return sorted(self.nodes_at, key=cell_sort_key)

    def elements_by_dim(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for c, idxs in self.nodes_at.items():
            out[c.dim] = out.get(c.dim, 0) + len(idxs)
        return out

    def face_image(self, node_id: str, face: Cell) -> str:
        """The element at `face` that the given node maps to, following stored
        codimension-1 links (composites agree by the validated invariant)."""
        i = self._face_image_idx(self.index[node_id], face)
        if i is None:
            raise CosheafError(f"no face image of {node_id!r} at {face!r}")
        return self.ids[i]

    def _face_image_idx(self, i: int, face: Cell) -> int | None:
        hit = self.face_link.get((i, face))
        if hit is not None:
            return hit
        c = self.cells[i]
        if face == c:
            return i
        if not is_face(face, c):
            raise CosheafError(f"{face!r} is not a face of {c!r}")
        # descend one codimension at a time through any intermediate face
        for mid, j in self._codim1_links(i):
            if is_face(face, mid):
                out = self._face_image_idx(j, face)
                if out is not None:
                    return out
        return None

    def _codim1_links(self, i: int) -> list[tuple[Cell, int]]:
        c = self.cells[i]
        out = []
        for f in faces(c):
            if f.dim == c.dim - 1:
                j = self.face_link.get((i, f))
                if j is not None:
                    out.append((f, j))
        return out

    def saturation(self, center: Cell) -> int:
        hit = self._sat_cache.get(center)
        if hit is None:
            hit = saturation_steps(self.grid, basic_open(self.grid, center))
            self._sat_cache[center] = hit
        return hit

    # -- connectivity labelings ----------------------------------------------

    def _label(self, cells: frozenset[Cell]) -> tuple[list[int], list[int], int]:
        total = len(self.ids)
        if len(cells) == self.grid.cell_count():
            members = list(range(total))
        else:
            members = []
            for c in cells:
                got = self.nodes_at.get(c)
                if got:
                    members.extend(got)
            members.sort()
        # flat label array: -2 non-member, -1 unvisited member, >= 0 component
        if len(members) == total:
            lab = [-1] * total
        else:
            lab = [-2] * total
            for i in members:
                lab[i] = -1
        adj = self.adj
        frontier: list[int] = []
        push = frontier.append
        next_id = 0
        for start in members:
            if lab[start] != -1:
                continue
            # breadth-first via an index pointer into the discovery list
            lab[start] = next_id
            del frontier[:]
            push(start)
            head = 0
            while head < len(frontier):
                v = frontier[head]
                head += 1
                for w in adj[v]:
                    if lab[w] == -1:
                        lab[w] = next_id
                        push(w)
            next_id += 1
        return lab, members, next_id

    def slice(self, center: Cell, radius: int) -> "SliceLabeling":
        """Label the connected components of the portion of the graph carried
        by the radius-thickened basic open of `center` (breadth first)."""
        self.grid.check_cell(center)
        if radius < 0:
            raise ValueError("radius must be a natural number")
        radius = min(radius, self.saturation(center))
        key = (center, radius)
        with self._cache_lock:
            hit = self._slice_cache.get(key)
            if hit is not None:
                self._slice_cache.move_to_end(key)
                return hit
        cells = thicken(self.grid, basic_open(self.grid, center), radius)
        if len(cells) == self.grid.cell_count():
            # a saturated slice is the whole complex: label it once, share it
            with self._cache_lock:
                full = self._full
            if full is None:
                full = self._label(cells)
                with self._cache_lock:
                    self._full = full
            lab, members, count = full
        else:
            lab, members, count = self._label(cells)
        sl = SliceLabeling(graph=self, cells=cells, center=center, radius=radius,
                           component_count=count, _lab=lab, _members=members)
        if len(members) <= _CACHE_MEMBER_LIMIT:
            with self._cache_lock:
                self._slice_cache[key] = sl
                while len(self._slice_cache) > _CACHE_MAX_ENTRIES:
                    self._slice_cache.popitem(last=False)
        return sl

    def set_at(self, cells: Iterable[Cell]) -> "SliceLabeling":
        """Components of the sub-object carried by an arbitrary open cell set;
        realizes the image of the cosheaf on that set."""
        s = frozenset(cells)
        if not is_open(self.grid, s):
            raise CosheafError("set_at requires a coface-closed cell set")
        lab, members, count = self._label(s)
        return SliceLabeling(graph=self, cells=s, center=None, radius=None,
                             component_count=count, _lab=lab, _members=members)


@dataclass
class SliceLabeling:
    """Component labeling of the nodes carried by an open cell set.

    Component ids are assigned in breadth-first discovery order over the
    canonical node order, so labelings are deterministic.  The label array
    holds -2 for non-members and the component id for members.
    """

    graph: CosheafGraph
    cells: frozenset[Cell]
    center: Cell | None
    radius: int | None
    component_count: int
    _lab: list[int] = field(repr=False, default_factory=list)
    _members: list[int] = field(repr=False, default_factory=list)

    def is_member(self, node_id: str) -> bool:
        i = self.graph.index.get(node_id)
        return i is not None and self._lab[i] >= 0

    def component_of(self, node_id: str) -> int:
        i = self.graph.index.get(node_id)
        if i is None or self._lab[i] < 0:
            raise CosheafError(f"node {node_id!r} is not a member of this slice")
        return self._lab[i]

    def members(self) -> list[str]:
        return [self.graph.ids[i] for i in self._members]

    def member_indices(self) -> list[int]:
        return list(self._members)

    def representatives(self) -> list[str]:
        """One node id per component: the first member in canonical order."""
        seen: dict[int, str] = {}
        for i in self._members:
            seen.setdefault(self._lab[i], self.graph.ids[i])
        return [seen[k] for k in sorted(seen)]

    def _component_of_idx(self, i: int) -> int:
        return self._lab[i]


def validate(F: CosheafGraph) -> list[str]:
    """Check all CosheafGraph invariants; return one message per violation.

    Rules: links point from a cell to a proper codimension-1 face of it; one
    link per (node, face cell); a node must have a face image at every
    occupied proper face of its cell; derived images along different
    descent orders must agree.
    """
    out: list[str] = []
    seen: set[tuple[int, Cell]] = set()
    for ci, pi in F._raw_links:
        child, parent = F.ids[ci], F.ids[pi]
        cc, pc = F.cells[ci], F.cells[pi]
        if not (is_face(pc, cc) and pc != cc):
            out.append(f"wrong direction: link ({child}, {parent}) does not go to a proper face")
            continue
        if pc.dim != cc.dim - 1:
            out.append(f"link skips dimensions: ({child}, {parent}) is not codimension-1")
            continue
        key = (ci, pc)
        if key in seen:
            out.append(f"duplicate face image: node {child} has several links at {pc!r}")
        seen.add(key)
    if out:
        return out

    for i, c in enumerate(F.cells):
        for f in sorted(faces(c), key=cell_sort_key):
            if not F.nodes_at.get(f):
                continue
            images = set()
            if f.dim == c.dim - 1:
                j = F.face_link.get((i, f))
                if j is not None:
                    images.add(j)
            else:
                for mid, j in F._codim1_links(i):
                    if is_face(f, mid):
                        k = F._face_image_idx(j, f)
                        if k is not None:
                            images.add(k)
            if not images:
                out.append(f"missing face image: node {F.ids[i]} has no image at occupied face {f!r}")
            elif len(images) > 1:
                names = sorted(F.ids[k] for k in images)
                out.append(f"incompatible face images: node {F.ids[i]} reaches {names} at {f!r}")
    return out


# -- the slice metric ---------------------------------------------------------


def distance(F: CosheafGraph, center: Cell, m: int, x: str, y: str):
    """Smallest k >= 0 such that x and y label the same component of the
    (m+k)-slice at `center`; INFINITE if they are still apart at saturation.

    Components only ever merge as the radius grows, so the first merging
    radius is found by doubling then bisecting.
    """
    base = F.slice(center, m)
    cx, cy = base.component_of(x), base.component_of(y)
    if cx == cy:
        return 0
    sat = F.saturation(center)
    k_max = max(0, sat - m)

    def same(k: int) -> bool:
        sl = F.slice(center, m + k)
        return sl.component_of(x) == sl.component_of(y)

    if k_max == 0 or not same(k_max):
        return INFINITE
    lo, hi = 0, 1
    while hi < k_max and not same(hi):
        lo, hi = hi, min(2 * hi, k_max)
    # invariant: same(hi) holds, same(lo) fails
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if same(mid):
            hi = mid
        else:
            lo = mid
    return hi


def diameter(F: CosheafGraph, center: Cell, m: int):
    """Largest pairwise distance between elements of the m-slice at `center`;
    zero for an empty or singleton slice."""
    reps = F.slice(center, m).representatives()
    best = 0
    for i in range(len(reps)):
        for j in range(i + 1, len(reps)):
            d = distance(F, center, m, reps[i], reps[j])
            if d > best:
                best = d
                if math.isinf(best):
                    return best
    return best


# -- file format and DOT export -----------------------------------------------


def to_json_obj(F: CosheafGraph) -> dict:
    return {
        "grid": F.grid.to_wire(),
        "nodes": [
            {"id": nid, "cell": cell_to_wire(c)} for nid, c in zip(F.ids, F.cells)
        ],
        "links": sorted(
            [F.ids[ci], F.ids[pi]] for ci, pi in F._raw_links
        ),
    }


def to_json(F: CosheafGraph) -> str:
    return json.dumps(to_json_obj(F), sort_keys=True) + "\n"


def from_json_obj(obj: dict) -> CosheafGraph:
    grid = GridSpec.from_wire(obj["grid"])
    nodes = [(n["id"], cell_from_wire(n["cell"], grid)) for n in obj["nodes"]]
    links = [(a, b) for a, b in obj.get("links", [])]
    return CosheafGraph(grid, nodes, links)


def from_json(text: str) -> CosheafGraph:
    return from_json_obj(json.loads(text))


def _cell_token(c: Cell) -> str:
    return ",".join(
        str(l) if kind == "deg" else f"{l}+" for kind, l in c.intervals()
    )


def to_dot(F: CosheafGraph) -> str:
    """One graph node per cosheaf node labeled id@cell, one undirected edge
    per link.  Output is stable under re-runs."""
    lines = ["graph cosheaf {"]
    for nid, c in zip(F.ids, F.cells):
        lines.append(f'  "{nid}" [label="{nid}@{_cell_token(c)}"];')
    for ci, pi in F._raw_links:
        lines.append(f'  "{F.ids[ci]}" -- "{F.ids[pi]}";')
    lines.append("}")
    return "\n".join(lines) + "\n"
