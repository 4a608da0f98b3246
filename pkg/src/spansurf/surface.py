"""Assembly of a configuration into a surface cell complex.

The graph cut out on the candidate surface by the projection sphere has a
valence-4 vertex at the center of every saddle, a valence-3 vertex at every
twist point, interior arcs and link runs as edges, and one disk face per
curve.  Assembling it gives the Euler characteristic directly as v - e + f,
which must reproduce the exact word-contribution total, plus orientability,
connectivity, and the boundary structure.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .config import (
    Configuration,
    link_walk,
    resolve_interior_arcs,
    _segment_key,
)
from .curves import INTERIOR, LOWER, UPPER
from .diagram import Diagram
from .words import BSWord


class GluingError(RuntimeError):
    """The configuration does not glue to a surface; enumerated
    configurations must never raise this."""


def _vertex_of(token) -> tuple:
    if token[0] == "B":
        return ("T", token[1], token[2])
    _tag, x, _corner, dep = token
    return ("S", x, dep)


@dataclass(frozen=True)
class SurfaceComplex:
    vertex_count: int
    edge_count: int
    face_count: int
    twist_vertex_count: int
    saddle_vertex_count: int
    interior_arc_count: int
    boundary_arc_count: int
    connected: bool
    orientable: bool
    boundary_component_count: int
    face_words: tuple[str, ...]

    @property
    def euler_characteristic(self) -> int:
        return self.vertex_count - self.edge_count + self.face_count

    def to_json_dict(self) -> dict:
        return {
            "v": self.vertex_count,
            "e": self.edge_count,
            "f": self.face_count,
            "chi": self.euler_characteristic,
            "connected": self.connected,
            "orientable": self.orientable,
            "boundary_components": self.boundary_component_count,
        }


def assemble(cfg: Configuration, d: Diagram, mirrored: bool = False
             ) -> SurfaceComplex:
    """Glue one disk per curve along the shared interior arcs and link runs.

    Raises :class:`GluingError` when the configuration's pieces do not fit;
    on the output of the enumerator this signals a missing constraint and is
    treated as an internal defect.
    """
    res = resolve_interior_arcs(cfg, d, mirrored)
    if res is None:
        raise GluingError("interior arcs of the two spheres do not match")
    walk = link_walk(d, cfg.edge_orders_dict)
    if walk is None:
        raise GluingError("link runs fail to alternate")

    # Every twist point lies on exactly one upper and one lower link run, so
    # boundary edges are keyed per sphere (the two runs of a two-twist
    # component share endpoints but are distinct edges).
    arc_edges = {frozenset(a): ("arc", tuple(sorted(a))) for a in res.arcs}
    seg_edges = {}
    for sphere, segs in ((UPPER, walk.upper_segments), (LOWER, walk.lower_segments)):
        for seg in segs:
            seg_edges[(seg, sphere)] = ("seg", seg, sphere)

    vertices = set()
    for arc in res.arcs:
        for t in arc:
            vertices.add(_vertex_of(t))
    for seg, _sphere in seg_edges:
        for t in seg:
            vertices.add(_vertex_of(t))

    # Directed boundary traversals of each face.
    traversals: dict[tuple, list] = {e: [] for e in arc_edges.values()}
    traversals.update({e: [] for e in seg_edges.values()})
    face_words = []
    for fi, curve in enumerate(cfg.curves):
        gaps = res.gaps[fi]
        face_words.append(BSWord(
            "".join("B" if s.serialize().startswith("B") else "S"
                    for s in curve.stations)
        ).letters)
        for kind, ta, tb in gaps:
            if kind == INTERIOR:
                key = arc_edges.get(frozenset((ta, tb)))
            else:
                key = seg_edges.get((_segment_key(ta, tb), curve.sphere))
            if key is None:
                raise GluingError(f"gap {(kind, ta, tb)} has no matching edge")
            traversals[key].append((fi, (ta, tb) == tuple(key[1])))

    for key, trav in traversals.items():
        want = 2 if key[0] == "arc" else 1
        if len(trav) != want:
            raise GluingError(
                f"edge {key} traversed {len(trav)} times (expected {want})"
            )

    # Orientability: flip faces so the two traversals of every interior arc
    # run in opposite directions.
    adj: dict[int, list] = {i: [] for i in range(len(cfg.curves))}
    for key, trav in traversals.items():
        if key[0] != "arc":
            continue
        (f1, d1), (f2, d2) = trav
        adj[f1].append((f2, d1 == d2))
        adj[f2].append((f1, d1 == d2))
    orientable = True
    flip: dict[int, bool] = {}
    for f0 in range(len(cfg.curves)):
        if f0 in flip:
            continue
        flip[f0] = False
        stack = [f0]
        while stack:
            f = stack.pop()
            for g, same_dir in adj[f]:
                want = flip[f] ^ same_dir
                if g not in flip:
                    flip[g] = want
                    stack.append(g)
                elif flip[g] != want:
                    orientable = False

    # Connectivity over the 1-skeleton plus face adjacencies.
    vert_ids = {v: i for i, v in enumerate(sorted(vertices))}
    parent = list(range(len(vert_ids) + len(cfg.curves)))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(a, b):
        parent[find(a)] = find(b)

    for key in traversals:
        tok_pair = key[1]
        v1, v2 = (_vertex_of(t) for t in tok_pair)
        union(vert_ids[v1], vert_ids[v2])
    for key, trav in traversals.items():
        tok_pair = key[1]
        v1 = _vertex_of(tok_pair[0])
        for fi, _dir in trav:
            union(vert_ids[v1], len(vert_ids) + fi)
    roots = {find(i) for i in range(len(parent))}
    connected = len(roots) <= 1

    # Boundary components: link runs chain through twist vertices, each
    # twist carrying exactly one upper and one lower run.
    seg_at: dict[tuple, list] = {}
    for seg, sphere in seg_edges:
        for t in set(seg):
            seg_at.setdefault(t, []).append((seg, sphere))
    for t, segs in seg_at.items():
        if len(segs) != 2:
            raise GluingError(f"twist {t} lies on {len(segs)} link runs")
    boundary_components = 0
    seen_segs: set = set()
    for seg0 in sorted(seg_edges):
        if seg0 in seen_segs:
            continue
        boundary_components += 1
        cur = seg0
        t = sorted(cur[0])[0]
        while cur not in seen_segs:
            seen_segs.add(cur)
            u, v = sorted(cur[0])
            t = v if t == u else u
            (cur,) = [s for s in seg_at[t] if s != cur]

    twist_vertices = sum(1 for v in vertices if v[0] == "T")
    saddle_vertices = sum(1 for v in vertices if v[0] == "S")

    # Valence bookkeeping: saddles carry four interior-arc ends, twists one
    # interior-arc end and two link runs.
    arc_ends: dict[tuple, int] = {}
    for arc in res.arcs:
        for t in arc:
            v = _vertex_of(t)
            arc_ends[v] = arc_ends.get(v, 0) + 1
    for v in sorted(vertices):
        want = 4 if v[0] == "S" else 1
        if arc_ends.get(v, 0) != want:
            raise GluingError(f"vertex {v} has {arc_ends.get(v, 0)} arc ends")

    return SurfaceComplex(
        vertex_count=len(vertices),
        edge_count=len(arc_edges) + len(seg_edges),
        face_count=len(cfg.curves),
        twist_vertex_count=twist_vertices,
        saddle_vertex_count=saddle_vertices,
        interior_arc_count=len(arc_edges),
        boundary_arc_count=len(seg_edges),
        connected=connected,
        orientable=orientable,
        boundary_component_count=boundary_components,
        face_words=tuple(face_words),
    )


def euler(sc: SurfaceComplex) -> int:
    return sc.euler_characteristic


def genus_report(sc: SurfaceComplex, target) -> dict:
    """Summary of the assembled surface against the target.

    For an orientable surface with one boundary component the complexity
    parameter (1 - chi)/2 is the genus; otherwise it is reported as the
    general spanning-surface parameter, possibly a half-integer.
    """
    x = sc.euler_characteristic
    param = Fraction(1 - x, 2)
    is_genus = sc.orientable and sc.boundary_component_count == 1
    return {
        "chi": x,
        "orientable": sc.orientable,
        "connected": sc.connected,
        "boundary_components": sc.boundary_component_count,
        "parameter": str(param),
        "parameter_is_genus": is_genus,
        "matches_target": x == target.chi,
    }
