"""Generation of alternating two-bridge diagrams from twist vectors.

``two_bridge_pd([a1, a2, ..., ak])`` builds the standard alternating diagram
obtained from the zero tangle by ``a1`` twists of the two east endpoints,
``a2`` twists of the two south endpoints, and so on alternately, followed by
the numerator closure.  The result is returned as PD text.

The construction works on the unoriented 4-valent map: over/under data is
assigned afterwards from the checkerboard face coloring (the two global
choices are tried and the one that parses as alternating is kept), strands
are oriented, and edges are labelled 1..2n in strand order.
"""

from __future__ import annotations

from .diagram import Diagram, DiagramError, parse_pd

# Crossing slots 0..3 counterclockwise: NW, SW, SE, NE.
_NW, _SW, _SE, _NE = 0, 1, 2, 3


class _MapBuilder:
    def __init__(self):
        self.n = 0
        self.edges: list[tuple[tuple[int, int], tuple[int, int]]] = []
        # Loose ends of the four tangle endpoints: a crossing slot, or the
        # name of the opposite endpoint while the initial strand is uncut.
        self.loose = {"nw": "ne", "ne": "nw", "sw": "se", "se": "sw"}

    def _attach(self, end: str, slot: tuple[int, int]) -> None:
        cur = self.loose[end]
        if isinstance(cur, str):
            self.loose[cur] = slot
        else:
            self.edges.append((cur, slot))

    def new_crossing(self) -> int:
        self.n += 1
        return self.n - 1

    def twist_east(self) -> None:
        c = self.new_crossing()
        self._attach("ne", (c, _NW))
        self._attach("se", (c, _SW))
        self.loose["ne"] = (c, _NE)
        self.loose["se"] = (c, _SE)

    def twist_south(self) -> None:
        c = self.new_crossing()
        self._attach("sw", (c, _NW))
        self._attach("se", (c, _NE))
        self.loose["sw"] = (c, _SW)
        self.loose["se"] = (c, _SE)

    def close_numerator(self) -> None:
        for a, b in (("nw", "ne"), ("sw", "se")):
            ea, eb = self.loose[a], self.loose[b]
            if isinstance(ea, str) or isinstance(eb, str):
                raise ValueError("degenerate tangle: closure of an empty side")
            self.edges.append((ea, eb))


def _faces_two_coloring(n: int, alpha: dict) -> dict[tuple[int, int], int]:
    """Checkerboard-color the faces of the slot map; return dart -> color of
    the face traversed by that departure dart."""
    face_of: dict[tuple[int, int], int] = {}
    faces = []
    for c in range(n):
        for s in range(4):
            d = (c, s)
            if d in face_of:
                continue
            orbit = []
            while d not in face_of:
                face_of[d] = len(faces)
                orbit.append(d)
                arr = alpha[d]
                d = (arr[0], (arr[1] - 1) % 4)
            faces.append(orbit)
    if n - 2 * n + len(faces) != 2:
        raise ValueError("tangle closure is not planar")
    # Two faces are adjacent along every edge: the departure darts of an edge
    # lie on its two sides.
    color = {0: 0}
    stack = [0]
    seen = {0}
    adj: dict[int, set[int]] = {i: set() for i in range(len(faces))}
    for d, arr in alpha.items():
        adj[face_of[d]].add(face_of[arr])
        adj[face_of[arr]].add(face_of[d])
    while stack:
        f = stack.pop()
        for g in adj[f]:
            if g not in seen:
                seen.add(g)
                color[g] = 1 - color[f]
                stack.append(g)
            elif color[g] == color[f]:
                raise ValueError("face structure is not checkerboard-colorable")
    return {d: color[face_of[d]] for d in face_of}


def _emit_pd(n: int, edges: list, black_rule: bool) -> str:
    alpha = {}
    for d1, d2 in edges:
        alpha[d1] = d2
        alpha[d2] = d1
    dart_color = _faces_two_coloring(n, alpha)

    # Corner between slots 0 and 1 is the face the departure dart (c, 0)
    # travels along; its color picks the overstrand diagonal.
    over_pair = {}
    for c in range(n):
        black = dart_color[(c, 0)] == 0
        over_pair[c] = (0, 2) if black == black_rule else (1, 3)

    # Orient strands and label edges in traversal order.
    incoming: dict[tuple[int, int], bool] = {}
    label_of: dict[frozenset, int] = {}
    next_label = 1
    for c0 in range(n):
        for s0 in range(4):
            if (c0, s0) in incoming:
                continue
            d = (c0, s0)
            while True:
                incoming[d] = True
                out = (d[0], (d[1] + 2) % 4)
                incoming[out] = False
                key = frozenset((out, alpha[out]))
                if key in label_of:
                    break
                label_of[key] = next_label
                next_label += 1
                d = alpha[out]
                if d == (c0, s0):
                    break
            # Label any edge the walk entered through rather than exited.
            break
    # The loop above labels edges component by component; make sure every
    # edge received a label (components are walked from their smallest dart).
    for c0 in range(n):
        for s0 in range(4):
            d = (c0, s0)
            key = frozenset((d, alpha[d]))
            if key not in label_of:
                label_of[key] = next_label
                next_label += 1

    tokens = []
    for c in range(n):
        unders = tuple(s for s in range(4) if s not in over_pair[c])
        a = next(s for s in unders if incoming[(c, s)])
        labels = []
        for k in range(4):
            s = (a + k) % 4
            labels.append(label_of[frozenset(((c, s), alpha[(c, s)]))])
        tokens.append("X[%d,%d,%d,%d]" % tuple(labels))
    return " ".join(tokens)


def _odd_length(twists: list[int]) -> list[int]:
    # [..., a] and [..., a-1, 1] are the same continued fraction, so every
    # vector normalizes to odd length; an odd-length vector starts and ends
    # with east twist groups, which keeps the numerator closure reduced.
    tw = list(twists)
    if len(tw) % 2 == 0:
        if tw[-1] == 1:
            tw.pop()
            tw[-1] += 1
        else:
            tw[-1] -= 1
            tw.append(1)
    return tw


def two_bridge_pd(twists: list[int]) -> str:
    """PD text of the alternating two-bridge diagram with the given twist
    vector.  The diagram has ``sum(twists)`` crossings."""
    if not twists or any(a < 1 for a in twists):
        raise ValueError("twist vector must be nonempty positive integers")
    if sum(twists) < 2:
        raise ValueError("need at least two crossings")
    tw = _odd_length(twists)
    b = _MapBuilder()
    for i in range(len(tw) - 1, -1, -1):
        op = b.twist_east if i % 2 == 0 else b.twist_south
        for _ in range(tw[i]):
            op()
    b.close_numerator()
    last_err = None
    for rule in (True, False):
        pd = _emit_pd(b.n, b.edges, rule)
        try:
            parse_pd(pd)
            return pd
        except DiagramError as e:
            last_err = e
    raise ValueError(f"two-bridge construction failed to alternate: {last_err}")


def two_bridge_diagram(twists: list[int]) -> Diagram:
    return parse_pd(two_bridge_pd(twists))


def continued_fraction(twists: list[int]) -> tuple[int, int]:
    """Numerator/denominator of the twist vector read as a continued
    fraction a1 + 1/(a2 + 1/(...))."""
    num, den = twists[-1], 1
    for a in reversed(twists[:-1]):
        num, den = a * num + den, num
    return num, den
