"""Curves on the upper or lower sphere of a diagram.

A curve is a cyclic sequence of *stations* together with the kind of arc
('i' interior / 'b' boundary) filling each gap between consecutive stations:

* ``BPoint(edge, side, index)`` -- a twist point on an edge, where one
  interior arc leaves into the face on the given side.  ``index`` is the
  twist's position among all twist points on that edge, counted along the
  edge's canonical (under end -> over end) direction.
* ``SaddlePass(crossing, side, depth)`` -- a pass over (upper sphere) or
  under (lower sphere) the ball of a crossing, beside one of the two strand
  ends there; ``depth`` distinguishes stacked passes, 0 nearest the top.

Saddle side convention.  On the upper sphere the overstrand rides the top of
the crossing ball, so a pass cannot cross it: it runs parallel to the
overstrand beside one of the two *understrand* ends (positions 0 and 2), and
its two interior arcs attach in the two quadrants flanking that end.  On the
lower sphere the roles of the strands swap.  ``side`` 0/1 selects the
position ``2*side`` end of the avoided strand.  The mirrored convention
(swapping the roles of the spheres) is available for symmetry testing; the
enumeration count is invariant under the swap.

Serialization: ``<sphere> <station> <station> ...`` with sphere ``+`` or
``-``, stations ``B(edge,side,index)`` / ``S(crossing,side,depth)``, and an
optional trailing ``| kinds`` giving the gap kinds when they are not
determined by the letters (all-B words have two interior/boundary phases).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

from .diagram import Diagram, Quadrant
from .words import BSWord

UPPER = "+"
LOWER = "-"

INTERIOR = "i"
BOUNDARY = "b"


@dataclass(frozen=True, order=True)
class BPoint:
    edge: int
    side: str
    index: int

    def serialize(self) -> str:
        return f"B({self.edge},{self.side},{self.index})"


@dataclass(frozen=True, order=True)
class SaddlePass:
    crossing: int
    side: int
    depth: int

    def serialize(self) -> str:
        return f"S({self.crossing},{self.side},{self.depth})"


Station = Union[BPoint, SaddlePass]


def pass_corners(side: int, sphere: str, mirrored: bool = False) -> tuple[int, int]:
    """The two quadrant corners where the interior arcs of a pass attach.

    The pass straddles strand end ``2*side`` (understrand ends for the upper
    sphere, overstrand ends for the lower); the flanking corners are
    ``(end-1, end)`` in quadrant numbering.
    """
    straddle_under = (sphere == UPPER) != mirrored
    end = 2 * side if straddle_under else 2 * side + 1
    return ((end + 3) % 4, end)


def saddle_attachments(s: SaddlePass, d: Diagram, sphere: str = UPPER,
                       mirrored: bool = False) -> tuple[Quadrant, Quadrant]:
    """The two quadrants a pass connects under the side convention."""
    q1, q2 = pass_corners(s.side, sphere, mirrored)
    return (Quadrant(s.crossing, q1), Quadrant(s.crossing, q2))


@dataclass(frozen=True)
class Curve:
    sphere: str
    stations: tuple[Station, ...]
    kinds: tuple[str, ...]

    def __post_init__(self):
        if self.sphere not in (UPPER, LOWER):
            raise ValueError(f"sphere must be '+' or '-': {self.sphere!r}")
        if len(self.stations) != len(self.kinds):
            raise ValueError("need one gap kind per station")

    def __len__(self) -> int:
        return len(self.stations)

    def gap(self, i: int) -> tuple[Station, Station, str]:
        """Stations and kind of the gap following station i."""
        n = len(self.stations)
        return (self.stations[i], self.stations[(i + 1) % n], self.kinds[i])

    def serialize(self) -> str:
        body = " ".join(s.serialize() for s in self.stations)
        return f"{self.sphere} {body} | {''.join(self.kinds)}"

    def canonical(self) -> "Curve":
        """Least serialized form over rotations and reversal (a curve is an
        unoriented cyclic object)."""
        n = len(self.stations)
        if n == 0:
            return self
        best = None
        for st, kd in (self.stations, self.kinds), _reversed_data(self):
            for k in range(n):
                cand = Curve(self.sphere, st[k:] + st[:k], kd[k:] + kd[:k])
                s = cand.serialize()
                if best is None or s < best[0]:
                    best = (s, cand)
        return best[1]


def _reversed_data(c: Curve) -> tuple[tuple[Station, ...], tuple[str, ...]]:
    # Reversing station order sends the gap after station i (old index i) to
    # the gap after the station that precedes it in the new order.
    n = len(c.stations)
    st = tuple(reversed(c.stations))
    kd = tuple(c.kinds[(n - 2 - i) % n] for i in range(n))
    return st, kd


def word_of(c: Curve) -> BSWord:
    return BSWord(
        "".join("B" if isinstance(s, BPoint) else "S" for s in c.stations)
    )


def infer_kinds(letters: str, phase: int = 0) -> tuple[str, ...]:
    """Gap kinds forced by the letters.

    Every S has interior arcs on both sides and every B has one interior and
    one boundary arc, which pins all kinds except for all-B words, where
    ``phase`` selects which alternating family of gaps is boundary.
    """
    n = len(letters)
    if "S" not in letters:
        if n % 2:
            raise ValueError("all-B word of odd length has no kind assignment")
        return tuple(
            BOUNDARY if i % 2 == phase % 2 else INTERIOR for i in range(n)
        )
    kinds = [None] * n
    for i, ch in enumerate(letters):
        if ch == "S":
            kinds[i] = INTERIOR
            kinds[(i - 1) % n] = INTERIOR
    # Inside each maximal B-run the kinds alternate away from the flanking
    # interior gaps.
    for i in range(n):
        if kinds[i] is None:
            j = i
            while kinds[(j - 1) % n] is None:
                j = (j - 1) % n
            # gap (j-1) is the first unset gap of the run; the gap before the
            # run is interior, so the run starts with a boundary arc.
            k = j
            kind = BOUNDARY
            while kinds[k] is None:
                kinds[k] = kind
                kind = INTERIOR if kind == BOUNDARY else BOUNDARY
                k = (k + 1) % n
    return tuple(kinds)


def kinds_consistent(c: Curve) -> bool:
    """Each B has one interior and one boundary gap; each S two interior."""
    n = len(c.stations)
    for i, st in enumerate(c.stations):
        before, after = c.kinds[(i - 1) % n], c.kinds[i]
        if isinstance(st, SaddlePass):
            if before != INTERIOR or after != INTERIOR:
                return False
        else:
            if {before, after} != {INTERIOR, BOUNDARY}:
                return False
    return True


_CURVE_RE = re.compile(
    r"([BS])\((\d+),(\w+),(\d+)\)$"
)


def parse_curve(text: str) -> Curve:
    parts = text.split()
    if len(parts) < 2 or parts[0] not in (UPPER, LOWER):
        raise ValueError(f"curve text must start with '+' or '-': {text!r}")
    kinds = None
    if "|" in parts:
        bar = parts.index("|")
        if bar != len(parts) - 2:
            raise ValueError(f"misplaced kind block in {text!r}")
        kinds = tuple(parts[-1])
        parts = parts[:bar]
    stations = []
    for tok in parts[1:]:
        m = _CURVE_RE.match(tok)
        if not m:
            raise ValueError(f"malformed station {tok!r}")
        kind, a, b, c = m.groups()
        if kind == "B":
            if b not in ("L", "R"):
                raise ValueError(f"bad edge side in {tok!r}")
            stations.append(BPoint(int(a), b, int(c)))
        else:
            stations.append(SaddlePass(int(a), int(b), int(c)))
    if kinds is None:
        letters = "".join("B" if isinstance(s, BPoint) else "S" for s in stations)
        kinds = infer_kinds(letters)
    return Curve(parts[0], tuple(stations), tuple(kinds))


# -- realizability -----------------------------------------------------------


@dataclass(frozen=True)
class RealizabilityResult:
    ok: bool
    rule: str = ""
    detail: str = ""

    def __bool__(self) -> bool:
        return self.ok


def _fail(rule: str, detail: str) -> RealizabilityResult:
    return RealizabilityResult(False, rule, detail)


def _boundary_gap_ok(c: Curve, d: Diagram, u: BPoint, v: BPoint) -> bool:
    """Can a run along the link join u to v without meeting another station
    of this curve and crossing only passages on the curve's sphere?"""
    own = {(s.edge, s.index): s for s in c.stations if isinstance(s, BPoint)}
    for direction in (1, -1):
        if _walk_link(c, d, u, v, own, direction):
            return True
    return False


def _walk_link(c, d, u, v, own, direction) -> bool:
    # direction +1 walks toward the over end of u's edge, -1 toward under.
    edge = u.edge
    forward = direction == 1
    index = u.index
    for _hop in range(8 * d.n + len(c.stations) + 2):
        nxt = index + (1 if forward else -1)
        candidates = [
            i for (e, i) in own if e == edge
            and ((forward and i > index) or (not forward and i < index))
        ]
        if candidates:
            i = min(candidates) if forward else max(candidates)
            return own[(edge, i)] == v
        # No station of the curve remains on this edge segment; cross the
        # passage at the far end if the sphere allows it.
        e = d.edges[edge]
        exit_dart = e.over_dart if forward else e.under_dart
        over_passage = forward
        if (c.sphere == UPPER) != over_passage:
            return False
        jump = (exit_dart[0], (exit_dart[1] + 2) % 4)
        nxt_edge = d.edges[d.crossings[jump[0]].edge_ends[jump[1]]]
        forward = jump == nxt_edge.under_dart
        edge = nxt_edge.label
        index = -1 if forward else 10 ** 9
    return False


def is_realizable(c: Curve, d: Diagram, mirrored: bool = False) -> RealizabilityResult:
    """Per-curve realizability on a validated diagram.

    Checks, with rule codes matching the configuration checker: (2) no
    crossing is passed twice, (4) no edge side carries two interior-arc
    endpoints of the curve, (6) no interior arc joins a pass to a twist on
    an edge of its own crossing; plus structural gap-kind consistency, a
    consistent face assignment for every interior gap, and link-walk
    feasibility of every boundary gap.
    """
    if not kinds_consistent(c):
        return _fail("kinds", "gap kinds violate per-station incidences")

    passes = [s for s in c.stations if isinstance(s, SaddlePass)]
    seen_crossings = set()
    for s in passes:
        if s.crossing in seen_crossings:
            return _fail("2", f"crossing {s.crossing} passed twice")
        seen_crossings.add(s.crossing)

    bpoints = [s for s in c.stations if isinstance(s, BPoint)]
    seen_sides = set()
    for s in bpoints:
        if (s.edge, s.side) in seen_sides:
            return _fail("4", f"two interior arcs on side {s.side} of edge {s.edge}")
        seen_sides.add((s.edge, s.side))
        if s.edge not in d.edges:
            return _fail("edge", f"no edge {s.edge}")

    n = len(c.stations)
    for i in range(n):
        a, b, kind = c.gap(i)
        if kind != INTERIOR:
            continue
        for s, t in ((a, b), (b, a)):
            if isinstance(s, SaddlePass) and isinstance(t, BPoint):
                if t.edge in d.crossings[s.crossing].edge_ends:
                    return _fail(
                        "6",
                        f"pass at crossing {s.crossing} joined to a twist on "
                        f"adjacent edge {t.edge}",
                    )

    if not _interior_faces_consistent(c, d, mirrored):
        return _fail("faces", "some interior gap has no common face")

    for i in range(n):
        a, b, kind = c.gap(i)
        if kind == BOUNDARY and not _boundary_gap_ok(c, d, a, b):
            return _fail("boundary", f"no link run joins {a.serialize()} to {b.serialize()}")
    return RealizabilityResult(True)


def _interior_faces_consistent(c: Curve, d: Diagram, mirrored: bool) -> bool:
    """Try to assign each pass's two corners to its two interior gaps so
    every interior gap lives in one face."""
    n = len(c.stations)
    passes = [i for i, s in enumerate(c.stations) if isinstance(s, SaddlePass)]

    def faces_of(i: int, gap: int, flip: dict) -> set[int]:
        st = c.stations[i]
        if isinstance(st, BPoint):
            return {d.edge_side_face(st.edge, st.side).index}
        q1, q2 = pass_corners(st.side, c.sphere, mirrored)
        # gap is the index of the gap (i-1 = before, i = after).
        first = (q1, q2) if not flip.get(i) else (q2, q1)
        corner = first[0] if gap == (i - 1) % n else first[1]
        return {d.quadrant_face(st.crossing, corner).index}

    def ok(flip: dict) -> bool:
        for g in range(n):
            if c.kinds[g] != INTERIOR:
                continue
            a, b = g, (g + 1) % n
            if not (faces_of(a, g, flip) & faces_of(b, g, flip)):
                return False
        return True

    def solve(k: int, flip: dict) -> bool:
        if k == len(passes):
            return ok(flip)
        for val in (False, True):
            flip[passes[k]] = val
            if solve(k + 1, flip):
                return True
        del flip[passes[k]]
        return False

    return solve(0, {})


def resolve_pass_corners(c: Curve, d: Diagram, mirrored: bool = False
                         ) -> dict[int, tuple[int, int]] | None:
    """For each pass station index, the corners assigned to (gap before,
    gap after), from the first consistent assignment; None if none exists."""
    n = len(c.stations)
    passes = [i for i, s in enumerate(c.stations) if isinstance(s, SaddlePass)]

    def attempt(flips: dict) -> dict | None:
        out = {}
        for i in passes:
            st = c.stations[i]
            q1, q2 = pass_corners(st.side, c.sphere, mirrored)
            out[i] = (q2, q1) if flips[i] else (q1, q2)
        for g in range(n):
            if c.kinds[g] != INTERIOR:
                continue
            faces = []
            for idx, which in ((g, "after"), ((g + 1) % n, "before")):
                st = c.stations[idx]
                if isinstance(st, BPoint):
                    faces.append(d.edge_side_face(st.edge, st.side).index)
                else:
                    corner = out[idx][0] if which == "before" else out[idx][1]
                    faces.append(d.quadrant_face(st.crossing, corner).index)
            if faces[0] != faces[1]:
                return None
        return out

    import itertools

    for vals in itertools.product((False, True), repeat=len(passes)):
        result = attempt(dict(zip(passes, vals)))
        if result is not None:
            return result
    return None
