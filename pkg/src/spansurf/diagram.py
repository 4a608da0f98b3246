"""Alternating link diagrams as combinatorial planar maps.

A diagram is read from a PD code: whitespace-separated tokens ``X[a,b,c,d]``
listing the four edge labels around each crossing in counterclockwise order,
with ``a`` the incoming understrand.  For an ``n``-crossing diagram the labels
are 1..2n and each label appears exactly twice.

Validation computes the face structure from the rotation system and rejects
anything that is not a connected, planar, alternating diagram free of
nugatory crossings.  All face / quadrant / edge-side incidences are computed
once at parse time; downstream queries are dictionary lookups.

Conventions fixed here and used throughout the package:

* A *dart* is an edge end, written ``(crossing_index, position)`` with
  positions 0..3 counterclockwise.  Position 0 carries the incoming
  understrand, so the overstrand always occupies positions 1 and 3.
* Every edge of an alternating diagram has one end where the strand passes
  under the crossing (even position) and one where it passes over (odd
  position).  The canonical direction of an edge runs from its under end to
  its over end; twist points along an edge are indexed in this direction.
* Edge side ``L`` is the face seen when traversing the edge in its canonical
  direction starting from the under end; ``R`` is the other face.
* Quadrant ``q`` of a crossing is the corner between positions ``q`` and
  ``q+1 (mod 4)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator

Dart = tuple[int, int]

OVER_POSITIONS = (1, 3)

SIDES = ("L", "R")


class DiagramError(ValueError):
    """Base class for diagram rejection."""


class PDSyntaxError(DiagramError):
    """Malformed PD text."""


class PDConsistencyError(DiagramError):
    """Labels do not form a planar 4-valent map (wrong multiplicity,
    or the rotation system does not embed in the sphere)."""


class NotAlternatingError(DiagramError):
    """Some strand fails to alternate over/under."""


class SplitDiagramError(DiagramError):
    """The underlying 4-valent graph is disconnected."""


class NugatoryCrossingError(DiagramError):
    """Some crossing has two opposite quadrants on the same face."""


class NotPrimeError(DiagramError):
    """A two-edge cut separates crossings (connected-sum diagram)."""


@dataclass(frozen=True)
class Crossing:
    id: int
    edge_ends: tuple[int, int, int, int]
    over_pair: tuple[int, int] = OVER_POSITIONS


@dataclass(frozen=True)
class Edge:
    """An edge of the diagram with its canonical (under end -> over end)
    direction."""

    label: int
    under_dart: Dart
    over_dart: Dart

    @property
    def darts(self) -> tuple[Dart, Dart]:
        return (self.under_dart, self.over_dart)


@dataclass(frozen=True)
class EdgeSide:
    edge: int
    side: str


@dataclass(frozen=True)
class Quadrant:
    crossing: int
    corner: int


@dataclass(frozen=True)
class Face:
    """One complementary region, recorded as the aligned cyclic sequences of
    traversed edge sides and crossing corners.

    Step ``i`` travels edge ``edge_sides[i]`` (in canonical direction when
    ``forwards[i]``) and then turns through ``quadrants[i]``.
    """

    index: int
    edge_sides: tuple[EdgeSide, ...]
    forwards: tuple[bool, ...]
    quadrants: tuple[Quadrant, ...]

    @property
    def degree(self) -> int:
        return len(self.edge_sides)


_PD_TOKEN = re.compile(r"X\[\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*\]$")


def _tokenize(text: str) -> list[tuple[int, int, int, int]]:
    tokens = text.split()
    if not tokens:
        raise PDSyntaxError("empty PD text")
    out = []
    for tok in tokens:
        m = _PD_TOKEN.match(tok)
        if not m:
            raise PDSyntaxError(f"malformed PD token {tok!r}")
        out.append(tuple(int(g) for g in m.groups()))
    return out


class Diagram:
    """A validated alternating link diagram.

    Instances are immutable after construction and safe to share between
    workers.  Use :func:`parse_pd` instead of calling the constructor.
    """

    def __init__(self, quads: list[tuple[int, int, int, int]]):
        self.n = len(quads)
        self.crossings = tuple(
            Crossing(i, tuple(q)) for i, q in enumerate(quads)
        )
        self._validate_labels()
        self._check_connected()
        self._build_edges()
        self._build_faces()
        self._check_nugatory()
        self._build_strands()

    # -- construction ---------------------------------------------------

    def _validate_labels(self) -> None:
        incidence: dict[int, list[Dart]] = {}
        for c in self.crossings:
            for pos, label in enumerate(c.edge_ends):
                incidence.setdefault(label, []).append((c.id, pos))
        expected = set(range(1, 2 * self.n + 1))
        if set(incidence) != expected:
            bad = sorted(set(incidence) ^ expected)
            raise PDConsistencyError(
                f"edge labels must be exactly 1..{2 * self.n}; offending labels {bad}"
            )
        for label, darts in incidence.items():
            if len(darts) != 2:
                raise PDConsistencyError(
                    f"label {label} used {len(darts)} times (expected 2)"
                )
        self._incidence = incidence

    def _check_connected(self) -> None:
        if self.n == 0:
            raise PDSyntaxError("empty PD text")
        seen = {0}
        stack = [0]
        while stack:
            c = stack.pop()
            for label in self.crossings[c].edge_ends:
                for (c2, _pos) in self._incidence[label]:
                    if c2 not in seen:
                        seen.add(c2)
                        stack.append(c2)
        if len(seen) != self.n:
            raise SplitDiagramError(
                f"diagram is split: only {len(seen)} of {self.n} crossings reachable"
            )

    def _build_edges(self) -> None:
        edges = {}
        for label, (d1, d2) in self._incidence.items():
            p1_over = d1[1] in OVER_POSITIONS
            p2_over = d2[1] in OVER_POSITIONS
            if p1_over == p2_over:
                raise NotAlternatingError(
                    f"edge {label} meets two {'over' if p1_over else 'under'} passages"
                )
            under, over = (d2, d1) if p1_over else (d1, d2)
            edges[label] = Edge(label, under, over)
        self.edges: dict[int, Edge] = edges
        self.edge_labels = tuple(sorted(edges))

    def _alpha(self, dart: Dart) -> Dart:
        d1, d2 = self._incidence[self.crossings[dart[0]].edge_ends[dart[1]]]
        return d2 if dart == d1 else d1

    def _build_faces(self) -> None:
        # Faces are orbits of departure darts under d -> sigma^{-1}(alpha(d)),
        # which walks each region boundary with the region kept on one side.
        next_dep = {}
        for c in self.crossings:
            for pos in range(4):
                arr = self._alpha((c.id, pos))
                next_dep[(c.id, pos)] = (arr[0], (arr[1] - 1) % 4)
        faces = []
        seen: set[Dart] = set()
        for c in self.crossings:
            for pos in range(4):
                start = (c.id, pos)
                if start in seen:
                    continue
                sides, fwds, quads = [], [], []
                d = start
                while True:
                    seen.add(d)
                    edge = self.edges[self.crossings[d[0]].edge_ends[d[1]]]
                    forward = d == edge.under_dart
                    sides.append(EdgeSide(edge.label, "L" if forward else "R"))
                    fwds.append(forward)
                    arr = self._alpha(d)
                    quads.append(Quadrant(arr[0], (arr[1] - 1) % 4))
                    d = next_dep[d]
                    if d == start:
                        break
                faces.append(
                    Face(len(faces), tuple(sides), tuple(fwds), tuple(quads))
                )
        self.faces = tuple(faces)
        if self.n - 2 * self.n + len(faces) != 2:
            raise PDConsistencyError(
                f"rotation system is not planar: v-e+f = "
                f"{self.n - 2 * self.n + len(faces)} (expected 2)"
            )
        self._edge_side_face = {}
        self._quadrant_face = {}
        for face in faces:
            for es in face.edge_sides:
                self._edge_side_face[(es.edge, es.side)] = face
            for q in face.quadrants:
                self._quadrant_face[(q.crossing, q.corner)] = face

    def _check_nugatory(self) -> None:
        for c in self.crossings:
            for q in range(2):
                if self._quadrant_face[(c.id, q)] is self._quadrant_face[(c.id, q + 2)]:
                    raise NugatoryCrossingError(
                        f"crossing {c.id} has opposite quadrants on one face"
                    )

    def _build_strands(self) -> None:
        # Each strand is a cyclic sequence of (edge label, forward?) visits;
        # a forward visit runs under end -> over end and exits through the
        # over passage of the crossing at its far end.
        visited: set[int] = set()
        strands = []
        for label in self.edge_labels:
            if label in visited:
                continue
            cycle = []
            edge, forward = self.edges[label], True
            while edge.label not in visited:
                visited.add(edge.label)
                cycle.append((edge.label, forward))
                exit_dart = edge.over_dart if forward else edge.under_dart
                jump = (exit_dart[0], (exit_dart[1] + 2) % 4)
                nxt = self.edges[self.crossings[jump[0]].edge_ends[jump[1]]]
                # Entering the next edge at an over end means running it
                # against its canonical direction.
                forward = jump == nxt.under_dart
                edge = nxt
            strands.append(tuple(cycle))
        self.strands = tuple(strands)
        self.component_count = len(strands)

    # -- queries ---------------------------------------------------------

    @property
    def crossing_count(self) -> int:
        return self.n

    def edge_side_face(self, edge: int, side: str) -> Face:
        return self._edge_side_face[(edge, side)]

    def quadrant_face(self, crossing: int, corner: int) -> Face:
        return self._quadrant_face[(crossing, corner % 4)]

    def edge_faces(self, edge: int) -> tuple[Face, Face]:
        return (self.edge_side_face(edge, "L"), self.edge_side_face(edge, "R"))

    def edges_at_crossing(self, crossing: int) -> tuple[int, int, int, int]:
        return self.crossings[crossing].edge_ends

    @cached_property
    def _prime(self) -> bool:
        # A connected-sum neck is a pair of distinct edges bordering the same
        # two faces: the dual two-cycle through them is a simple closed curve
        # crossing the diagram in exactly two points with crossings on both
        # sides.  In a 4-valent map this is the only kind of 2-edge cut.
        by_face_pair: dict[frozenset[int], int] = {}
        for label in self.edge_labels:
            fl, fr = self.edge_faces(label)
            key = frozenset((fl.index, fr.index))
            if key in by_face_pair:
                return False
            by_face_pair[key] = label
        return True

    def is_prime(self) -> bool:
        return self._prime

    @cached_property
    def _two_braid_closure(self) -> bool:
        # Standard closed 2-braid pattern: every crossing sits between two
        # bigon faces occupying opposite corners, and there are n bigons.
        if self.n < 2:
            return False
        if self.n == 2:
            return True
        bigons = [f for f in self.faces if f.degree == 2]
        if len(bigons) != self.n:
            return False
        bigon_ids = {f.index for f in bigons}
        for c in self.crossings:
            corners = [
                q
                for q in range(4)
                if self._quadrant_face[(c.id, q)].index in bigon_ids
            ]
            if len(corners) != 2 or (corners[0] + 2) % 4 != corners[1] % 4:
                return False
        return True

    def is_two_braid_closure(self) -> bool:
        """True for the standard alternating closed 2-braid diagrams."""
        return self._two_braid_closure

    # -- link traversal helpers -------------------------------------------

    def strand_of_edge(self, edge: int) -> tuple[int, int]:
        """(strand index, position of the edge's visit in that strand)."""
        return self._strand_pos[edge]

    @cached_property
    def _strand_pos(self) -> dict[int, tuple[int, int]]:
        out = {}
        for si, cycle in enumerate(self.strands):
            for pos, (label, _fwd) in enumerate(cycle):
                out[label] = (si, pos)
        return out

    def to_pd(self) -> str:
        return " ".join(
            "X[%d,%d,%d,%d]" % c.edge_ends for c in self.crossings
        )

    def __repr__(self) -> str:
        return f"<Diagram n={self.n} components={self.component_count}>"


def parse_pd(text: str) -> Diagram:
    """Parse and validate a PD code.

    Raises a :class:`DiagramError` subclass naming the first failed
    validation: syntax, label consistency, connectivity, planarity,
    alternation, or a nugatory crossing.
    """
    return Diagram(_tokenize(text))


def faces(d: Diagram) -> tuple[Face, ...]:
    return d.faces


def is_prime(d: Diagram) -> bool:
    """True iff no simple closed curve meets the diagram in exactly two edge
    points with crossings on both sides."""
    return d.is_prime()


def quadrant_face(d: Diagram, q: Quadrant) -> Face:
    return d.quadrant_face(q.crossing, q.corner)


def edge_side_face(d: Diagram, s: EdgeSide) -> Face:
    return d.edge_side_face(s.edge, s.side)


def parse_table(text: str) -> Iterator[tuple[str, str]]:
    """Yield (name, pd) records from a knot-table file.

    One record per line, ``name<TAB>pd-code``; lines starting with ``#`` and
    blank lines are skipped.
    """
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "\t" not in line:
            raise PDSyntaxError(f"table line {lineno}: missing tab separator")
        name, pd = line.split("\t", 1)
        yield name.strip(), pd.strip()
