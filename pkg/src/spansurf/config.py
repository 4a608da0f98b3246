"""Whole-configuration model: a curve system on both spheres.

A configuration holds the curves of both spheres, the linear order of twist
points along every edge, and the number of saddles stacked at each crossing.
The two sphere readings are coupled: every twist point carries exactly one
interior arc, shared by one upper and one lower curve, and the runs along
the link between consecutive twist points alternate between the two
spheres (the surface collar switches sides at every twist and must ride the
matching strand through every crossing passage).

Configuration-level rule codes extend the word rules 7..10 of
:mod:`spansurf.words`:

* 2 -- no curve passes the same crossing ball twice
* 3 -- every edge carries at least one twist point
* 4 -- no curve has two interior-arc endpoints on one edge side
* 5 -- at every crossing, equally many passes on both sides of each sphere,
       matching the saddle count
* 6 -- no interior arc joins a pass to a twist on an edge of its crossing

plus structural codes ``BBBB`` (excluded words), ``cap-c1`` / ``cap-len`` /
``cap-c2`` (curve-class and word-length caps), ``budget`` (total saddles),
``sharing`` (twist points used once per sphere), ``collar`` (link runs fail
to alternate), ``arcs`` (interior arcs do not match across the spheres),
``noncross`` (arcs forced to intersect inside a face), and ``chi`` (wrong
Euler-characteristic total).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .curves import (
    BOUNDARY,
    INTERIOR,
    LOWER,
    UPPER,
    BPoint,
    Curve,
    SaddlePass,
    is_realizable,
    pass_corners,
    word_of,
)
from .diagram import Diagram
from .words import WordClass, classify, contribution, is_valid

# Attachment tokens: ('B', edge, index) twist points, ('R', crossing,
# corner, depth) saddle rays.
Token = tuple


@dataclass(frozen=True)
class TargetSpec:
    """Enumeration target: a genus (orientable, knots) or an Euler
    characteristic (general spanning surfaces)."""

    mode: str
    genus: int | None
    chi: int
    boundary_components: int

    @classmethod
    def seifert_genus(cls, g: int, b: int = 1) -> "TargetSpec":
        if g < 1:
            raise ValueError("genus must be at least 1")
        if b != 1:
            raise ValueError(
                "genus targets are defined for knots (one boundary "
                "component): use spanning_chi for links"
            )
        return cls("genus", g, 1 - 2 * g, 1)

    @classmethod
    def spanning_chi(cls, chi: int, b: int = 1) -> "TargetSpec":
        if chi > -1:
            raise ValueError("spanning targets require chi <= -1")
        if b < 1:
            raise ValueError("boundary component count must be positive")
        return cls("chi", None, chi, b)

    @property
    def saddle_budget(self) -> int:
        return -self.chi - self.boundary_components

    @property
    def c1_cap(self) -> int:
        return -4 * self.chi

    @property
    def c2_cap(self) -> int:
        return max(0, 2 * self.saddle_budget)

    @property
    def word_length_cap(self) -> int:
        # A single word contributes 1 - L/4 and no word contributes
        # positively, so no word can undershoot the whole target.
        return 4 * (1 - self.chi)

    @property
    def orientable_required(self) -> bool:
        return self.mode == "genus"

    def describe(self) -> dict:
        out = {"mode": self.mode, "chi": self.chi, "b": self.boundary_components}
        if self.genus is not None:
            out["genus"] = self.genus
        return out


@dataclass(frozen=True)
class Configuration:
    curves: tuple[Curve, ...]
    edge_orders: tuple[tuple[int, str], ...]
    saddle_counts: tuple[tuple[int, int], ...]
    target: TargetSpec

    @property
    def edge_orders_dict(self) -> dict[int, str]:
        return dict(self.edge_orders)

    @property
    def saddle_dict(self) -> dict[int, int]:
        return dict(self.saddle_counts)

    def sphere_curves(self, sphere: str) -> tuple[Curve, ...]:
        return tuple(c for c in self.curves if c.sphere == sphere)

    def serialize(self) -> str:
        lines = [c.serialize() for c in self.curves]
        eo = ";".join(f"{e}:{s}" for e, s in self.edge_orders)
        sc = ";".join(f"{c}:{k}" for c, k in self.saddle_counts)
        return "\n".join(lines + [f"edges {eo}", f"saddles {sc}"])

    def to_json_dict(self) -> dict:
        return {
            "curves": [c.serialize() for c in self.curves],
            "edge_orders": {str(e): s for e, s in self.edge_orders},
            "saddle_counts": {str(c): k for c, k in self.saddle_counts},
            "chi": str(chi(self)),
        }


def make_configuration(curves, edge_orders: dict[int, str],
                       saddle_counts: dict[int, int],
                       target: TargetSpec) -> Configuration:
    return Configuration(
        tuple(curves),
        tuple(sorted(edge_orders.items())),
        tuple(sorted((c, k) for c, k in saddle_counts.items() if k > 0)),
        target,
    )


def configuration_from_json(data: dict, target: TargetSpec) -> Configuration:
    from .curves import parse_curve

    curves = tuple(parse_curve(s) for s in data["curves"])
    edge_orders = {int(e): s for e, s in data["edge_orders"].items()}
    saddles = {int(c): int(k) for c, k in data.get("saddle_counts", {}).items()}
    return make_configuration(curves, edge_orders, saddles, target)


def chi(cfg: Configuration) -> Fraction:
    """Exact Euler-characteristic total of the configuration's words."""
    return sum(
        (contribution(word_of(c)) for c in cfg.curves), start=Fraction(0)
    )


def canonical_config(cfg: Configuration) -> Configuration:
    curves = sorted(
        (c.canonical() for c in cfg.curves),
        key=lambda c: (c.sphere != UPPER, c.serialize()),
    )
    return Configuration(
        tuple(curves),
        tuple(sorted(cfg.edge_orders)),
        tuple(sorted((c, k) for c, k in cfg.saddle_counts if k > 0)),
        cfg.target,
    )


@dataclass(frozen=True)
class ValidationResult:
    ok: bool
    rule: str = ""
    detail: str = ""

    def __bool__(self) -> bool:
        return self.ok


def _fail(rule: str, detail: str) -> ValidationResult:
    return ValidationResult(False, rule, detail)


_PASS = ValidationResult(True)


# -- link walk ---------------------------------------------------------------


@dataclass(frozen=True)
class LinkWalk:
    """Twist points in cyclic link order with the sphere owning each run
    between consecutive twists."""

    # per component: tuple of twist tokens in link order
    twist_cycles: tuple[tuple[Token, ...], ...]
    # segments owned by the upper sphere: frozenset of (token, token) pairs
    upper_segments: frozenset
    lower_segments: frozenset


def _segment_key(u: Token, v: Token) -> tuple:
    return (u, v) if u <= v else (v, u)


def link_walk(d: Diagram, edge_orders: dict[int, str]) -> LinkWalk | None:
    """Order all twist points along the link and split the complementary
    runs between the spheres.  Returns None when the runs cannot alternate
    (some edge carries an even number of twists)."""
    cycles = []
    upper, lower = set(), set()
    for strand in d.strands:
        events = []  # ('T', token) or ('P', rides_upper)
        for edge, forward in strand:
            count = len(edge_orders.get(edge, ""))
            idxs = range(count) if forward else range(count - 1, -1, -1)
            events.extend(("T", ("B", edge, i)) for i in idxs)
            # A forward visit exits through the crossing where the strand
            # goes over, which rides the upper sphere.
            events.append(("P", forward))
        twists = [ev[1] for ev in events if ev[0] == "T"]
        if not twists:
            return None
        m = len(twists)
        if m % 2:
            return None
        # side[j] of the run following twist j: True = upper.
        side = [None] * m
        j = -1
        for ev in events:
            if ev[0] == "T":
                j += 1
            else:
                rides_upper = ev[1]
                jj = j % m  # passages before the first twist close the cycle
                if side[jj] is not None and side[jj] != rides_upper:
                    return None
                side[jj] = rides_upper
        anchor = next(i for i, s in enumerate(side) if s is not None)
        for i in range(m):
            j = (anchor + i) % m
            expect = side[anchor] if i % 2 == 0 else not side[anchor]
            if side[j] is None:
                side[j] = expect
            elif side[j] != expect:
                return None
        for i in range(m):
            seg = _segment_key(twists[i], twists[(i + 1) % m])
            (upper if side[i] else lower).add(seg)
        cycles.append(tuple(twists))
    return LinkWalk(tuple(cycles), frozenset(upper), frozenset(lower))


# -- interior arc resolution --------------------------------------------------


def _gap_tokens(c: Curve, flips: dict[int, bool], mirrored: bool
                ) -> list[tuple[str, Token, Token]]:
    """Per gap: (kind, token of the first station, token of the second),
    under the given pass-corner orientation flips; face consistency is
    checked by the caller."""
    n = len(c.stations)
    out = []
    for g in range(n):
        a, b, kind = c.gap(g)
        ta = _station_token(c, g, g, flips, mirrored, end="after")
        tb = _station_token(c, (g + 1) % n, g, flips, mirrored, end="before")
        out.append((kind, ta, tb))
    return out


def _station_token(c: Curve, idx: int, gap: int, flips, mirrored, end: str
                   ) -> Token:
    st = c.stations[idx]
    if isinstance(st, BPoint):
        return ("B", st.edge, st.index)
    q1, q2 = pass_corners(st.side, c.sphere, mirrored)
    if flips.get(idx):
        q1, q2 = q2, q1
    corner = q1 if end == "before" else q2
    return ("R", st.crossing, corner, st.depth)


def _token_face_with(t: Token, d: Diagram, edge_orders: dict[int, str]) -> int:
    if t[0] == "B":
        _tag, edge, index = t
        side = edge_orders[edge][index]
        return d.edge_side_face(edge, side).index
    _tag, crossing, corner, _depth = t
    return d.quadrant_face(crossing, corner).index


@dataclass(frozen=True)
class Resolution:
    """Gap tokens for every curve plus the shared interior-arc set."""

    gaps: tuple[tuple, ...]  # aligned with cfg.curves
    arcs: frozenset  # frozenset of frozenset({token, token})


def resolve_interior_arcs(cfg: Configuration, d: Diagram,
                          mirrored: bool = False) -> Resolution | None:
    """Assign pass corners so that both spheres produce the same interior
    arc set, each arc used once per sphere."""
    edge_orders = cfg.edge_orders_dict

    def token_face(t: Token) -> int:
        return _token_face_with(t, d, edge_orders)

    per_curve = []
    for c in cfg.curves:
        pass_idx = [i for i, s in enumerate(c.stations)
                    if isinstance(s, SaddlePass)]
        options = []
        seen = set()
        for vals in itertools.product((False, True), repeat=len(pass_idx)):
            flips = dict(zip(pass_idx, vals))
            gaps = _gap_tokens(c, flips, mirrored)
            if any(
                kind == INTERIOR and token_face(ta) != token_face(tb)
                for kind, ta, tb in gaps
            ):
                continue
            key = tuple(gaps)
            if key not in seen:
                seen.add(key)
                options.append(gaps)
        if not options:
            return None
        per_curve.append(options)

    upper_idx = [i for i, c in enumerate(cfg.curves) if c.sphere == UPPER]
    lower_idx = [i for i, c in enumerate(cfg.curves) if c.sphere == LOWER]

    def arc_sets(indices: list[int]) -> dict[frozenset, list]:
        """All achievable arc sets for one sphere -> chosen gap lists."""
        results: dict[frozenset, list] = {}

        def rec(k: int, arcs: set, chosen: list):
            if k == len(indices):
                results.setdefault(frozenset(arcs), list(chosen))
                return
            for gaps in per_curve[indices[k]]:
                new = []
                ok = True
                for kind, ta, tb in gaps:
                    if kind != INTERIOR:
                        continue
                    arc = frozenset((ta, tb))
                    if len(arc) != 2 or arc in arcs or arc in new:
                        ok = False
                        break
                    new.append(arc)
                if not ok:
                    continue
                arcs.update(new)
                chosen.append(gaps)
                rec(k + 1, arcs, chosen)
                chosen.pop()
                arcs.difference_update(new)

        rec(0, set(), [])
        return results

    upper_sets = arc_sets(upper_idx)
    lower_sets = arc_sets(lower_idx)
    common = sorted(
        set(upper_sets) & set(lower_sets),
        key=lambda s: sorted(tuple(sorted(a)) for a in s),
    )
    if not common:
        return None
    arcs = common[0]
    gaps: list = [None] * len(cfg.curves)
    for i, chosen in zip(upper_idx, upper_sets[arcs]):
        gaps[i] = tuple(chosen)
    for i, chosen in zip(lower_idx, lower_sets[arcs]):
        gaps[i] = tuple(chosen)
    return Resolution(tuple(gaps), arcs)


# -- face attachment cycles ---------------------------------------------------


def face_attachment_cycle(d: Diagram, face, edge_orders: dict[int, str],
                          saddle_counts: dict[int, int]) -> list[Token]:
    """All attachment points on the face boundary in cyclic order.

    Twist points appear along each traversed edge side in traversal
    direction; stacked saddle rays appear at their quadrant in depth order.
    """
    pts: list[Token] = []
    for es, fwd, quad in zip(face.edge_sides, face.forwards, face.quadrants):
        sides = edge_orders.get(es.edge, "")
        idxs = [i for i, s in enumerate(sides) if s == es.side]
        if not fwd:
            idxs.reverse()
        pts.extend(("B", es.edge, i) for i in idxs)
        k = saddle_counts.get(quad.crossing, 0)
        pts.extend(("R", quad.crossing, quad.corner, dep) for dep in range(k))
    return pts


def noncrossing_in_face(points: list[Token], arcs: list[frozenset]) -> bool:
    pos = {p: i for i, p in enumerate(points)}
    spans = []
    for arc in arcs:
        a, b = sorted(pos[t] for t in arc)
        spans.append((a, b))
    for (a1, b1), (a2, b2) in itertools.combinations(spans, 2):
        in1 = (a1 < a2 < b1) != (a1 < b2 < b1)
        if in1:
            return False
    return True


# -- the checker --------------------------------------------------------------


def check(cfg: Configuration, d: Diagram, mirrored: bool = False
          ) -> ValidationResult:
    """Verify every configuration-level rule; returns the first violation."""
    target = cfg.target

    # Word-level rules.
    for c in cfg.curves:
        w = word_of(c)
        chk = is_valid(w)
        if not chk:
            return _fail(str(chk.codes[0]), f"curve {c.serialize()!r}: invalid word")
    for c in cfg.curves:
        if classify(word_of(c)) is WordClass.IGNORABLE_BBBB:
            return _fail("BBBB", "configurations exclude BBBB curves")

    # Caps.
    classes = [classify(word_of(c)) for c in cfg.curves]
    n_c1 = sum(1 for k in classes if k is WordClass.C1)
    n_c2 = sum(1 for k in classes if k is WordClass.C2_BBSS)
    if n_c1 > target.c1_cap:
        return _fail("cap-c1", f"{n_c1} essential curves exceed cap {target.c1_cap}")
    for c in cfg.curves:
        if len(c) > target.word_length_cap:
            return _fail(
                "cap-len",
                f"word length {len(c)} exceeds cap {target.word_length_cap}",
            )
    if n_c2 > target.c2_cap:
        return _fail("cap-c2", f"{n_c2} BBSS curves exceed cap {target.c2_cap}")

    # Saddle budget.
    saddles = cfg.saddle_dict
    total_saddles = sum(saddles.values())
    if total_saddles > target.saddle_budget:
        return _fail(
            "budget",
            f"{total_saddles} saddles exceed budget {target.saddle_budget}",
        )

    # Edge coverage.
    edge_orders = cfg.edge_orders_dict
    for label in d.edge_labels:
        if len(edge_orders.get(label, "")) < 1:
            return _fail("3", f"edge {label} carries no twist point")
    for label, sides in edge_orders.items():
        if label not in d.edges:
            return _fail("sharing", f"edge orders reference unknown edge {label}")
        if any(s not in "LR" for s in sides):
            return _fail("sharing", f"bad side letters on edge {label}")

    # Per-curve realizability (rules 2, 4, 6 and face threading).
    for c in cfg.curves:
        r = is_realizable(c, d, mirrored)
        if not r:
            return _fail(r.rule, f"curve {c.serialize()!r}: {r.detail}")

    # Twist sharing: every slot of edge_orders appears exactly once per
    # sphere, with the side recorded there.
    for sphere in (UPPER, LOWER):
        used = {}
        for c in cfg.sphere_curves(sphere):
            for s in c.stations:
                if not isinstance(s, BPoint):
                    continue
                key = (s.edge, s.index)
                if key in used:
                    return _fail("sharing", f"twist {key} used twice on {sphere}")
                used[key] = s.side
        expected = {
            (e, i): sides[i]
            for e, sides in edge_orders.items()
            for i in range(len(sides))
        }
        if used != expected:
            return _fail(
                "sharing",
                f"sphere {sphere} twists do not match the edge orders",
            )

    # Balance: saddle stacks are crossed once per depth on each side of each
    # sphere.
    for sphere in (UPPER, LOWER):
        seen = {}
        for c in cfg.sphere_curves(sphere):
            for s in c.stations:
                if isinstance(s, SaddlePass):
                    key = (s.crossing, s.side, s.depth)
                    if key in seen:
                        return _fail("5", f"pass {key} on {sphere} duplicated")
                    seen[key] = True
        expected = {
            (x, side, dep)
            for x, k in saddles.items()
            for side in (0, 1)
            for dep in range(k)
        }
        if set(seen) != expected:
            return _fail(
                "5",
                f"sphere {sphere} passes do not balance the saddle counts",
            )

    # Collar alternation and boundary-run closure.
    walk = link_walk(d, edge_orders)
    if walk is None:
        return _fail("collar", "link runs cannot alternate between spheres")
    for sphere, segs in ((UPPER, walk.upper_segments), (LOWER, walk.lower_segments)):
        used = set()
        for c in cfg.sphere_curves(sphere):
            n = len(c.stations)
            for g in range(n):
                a, b, kind = c.gap(g)
                if kind != BOUNDARY:
                    continue
                key = _segment_key(("B", a.edge, a.index), ("B", b.edge, b.index))
                if key not in segs:
                    return _fail(
                        "collar",
                        f"boundary gap {key} is not a {sphere} link run",
                    )
                if key in used:
                    return _fail("collar", f"link run {key} used twice")
                used.add(key)
        if used != set(segs):
            return _fail("collar", f"sphere {sphere} leaves link runs uncovered")

    # Interior arcs must agree across the spheres.
    res = resolve_interior_arcs(cfg, d, mirrored)
    if res is None:
        return _fail("arcs", "interior arcs do not match across the spheres")

    # Planarity: arcs live in faces and embed without crossings, covering
    # every attachment point exactly once.
    arcs_by_face: dict[int, list] = {}
    for arc in res.arcs:
        t1, t2 = tuple(arc)
        f1 = _token_face_with(t1, d, edge_orders)
        f2 = _token_face_with(t2, d, edge_orders)
        if f1 != f2:
            return _fail("arcs", f"arc {sorted(arc)} spans two faces")
        arcs_by_face.setdefault(f1, []).append(arc)
    for face in d.faces:
        pts = face_attachment_cycle(d, face, edge_orders, saddles)
        arcs = arcs_by_face.get(face.index, [])
        matched = [t for arc in arcs for t in arc]
        if sorted(matched) != sorted(pts):
            return _fail(
                "arcs",
                f"face {face.index}: attachment points not perfectly matched",
            )
        if not noncrossing_in_face(pts, arcs):
            return _fail("noncross", f"face {face.index}: arcs forced to cross")

    # Exact Euler-characteristic total.
    total = chi(cfg)
    if total != target.chi:
        return _fail("chi", f"chi total {total} differs from target {target.chi}")
    return _PASS


# -- derivation from skeletons -----------------------------------------------


def derive_configuration(d: Diagram, target: TargetSpec,
                         edge_orders: dict[int, str],
                         saddle_counts: dict[int, int],
                         arcs: frozenset,
                         mirrored: bool = False,
                         walk: LinkWalk | None = None) -> Configuration | None:
    """Assemble the two sphere readings of a planar skeleton.

    The skeleton is: the ordered twist sides along every edge, the saddle
    stack heights, and the interior-arc pairing of all attachment points.
    Both readings are forced; the result may still fail :func:`check`.
    The link walk depends only on the twist counts and may be precomputed.
    """
    if walk is None:
        walk = link_walk(d, edge_orders)
    if walk is None:
        return None

    arc_of: dict[Token, frozenset] = {}
    for arc in arcs:
        for t in arc:
            if t in arc_of:
                return None
            arc_of[t] = arc

    curves = []
    for sphere, segments in ((UPPER, walk.upper_segments),
                             (LOWER, walk.lower_segments)):
        seg_of: dict[Token, tuple] = {}
        for seg in segments:
            for t in seg:
                if t in seg_of:
                    return None
                seg_of[t] = seg
        # Ray partner under a pass of this sphere: corners pair within the
        # side that straddles the avoided strand end, at equal depth.
        curves_here = _read_sphere(
            d, sphere, edge_orders, saddle_counts, arc_of, seg_of, mirrored
        )
        if curves_here is None:
            return None
        curves.extend(curves_here)
    return make_configuration(curves, edge_orders, saddle_counts, target)


def _corner_side(corner: int, sphere: str, mirrored: bool) -> int:
    for side in (0, 1):
        if corner in pass_corners(side, sphere, mirrored):
            return side
    raise AssertionError


def _read_sphere(d, sphere, edge_orders, saddle_counts, arc_of, seg_of,
                 mirrored) -> list[Curve] | None:
    # The reading graph is 2-regular: a twist joins its interior arc to its
    # link run on this sphere; a ray joins its interior arc to the bubble hop
    # of its pass.  Walking the cycles yields the curves.
    twists = [
        ("B", e, i)
        for e, sides in sorted(edge_orders.items())
        for i in range(len(sides))
    ]
    rays = [
        ("R", x, corner, dep)
        for x, k in sorted(saddle_counts.items())
        for corner in range(4)
        for dep in range(k)
    ]
    for t in twists + rays:
        if t not in arc_of:
            return None  # unmatched attachment point

    def hop_partner(t: Token) -> Token:
        _tag, x, corner, dep = t
        side = _corner_side(corner, sphere, mirrored)
        q1, q2 = pass_corners(side, sphere, mirrored)
        return ("R", x, q2 if corner == q1 else q1, dep)

    def bpoint(t: Token) -> BPoint:
        _tag, e, i = t
        return BPoint(e, edge_orders[e][i], i)

    def traverse(conn: dict, t: Token) -> Token | None:
        if t not in conn:
            return None
        others = [x for x in conn[t] if x != t]
        if len(others) != 1:
            return None
        return others[0]

    seen_twists: set[Token] = set()
    seen_rays: set[Token] = set()
    curves = []
    limit = 4 * (len(twists) + len(rays)) + 4
    for start in twists:
        if start in seen_twists:
            continue
        stations: list = [bpoint(start)]
        kinds: list = []
        seen_twists.add(start)
        t, out = start, "arc"
        for _step in range(limit):
            if out == "arc":
                u = traverse(arc_of, t)
                kinds.append(INTERIOR)
            else:
                u = traverse(seg_of, t)
                kinds.append(BOUNDARY)
            if u is None:
                return None
            if u == start:
                if out == "arc":
                    return None  # start's interior arc traversed twice
                break
            if u[0] == "B":
                seen_twists.add(u)
                stations.append(bpoint(u))
                t, out = u, ("seg" if out == "arc" else "arc")
            else:
                u2 = hop_partner(u)
                if u in seen_rays or u2 in seen_rays:
                    return None
                seen_rays.update((u, u2))
                _tag, x, corner, dep = u
                stations.append(
                    SaddlePass(x, _corner_side(corner, sphere, mirrored), dep)
                )
                t, out = u2, "arc"
        else:
            return None  # walk failed to close
        if len(kinds) != len(stations):
            return None
        curves.append(Curve(sphere, tuple(stations), tuple(kinds)))
    if len(seen_rays) != len(rays):
        return None  # some saddle stack not visited by this sphere
    return curves
