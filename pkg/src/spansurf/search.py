"""Enumeration engines and the explicit census bound.

The search space is the station encoding itself: choosing, for every curve,
successive saddle sides and edge sides determines it up to isotopy.  A whole
configuration is coordinatized by

* how many saddles are stacked at each crossing,
* how many twist points sit on each edge (the runs along the link between
  consecutive twist points, and which sphere owns each run, are then forced
  by the collar alternation), and
* the interior-arc pairing of all attachment points, which also fixes every
  twist's edge side (the side is the face its arc lives in).

``enumerate_configurations`` builds the upper-sphere curves one at a time,
station by station: from the current station it alternates the forced link
run with a chosen face-compatible arc partner, cutting branches on the word
length cap, on crossings passed twice, on repeated edge sides within a
curve, on arcs joining a pass to an adjacent edge, and on exact
Euler-characteristic accounting of the twist totals.  Each completed
skeleton is rebuilt through the two-sphere derivation and the full
configuration checker, so the pruning only affects speed, never the result
set.

``oracle_enumerate`` is the desk-scale referee: plain nested loops over
per-edge twist counts (any values, not just odd), all side assignments, and
every pairing of the attachment points inside each face, with the
definitional filters applied post hoc and no search-order pruning.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field

from .config import (
    Configuration,
    TargetSpec,
    canonical_config,
    check,
    derive_configuration,
    face_attachment_cycle,
    link_walk,
)
from .diagram import Diagram, NotPrimeError
from .surface import GluingError, SurfaceComplex, assemble, genus_report


def bound(n: int, g: int):
    """The explicit census bound (4n)^(64 g^2 - 48 g) as an exact integer."""
    if n < 1:
        raise ValueError("crossing number must be positive")
    if g < 1:
        raise ValueError("the bound is stated for genus g > 0")
    return (4 * n) ** (64 * g * g - 48 * g)


def bound_chi(n: int, chi: int):
    """The bound with the genus replaced by (1 - chi)/2; the exponent
    16 (1-chi)^2 - 24 (1-chi) is an integer for every integer chi."""
    if n < 1:
        raise ValueError("crossing number must be positive")
    if chi > -1:
        raise ValueError("the bound is stated for chi <= -1")
    k = 1 - chi
    return (4 * n) ** (16 * k * k - 24 * k)


def intermediate_bounds(n: int, g: int) -> dict:
    """The per-curve and per-class factors composing the census bound."""
    if g < 1:
        raise ValueError("the bound is stated for genus g > 0")
    base = 4 * n
    return {
        "per_curve": base ** (8 * g - 4),
        "c1_total": base ** ((8 * g - 4) * (8 * g - 4)),
        "c2_total": base ** (4 * (4 * g - 4)),
    }


def target_bound(n: int, target: TargetSpec):
    if target.mode == "genus":
        return bound(n, target.genus)
    return bound_chi(n, target.chi)


@dataclass(frozen=True)
class SearchBudget:
    """Structural caps derived from the target plus operational limits."""

    max_c1: int
    max_word_len: int
    max_c2: int
    saddle_budget: int
    node_limit: int | None = None
    time_limit: float | None = None

    @classmethod
    def from_target(cls, target: TargetSpec, node_limit: int | None = None,
                    time_limit: float | None = None) -> "SearchBudget":
        return cls(
            max_c1=target.c1_cap,
            max_word_len=target.word_length_cap,
            max_c2=target.c2_cap,
            saddle_budget=target.saddle_budget,
            node_limit=node_limit,
            time_limit=time_limit,
        )


@dataclass
class SearchStats:
    nodes: int = 0
    prunes: dict = field(default_factory=dict)
    elapsed: float = 0.0

    def prune(self, rule: str, count: int = 1) -> None:
        self.prunes[rule] = self.prunes.get(rule, 0) + count


@dataclass
class CensusReport:
    name: str
    n: int
    target: dict
    bound: str
    configuration_count: int
    completed: bool
    is_two_braid_closure: bool
    component_count: int
    stats: SearchStats
    configurations: list | None = None

    def to_json_dict(self, mask_timing: bool = False) -> dict:
        out = {
            "name": self.name,
            "n": self.n,
            "target": self.target,
            "bound": self.bound,
            "configuration_count": self.configuration_count,
            "completed": self.completed,
            "is_two_braid_closure": self.is_two_braid_closure,
            "component_count": self.component_count,
            "stats": {
                "nodes": self.stats.nodes,
                "prunes": dict(sorted(self.stats.prunes.items())),
                "elapsed": 0.0 if mask_timing else round(self.stats.elapsed, 6),
            },
        }
        if self.configurations is not None:
            out["configurations"] = self.configurations
        return out


class BudgetExhausted(RuntimeError):
    pass


# -- exact feasibility arithmetic ---------------------------------------------


def _max_curves(letters: int, s_letters: int) -> int:
    """Upper bound on how many valid non-BBBB words fit in a letter budget
    with the given number of S's: S-bearing words have length >= 4, all-B
    words length >= 6."""
    best = 0
    for a in range(min(s_letters, letters // 4) + 1):
        best = max(best, a + max(0, letters - 4 * a) // 6)
    return best


def _required_curves(T: int, s: int, target: TargetSpec) -> int:
    # chi = (#curves) - T/2 - s over both spheres.
    return target.chi + T // 2 + s


def _twist_total_ok(T: int, s: int, target: TargetSpec) -> bool:
    if T % 2:
        return False
    req = _required_curves(T, s, target)
    if req < 2:
        return False
    if req > target.c1_cap + target.c2_cap:
        return False
    return req <= 2 * _max_curves(T + 2 * s, 2 * s)


def _twist_total_cap(d: Diagram, s: int, target: TargetSpec) -> int:
    letters_cap = (target.c1_cap + target.c2_cap) * target.word_length_cap
    return max(2 * d.n, (letters_cap - 4 * s) // 2)


# -- shared iteration helpers --------------------------------------------------


def _saddle_placements(n: int, budget: int):
    """All (crossing -> stack height) maps with total at most the budget."""
    for total in range(budget + 1):
        for combo in itertools.combinations_with_replacement(range(n), total):
            counts: dict[int, int] = {}
            for x in combo:
                counts[x] = counts.get(x, 0) + 1
            yield counts


def _twist_vectors(labels, total, per_edge_cap, odd_only):
    """All per-edge twist counts >= 1 summing to the given total."""

    def rec(i, remaining, acc):
        if i == len(labels) - 1:
            if 1 <= remaining <= per_edge_cap and (
                not odd_only or remaining % 2 == 1
            ):
                yield acc + [remaining]
            return
        left = len(labels) - 1 - i
        hi = min(per_edge_cap, remaining - left)
        for t in range(1, hi + 1):
            if odd_only and t % 2 == 0:
                continue
            yield from rec(i + 1, remaining - t, acc + [t])

    if per_edge_cap >= 1 and total >= len(labels):
        yield from rec(0, total, [])


def _all_pairings(points: list):
    if not points:
        yield []
        return
    p0, rest = points[0], points[1:]
    for i, q in enumerate(rest):
        for sub in _all_pairings(rest[:i] + rest[i + 1:]):
            yield [frozenset((p0, q))] + sub


def _mode_filters_ok(cfg: Configuration, d: Diagram, target: TargetSpec,
                     mirrored: bool) -> tuple[bool, str, SurfaceComplex]:
    sc = assemble(cfg, d, mirrored)
    if sc.euler_characteristic != target.chi:
        raise GluingError(
            f"assembled chi {sc.euler_characteristic} != target {target.chi}"
        )
    if not sc.connected:
        return False, "filter-connected", sc
    if target.orientable_required and not sc.orientable:
        return False, "filter-orientability", sc
    return True, "", sc


def _precheck(d: Diagram, target: TargetSpec) -> None:
    if not d.is_prime():
        raise NotPrimeError("enumeration requires a prime diagram")
    if target.boundary_components != d.component_count:
        raise ValueError(
            f"target expects {target.boundary_components} boundary "
            f"components but the diagram has {d.component_count}"
        )


# -- the pruned engine ---------------------------------------------------------


class _CurveWalk:
    """Station-by-station construction of the upper-sphere curve system for
    fixed saddle stacks and twist counts."""

    def __init__(self, d: Diagram, target: TargetSpec, budget: SearchBudget,
                 saddles: dict[int, int], counts: dict[int, int],
                 stats: SearchStats, mirrored: bool, emit, t0: float):
        from .curves import pass_corners

        self.d = d
        self.target = target
        self.budget = budget
        self.saddles = saddles
        self.counts = counts
        self.stats = stats
        self.mirrored = mirrored
        self.emit = emit
        self.t0 = t0
        self.req = _required_curves(sum(counts.values()),
                                    sum(saddles.values()), target)

        placeholder = {e: "L" * t for e, t in counts.items()}
        walk = link_walk(d, placeholder)
        self.ok = walk is not None
        if not self.ok:
            return
        self.boundary_partner = {}
        for seg in walk.upper_segments:
            u, v = seg
            self.boundary_partner[u] = v
            self.boundary_partner[v] = u

        self.twists = sorted(
            ("B", e, i) for e, t in counts.items() for i in range(t)
        )
        self.rays = sorted(
            ("R", x, q, dep)
            for x, k in saddles.items()
            for q in range(4)
            for dep in range(k)
        )
        self.slots = self.twists + self.rays
        # Ray geometry: face of each ray and the upper-sphere hop partner.
        self.ray_face = {}
        self.hop = {}
        for r in self.rays:
            _tag, x, q, dep = r
            self.ray_face[r] = d.quadrant_face(x, q).index
            for side in (0, 1):
                q1, q2 = pass_corners(side, "+", mirrored)
                if q in (q1, q2):
                    other = q2 if q == q1 else q1
                    self.hop[r] = ("R", x, other, dep)
        self.twist_faces = {}
        for t in self.twists:
            _tag, e, _i = t
            self.twist_faces[t] = {
                d.edge_side_face(e, "L").index: "L",
                d.edge_side_face(e, "R").index: "R",
            }
        # Face -> slots that can attach there (for candidate generation).
        self.face_slots: dict[int, list] = {}
        for t in self.twists:
            for f in self.twist_faces[t]:
                self.face_slots.setdefault(f, []).append(t)
        for r in self.rays:
            self.face_slots.setdefault(self.ray_face[r], []).append(r)
        for f in self.face_slots:
            self.face_slots[f].sort()

    def run(self):
        if not self.ok:
            return
        self.arc_partner: dict = {}
        self.arc_face: dict = {}
        self.side: dict = {}
        self.upper_curves = 0
        self._next_cycle()

    def _check_limits(self):
        if (self.budget.node_limit is not None
                and self.stats.nodes > self.budget.node_limit):
            raise BudgetExhausted("node limit reached")
        if (self.budget.time_limit is not None
                and time.monotonic() - self.t0 > self.budget.time_limit):
            raise BudgetExhausted("time limit reached")

    def _next_cycle(self):
        start = next((t for t in self.twists if t not in self.arc_partner),
                     None)
        if start is None:
            if any(r not in self.arc_partner for r in self.rays):
                self.stats.prune("stranded-rays")
                return
            self._complete()
            return
        if self.upper_curves >= self.req - 1:
            # The lower sphere still needs at least one curve.
            self.stats.prune("curve-count")
            return
        cycle_state = {
            "start": start,
            "crossings": set(),
            "edge_sides": set(),
            "stations": 0,
        }
        self._extend(start, cycle_state)

    def _extend(self, current, cyc):
        """Choose the interior-arc partner of `current` and continue."""
        self.stats.nodes += 1
        if self.stats.nodes % 2048 == 0:
            self._check_limits()
        if cyc["stations"] >= self.budget.max_word_len:
            self.stats.prune("cap-len")
            return
        for partner, face in self._candidates(current, cyc):
            self._try_pair(current, partner, face, cyc)

    def _candidates(self, current, cyc):
        if current[0] == "B":
            faces = self.twist_faces[current]
        else:
            faces = {self.ray_face[current]: None}
        out = []
        for f in sorted(faces):
            for p in self.face_slots[f]:
                if p == current or p in self.arc_partner:
                    continue
                if p[0] == "B":
                    if f not in self.twist_faces[p]:
                        continue
                else:
                    if self.ray_face[p] != f:
                        continue
                if _arc_rule6(current, p, self.d):
                    self.stats.prune("rule6")
                    continue
                out.append((p, f))
        return out

    def _try_pair(self, current, partner, face, cyc):
        added_sides = []
        for t in (current, partner):
            if t[0] == "B":
                side = self.twist_faces[t][face] if face in self.twist_faces[t] else None
                key = (t[1], side)
                if key in cyc["edge_sides"]:
                    self.stats.prune("4")
                    for k in added_sides:
                        cyc["edge_sides"].discard(k)
                    return
                cyc["edge_sides"].add(key)
                added_sides.append(key)
                self.side[t] = side
        self.arc_partner[current] = partner
        self.arc_partner[partner] = current
        self.arc_face[frozenset((current, partner))] = face

        self._after_arc(partner, cyc)

        del self.arc_partner[current]
        del self.arc_partner[partner]
        del self.arc_face[frozenset((current, partner))]
        for t in (current, partner):
            if t[0] == "B" and t not in self.arc_partner:
                self.side.pop(t, None)
        for k in added_sides:
            cyc["edge_sides"].discard(k)

    def _after_arc(self, arrived, cyc):
        """Continue the cycle after arriving at `arrived` through an arc."""
        cyc["stations"] += 1
        try:
            if arrived[0] == "B":
                nxt = self.boundary_partner[arrived]
                if nxt == cyc["start"]:
                    self._close_cycle(cyc)
                elif nxt in self.arc_partner:
                    self.stats.prune("run-clash")
                else:
                    # The twist at the far end of the link run is the next
                    # station; its arc is chosen by the recursive call.
                    cyc["stations"] += 1
                    try:
                        self._extend(nxt, cyc)
                    finally:
                        cyc["stations"] -= 1
            else:
                # The two rays of a hop form one pass station, already
                # counted by the arrival above.
                x = arrived[1]
                if x in cyc["crossings"]:
                    self.stats.prune("2")
                    return
                hopped = self.hop[arrived]
                if hopped in self.arc_partner:
                    self.stats.prune("hop-clash")
                    return
                cyc["crossings"].add(x)
                try:
                    self._extend(hopped, cyc)
                finally:
                    cyc["crossings"].discard(x)
        finally:
            cyc["stations"] -= 1

    def _close_cycle(self, cyc):
        length = cyc["stations"] + 1  # the start twist
        if length < 4:
            self.stats.prune("10")
            return
        if length == 4 and not cyc["crossings"]:
            self.stats.prune("BBBB")
            return
        self.upper_curves += 1
        self._next_cycle()
        self.upper_curves -= 1

    def _complete(self):
        orders = {}
        for e, t in self.counts.items():
            orders[e] = "".join(self.side[("B", e, i)] for i in range(t))
        arcs = frozenset(self.arc_face)
        self.emit(orders, self.saddles, arcs)


def _arc_rule6(a, b, d: Diagram) -> bool:
    for u, v in ((a, b), (b, a)):
        if u[0] == "R" and v[0] == "B":
            if v[1] in d.crossings[u[1]].edge_ends:
                return True
    return False


def enumerate_configurations(
    d: Diagram,
    target: TargetSpec,
    budget: SearchBudget | None = None,
    mirrored: bool = False,
    emit_surfaces: bool = False,
    name: str = "",
) -> tuple[list[Configuration], CensusReport]:
    """Pruned enumeration of every valid configuration for the target.

    Returns the canonical configurations in sorted order plus a census
    report; on node/time exhaustion the report is marked incomplete.
    """
    _precheck(d, target)
    if budget is None:
        budget = SearchBudget.from_target(target)
    stats = SearchStats()
    t0 = time.monotonic()
    found: dict[str, Configuration] = {}
    surfaces: dict[str, SurfaceComplex] = {}
    completed = True

    def emit(orders, saddles, arcs):
        cfg = derive_configuration(d, target, orders, saddles, arcs, mirrored)
        if cfg is None:
            stats.prune("derive")
            return
        result = check(cfg, d, mirrored)
        if not result:
            stats.prune(f"check:{result.rule}")
            return
        ok, why, sc = _mode_filters_ok(cfg, d, target, mirrored)
        if not ok:
            stats.prune(why)
            return
        canon = canonical_config(cfg)
        key = canon.serialize()
        found[key] = canon
        surfaces[key] = sc

    try:
        for saddles in _saddle_placements(d.n, budget.saddle_budget):
            s = sum(saddles.values())
            cap = _twist_total_cap(d, s, target)
            for T in range(2 * d.n, cap + 1, 2):
                if not _twist_total_ok(T, s, target):
                    stats.prune("chi-infeasible")
                    continue
                req = _required_curves(T, s, target)
                per_edge_cap = min(T - (2 * d.n - 1), 2 * (req // 2))
                for counts in _twist_vectors(
                    d.edge_labels, T, per_edge_cap, odd_only=True
                ):
                    walker = _CurveWalk(
                        d, target, budget, saddles,
                        dict(zip(d.edge_labels, counts)), stats, mirrored,
                        emit, t0,
                    )
                    walker.run()
    except BudgetExhausted:
        completed = False

    stats.elapsed = time.monotonic() - t0
    configs = [found[k] for k in sorted(found)]
    report = CensusReport(
        name=name,
        n=d.n,
        target=target.describe(),
        bound=str(target_bound(d.n, target)),
        configuration_count=len(configs),
        completed=completed,
        is_two_braid_closure=d.is_two_braid_closure(),
        component_count=d.component_count,
        stats=stats,
        configurations=_emit_entries(configs, surfaces, emit_surfaces, target),
    )
    return configs, report


def _emit_entries(configs, surfaces, emit_surfaces, target):
    out = []
    for cfg in configs:
        entry = cfg.to_json_dict()
        if emit_surfaces:
            sc = surfaces[cfg.serialize()]
            entry["surface"] = sc.to_json_dict()
            entry["surface"]["report"] = genus_report(sc, target)
        out.append(entry)
    return out


# -- the oracle ----------------------------------------------------------------


def _pairings_rule6(points: list, d: Diagram):
    """All pairings of the points whose pairs avoid joining a ray to a twist
    on an edge of the ray's own crossing.  Such pairs can never appear in a
    realizable configuration, so skipping them changes nothing but speed
    (the unfiltered pairing space is astronomically larger)."""
    if not points:
        yield []
        return
    p0, rest = points[0], points[1:]
    for i, q in enumerate(rest):
        if _arc_rule6(p0, q, d):
            continue
        for sub in _pairings_rule6(rest[:i] + rest[i + 1:], d):
            yield [frozenset((p0, q))] + sub


def oracle_enumerate(
    d: Diagram,
    target: TargetSpec,
    guard: bool = True,
    mirrored: bool = False,
) -> list[Configuration]:
    """Exhaustive reference enumeration for desk-scale instances.

    Straight nested loops over the skeleton coordinates: per-edge twist
    counts need not be odd, per-edge side choices are walked as (how many on
    side L) times (which slots), and every pairing of the face attachment
    points is generated, crossing ones included.  Apart from skipping the
    structurally impossible ray-to-adjacent-edge pairs, all rejection is
    post hoc through the configuration checker and the mode filters.
    """
    _precheck(d, target)
    if guard and (d.n > 6 or -target.chi > 3):
        raise ValueError(
            "oracle guard: intended for n <= 6 and chi >= -3 "
            "(pass guard=False to override)"
        )
    found: dict[str, Configuration] = {}
    budget = SearchBudget.from_target(target)
    for saddles in _saddle_placements(d.n, budget.saddle_budget):
        s = sum(saddles.values())
        cap = _twist_total_cap(d, s, target)
        for T in range(2 * d.n, cap + 1):
            if not _twist_total_ok(T, s, target):
                continue
            for counts in _twist_vectors(
                d.edge_labels, T, T - (2 * d.n - 1), odd_only=False
            ):
                orders_counts = dict(zip(d.edge_labels, counts))
                # The walk along the link depends only on the counts; when
                # the runs cannot alternate, no side assignment can work.
                placeholder = {e: "L" * t for e, t in orders_counts.items()}
                walk = link_walk(d, placeholder)
                if walk is None:
                    continue
                _oracle_splits(d, target, orders_counts, saddles, found,
                               walk, mirrored)
    return [found[k] for k in sorted(found)]


def _oracle_splits(d, target, counts, saddles, found, walk, mirrored):
    """Iterate the number of side-L twists per edge, then the concrete slot
    choices.  Face-point parities and pairability depend only on the
    numbers, so dead splits are skipped wholesale."""
    labels = sorted(counts)
    for ks in itertools.product(*[range(counts[e] + 1) for e in labels]):
        split = dict(zip(labels, ks))
        rep_orders = {
            e: "L" * split[e] + "R" * (counts[e] - split[e]) for e in labels
        }
        rep_faces = [
            face_attachment_cycle(d, face, rep_orders, saddles)
            for face in d.faces
        ]
        if any(len(pts) % 2 for pts in rep_faces):
            continue
        if any(
            next(_pairings_rule6(list(pts), d), None) is None
            for pts in rep_faces
        ):
            continue
        side_choices = [
            itertools.combinations(range(counts[e]), split[e]) for e in labels
        ]
        for combo in itertools.product(*side_choices):
            orders = {}
            for e, left_slots in zip(labels, combo):
                chosen = set(left_slots)
                orders[e] = "".join(
                    "L" if i in chosen else "R" for i in range(counts[e])
                )
            _oracle_pairings(d, target, orders, saddles, found, walk,
                             mirrored)


def _oracle_pairings(d, target, orders, saddles, found, walk, mirrored):
    per_face = []
    for face in d.faces:
        pts = face_attachment_cycle(d, face, orders, saddles)
        pairings = list(_pairings_rule6(list(pts), d))
        if not pairings:
            return
        per_face.append(pairings)
    for combo in itertools.product(*per_face):
        arcs = frozenset(a for m in combo for a in m)
        cfg = derive_configuration(d, target, orders, saddles, arcs,
                                   mirrored, walk=walk)
        if cfg is None:
            continue
        if not check(cfg, d, mirrored):
            continue
        ok, _why, _sc = _mode_filters_ok(cfg, d, target, mirrored)
        if not ok:
            continue
        canon = canonical_config(cfg)
        found[canon.serialize()] = canon
