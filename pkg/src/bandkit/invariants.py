"""Quantities preserved by every band move.

Euler characteristic, orientability, surface component count, and the
linking-based homology surrogate (lambda modulo the dotted-circle lattice),
plus resolutions and a bounded unlink certifier.

Orientability is decided by constraint propagation of strand directions: a
direction assignment on arcs must flow straight through crossings and
alternate in/out around every marked vertex (the band-coherence condition for
oriented band surgery).  The independent polygon-complex oracle
(:func:`orientable_by_cell_complex`) builds the abstract surface from minus
disks, band squares and plus disks and orients it by polygon propagation; the
two must agree, which the test suite asserts corpus-wide.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from .diagram import (CROSSING, Diagram, LINK, MARKED, Role, Vertex)
from .errors import DimensionMismatch, SameCircuit
from .surgery import Surgeon

MINUS = "minus"
PLUS = "plus"


# -- crossings and orientation ---------------------------------------------------


def crossing_sign(v: Vertex, incoming: Dict[int, bool]) -> int:
    """Sign of a crossing given strand directions (incoming per dart).

    With counterclockwise rotations, the crossing is positive exactly when the
    outgoing under-dart sits one rotation step counterclockwise from the
    outgoing over-dart.
    """
    over = [d for d in v.rot if d in v.over]
    under = [d for d in v.rot if d not in v.over]
    out_over = over[0] if not incoming[over[0]] else over[1]
    out_under = under[0] if not incoming[under[0]] else under[1]
    return 1 if v.pos(out_under) == (v.pos(out_over) + 1) % 4 else -1


def corner_pairs(v: Vertex, origin: str) -> List[Tuple[int, int]]:
    """Rotation-position pairs smoothed by the given resolution."""
    p = v.rot.index(v.anchor)
    if origin == PLUS:
        p += 1
    return [((p) % 4, (p + 1) % 4), ((p + 2) % 4, (p + 3) % 4)]


def _direction_constraints(d: Diagram, darts):
    """Inequality edges of the strand-direction system over the given darts."""
    edges = []
    for a, b in d.theta.items():
        if a < b and a in darts and b in darts:
            edges.append((a, b))
    for v in d.vertices.values():
        if v.kind == CROSSING:
            for i in (0, 1):
                a, b = v.rot[i], v.rot[i + 2]
                if a in darts and b in darts:
                    edges.append((a, b))
        else:
            if all(x in darts for x in v.rot):
                for i in range(3):
                    edges.append((v.rot[i], v.rot[i + 1]))
    return edges


def _two_color(nodes, edges):
    adj = {n: [] for n in nodes}
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    color = {}
    for s in sorted(adj):
        if s in color:
            continue
        color[s] = False
        stack = [s]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in color:
                    color[y] = not color[x]
                    stack.append(y)
                elif color[y] == color[x]:
                    return None
    return color


def link_darts(d: Diagram):
    out = set()
    for seq in d.circuits():
        role = d.circuit_roles.get(min(seq))
        if role is not None and role.kind == LINK:
            out.update(seq)
    return out


def orientable(d: Diagram) -> bool:
    darts = link_darts(d)
    if not darts:
        return True
    return _two_color(darts, _direction_constraints(d, darts)) is not None


# -- resolutions -----------------------------------------------------------------


@dataclass(frozen=True)
class ResolvedLink:
    base: Diagram
    origin: str


def resolve(d: Diagram, origin: str) -> ResolvedLink:
    """Smooth every marked vertex by the fixed corner convention."""
    s = Surgeon(d)
    for v in list(d.vertices.values()):
        if v.kind == MARKED:
            s.excise_vertex(v.vid, corner_pairs(v, origin))
    name = f"{d.name}:{origin}" if d.name else origin
    return ResolvedLink(s.finalize(name=name), origin)


def _link_circle_count(d: Diagram) -> int:
    n = 0
    for seq in d.circuits():
        role = d.circuit_roles.get(min(seq))
        if role is not None and role.kind == LINK:
            n += 1
    for role in d.circles.values():
        if role.kind == LINK:
            n += 1
    return n


def resolution_circle_count(d: Diagram, origin: str) -> int:
    """Link circles of the resolution, by actually resolving and tracing."""
    return _link_circle_count(resolve(d, origin).base)


def resolution_circle_count_oracle(d: Diagram, origin: str) -> int:
    """Independent count: union-find over smoothed darts, no diagram built."""
    parent = {}

    def find(x):
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb

    for a, b in d.theta.items():
        union(a, b)
    for v in d.vertices.values():
        if v.kind == CROSSING:
            union(v.rot[0], v.rot[2])
            union(v.rot[1], v.rot[3])
        else:
            for i, j in corner_pairs(v, origin):
                union(v.rot[i], v.rot[j])
    ld = link_darts(d)
    classes = {find(x) for x in ld}
    n = len(classes)
    for role in d.circles.values():
        if role.kind == LINK:
            n += 1
    return n


def euler_characteristic(d: Diagram) -> int:
    return (resolution_circle_count(d, MINUS) - d.n_marked()
            + resolution_circle_count(d, PLUS))


def surface_components(d: Diagram) -> int:
    """Components of the union of Link circuits glued at marked vertices."""
    ld = link_darts(d)
    parent = {}

    def find(x):
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb

    for a, b in d.theta.items():
        if a in ld and b in ld:
            union(a, b)
    for v in d.vertices.values():
        if v.kind == CROSSING:
            for i in (0, 1):
                if v.rot[i] in ld and v.rot[i + 2] in ld:
                    union(v.rot[i], v.rot[i + 2])
        else:
            if all(x in ld for x in v.rot):
                for x in v.rot[1:]:
                    union(v.rot[0], x)
    n = len({find(x) for x in ld})
    for role in d.circles.values():
        if role.kind == LINK:
            n += 1
    return n


# -- the polygon-complex orientability oracle -------------------------------------


def orientable_by_cell_complex(d: Diagram) -> bool:
    """Build the abstract closed surface and orient its polygons.

    Cells: one disk per minus circle, one square per marked vertex, one disk
    per plus circle.  Edges are strand segments between marked-vertex stops
    plus the four corner edges of each marked vertex.  The surface is
    orientable iff polygons can be oriented so each edge is traversed once in
    each direction.
    """
    ld = link_darts(d)
    marked = [v for v in d.vertices.values() if v.kind == MARKED]
    if not marked:
        return True  # disks glued along closed circles only: spheres

    # strand segments: walk from each marked dart through crossings
    seg_end = {}
    for v in marked:
        for start in v.rot:
            if start in seg_end:
                continue
            x = d.theta[start]
            while d.vertex_of(x).kind == CROSSING:
                x = d.theta[d.straight(x)]
            seg_end[start] = x
            seg_end[x] = start

    def seg_edge(dart):
        other = seg_end[dart]
        key = ("s", min(dart, other), max(dart, other))
        direction = 1 if dart == min(dart, other) else -1
        return key, direction

    def corner_edge(vid, i):
        # canonical direction: rot[i] -> rot[i+1]
        return ("c", vid, i)

    polygons = []

    def circle_polys(origin):
        seen = set()
        for v in marked:
            for i, j in corner_pairs(v, origin):
                for entry in (v.rot[i], v.rot[j]):
                    if entry in seen:
                        continue
                    # trace one resolved circle starting into this corner
                    poly = []
                    cur = entry
                    while True:
                        v2 = d.vertex_of(cur)
                        pairs = corner_pairs(v2, origin)
                        for a, b in pairs:
                            if v2.rot[a] == cur or v2.rot[b] == cur:
                                lo = min(a, b) if {a, b} != {0, 3} else 3
                                partner = v2.rot[b] if v2.rot[a] == cur else v2.rot[a]
                                direction = 1 if cur == v2.rot[lo] else -1
                                poly.append((corner_edge(v2.vid, lo), direction))
                                break
                        seen.add(cur)
                        seen.add(partner)
                        key, direction = seg_edge(partner)
                        poly.append((key, direction))
                        cur = seg_end[partner]
                        if cur == entry:
                            break
                    polygons.append(poly)

    circle_polys(MINUS)
    circle_polys(PLUS)
    for v in marked:
        polygons.append([(corner_edge(v.vid, i), 1) for i in range(4)])

    # orient polygons: shared edges must be traversed oppositely
    edge_users = {}
    for idx, poly in enumerate(polygons):
        for key, direction in poly:
            edge_users.setdefault(key, []).append((idx, direction))
    for key, users in edge_users.items():
        if len(users) != 2:
            raise AssertionError(f"complex edge {key} used {len(users)} times")
    flip = {}
    for start in range(len(polygons)):
        if start in flip:
            continue
        flip[start] = False
        stack = [start]
        while stack:
            p = stack.pop()
            for key, direction in polygons[p]:
                (a, da), (b, db) = edge_users[key]
                if a == b:
                    # one polygon traverses the edge twice; flipping the
                    # polygon flips both passes, so they must already oppose
                    if da == db:
                        return False
                    continue
                other, dother = (b, db) if a == p else (a, da)
                eff_mine = -direction if flip[p] else direction
                if other not in flip:
                    # choose the flip making the other traversal opposite
                    flip[other] = (dother == eff_mine)
                    stack.append(other)
                else:
                    eff_other = -dother if flip[other] else dother
                    if eff_other != -eff_mine:
                        return False
    return True


# -- linking ----------------------------------------------------------------------


def circuit_orientation(d: Diagram, key: int) -> Dict[int, bool]:
    seq = d.circuit_darts(key)
    return {dart: (i % 2 == 1) for i, dart in enumerate(seq)}


def linking_number(d: Diagram, c1, c2) -> int:
    """Half the signed crossing sum between two distinct circuits.

    Circuits are addressed by their smallest dart; free circles by ('c', cid)
    and always link zero.
    """
    if c1 == c2:
        raise SameCircuit(f"linking number needs two distinct circuits, got {c1}")
    if isinstance(c1, tuple) or isinstance(c2, tuple):
        return 0
    inc = circuit_orientation(d, c1)
    inc.update(circuit_orientation(d, c2))
    darts1 = set(d.circuit_darts(c1))
    darts2 = set(d.circuit_darts(c2))
    total = 0
    for v in d.vertices.values():
        if v.kind != CROSSING:
            continue
        s1 = {v.rot[0], v.rot[2]}
        s2 = {v.rot[1], v.rot[3]}
        if (s1 <= darts1 and s2 <= darts2) or (s1 <= darts2 and s2 <= darts1):
            total += crossing_sign(v, inc)
    if total % 2 != 0:
        raise AssertionError("odd signed sum between two circuits")
    return total // 2


def effective_framing(d: Diagram, unit) -> int:
    """Blackboard writhe plus the stored framing offset."""
    if isinstance(unit, tuple) and unit[0] == "c":
        return d.circles[unit[1]].framing
    return d.writhe(unit) + d.circuit_roles[unit].framing


# -- homology surrogate -------------------------------------------------------------


def _units_of_kind(d: Diagram, kind: str):
    from .canon import canonical_unit_order

    out = []
    for tag, key in canonical_unit_order(d):
        if tag == "circuit":
            role = d.circuit_roles.get(key)
            if role is not None and role.kind == kind:
                out.append(key)
        else:
            if d.circles[key].kind == kind:
                out.append(("c", key))
    return out


def handle_units(d: Diagram):
    return _units_of_kind(d, "handle")


def dotted_units(d: Diagram):
    return _units_of_kind(d, "dotted")


def _lk_with_unit(d: Diagram, src_darts, src_inc, unit) -> int:
    """Signed crossings between oriented source darts and one handle/dotted unit."""
    if isinstance(unit, tuple):
        return 0
    udarts = set(d.circuit_darts(unit))
    uinc = circuit_orientation(d, unit)
    total = 0
    for v in d.vertices.values():
        if v.kind != CROSSING:
            continue
        s1 = {v.rot[0], v.rot[2]}
        s2 = {v.rot[1], v.rot[3]}
        inc = {}
        hit = False
        if s1 <= src_darts and s2 <= udarts:
            inc.update({x: src_inc[x] for x in s1})
            inc.update({x: uinc[x] for x in s2})
            hit = True
        elif s2 <= src_darts and s1 <= udarts:
            inc.update({x: src_inc[x] for x in s2})
            inc.update({x: uinc[x] for x in s1})
            hit = True
        if hit:
            total += crossing_sign(v, inc)
    if total % 2 != 0:
        raise AssertionError("odd signed sum")
    return total // 2


def homology_vector(d: Diagram):
    """(lambda, mu): lambda indexed by handle circuits in canonical order, mu
    one row per dotted circuit.

    Lambda sums the linking of the surface's minus-resolution material with
    each 2-handle circle.  Orientations come from the coherence solution per
    surface component, sign-normalized so the first nonzero entry is
    positive; nonorientable components contribute mod-2 entries.
    """
    handles = handle_units(d)
    dotted = dotted_units(d)

    # partition link darts into surface components
    ld = link_darts(d)
    parent = {}

    def find(x):
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb

    for a, b in d.theta.items():
        if a in ld and b in ld:
            union(a, b)
    for v in d.vertices.values():
        if v.kind == CROSSING:
            for i in (0, 1):
                if v.rot[i] in ld and v.rot[i + 2] in ld:
                    union(v.rot[i], v.rot[i + 2])
        elif all(x in ld for x in v.rot):
            for x in v.rot[1:]:
                union(v.rot[0], x)
    comps = {}
    for x in ld:
        comps.setdefault(find(x), set()).add(x)

    lam = [0] * len(handles)
    for comp in sorted(comps.values(), key=min):
        coloring = _two_color(comp, _direction_constraints(d, comp))
        if coloring is not None:
            vec = [_lk_with_unit(d, comp, coloring, h) for h in handles]
            for x in vec:
                if x != 0:
                    if x < 0:
                        vec = [-y for y in vec]
                    break
        else:
            inc = {}
            for seq in d.circuits():
                if seq[0] in comp:
                    inc.update(circuit_orientation(d, min(seq)))
            vec = [_lk_with_unit(d, comp, inc, h) % 2 for h in handles]
        lam = [a + b for a, b in zip(lam, vec)]

    mu = []
    for dot in dotted:
        if isinstance(dot, tuple):
            mu.append(tuple(0 for _ in handles))
        else:
            darts = set(d.circuit_darts(dot))
            inc = circuit_orientation(d, dot)
            mu.append(tuple(_lk_with_unit(d, darts, inc, h) for h in handles))
    return tuple(lam), tuple(mu)


# -- exact integer lattice membership ----------------------------------------------


def _echelon_insert(basis, row):
    """Integer row echelon update (gcd elimination), in place."""
    row = list(row)
    n = len(row)
    for i in range(len(basis)):
        p, brow = basis[i]
        if row[p] == 0:
            continue
        a, b = brow[p], row[p]
        # zero out row[p] with exact gcd steps
        while row[p] != 0:
            if abs(brow[p]) > abs(row[p]):
                brow, row = row, brow
            q = row[p] // brow[p]
            row = [x - q * y for x, y in zip(row, brow)]
        basis[i] = (p, brow)
    piv = next((j for j, x in enumerate(row) if x != 0), None)
    if piv is not None:
        basis.append((piv, row))
        basis.sort(key=lambda t: t[0])


def lattice_contains(rows, target) -> bool:
    """Exact membership of target in the integer row span."""
    n = len(target)
    basis = []
    for r in rows:
        if len(r) != n:
            raise DimensionMismatch(f"row length {len(r)} != {n}")
        _echelon_insert(basis, r)
    t = list(target)
    for p, brow in basis:
        if t[p] == 0:
            continue
        if t[p] % brow[p] != 0:
            return False
        q = t[p] // brow[p]
        t = [x - q * y for x, y in zip(t, brow)]
    return all(x == 0 for x in t)


def homology_class_equal(l1, l2, mu) -> bool:
    if len(l1) != len(l2):
        raise DimensionMismatch(f"lambda lengths differ: {len(l1)} vs {len(l2)}")
    for row in mu:
        if len(row) != len(l1):
            raise DimensionMismatch("mu row length mismatch")
    diff = [a - b for a, b in zip(l1, l2)]
    return lattice_contains(mu, diff)


# -- summary block -------------------------------------------------------------------


@dataclass(frozen=True)
class SurfaceInvariants:
    euler: int
    orientable: bool
    components: int
    c_minus: int
    c_plus: int
    homology: Tuple[int, ...]
    relations: Tuple[Tuple[int, ...], ...]

    def text(self) -> str:
        lines = [
            f"euler={self.euler}",
            f"orientable={'true' if self.orientable else 'false'}",
            f"components={self.components}",
            f"c_minus={self.c_minus}",
            f"c_plus={self.c_plus}",
            "lambda=" + ",".join(str(x) for x in self.homology),
            "mu=" + ";".join(",".join(str(x) for x in row) for row in self.relations),
        ]
        return "\n".join(lines) + "\n"


def surface_invariants(d: Diagram) -> SurfaceInvariants:
    lam, mu = homology_vector(d)
    cm = resolution_circle_count(d, MINUS)
    cp = resolution_circle_count(d, PLUS)
    return SurfaceInvariants(
        euler=cm - d.n_marked() + cp,
        orientable=orientable(d),
        components=surface_components(d),
        c_minus=cm,
        c_plus=cp,
        homology=lam,
        relations=mu,
    )
