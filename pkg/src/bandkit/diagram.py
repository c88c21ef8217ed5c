"""Diagram data model: planar combinatorial maps with typed vertices and roled circuits.

A diagram lives on a disjoint union of 2-spheres' worth of combinatorial data
glued into one sphere by a containment forest.  Vertices are 4-valent and carry
a counterclockwise rotation of darts; the edge involution ``theta`` pairs dart
ends of arcs.  Crossing-free closed curves are first-class "free circles".

Conventions pinned here and relied on everywhere else:

* Circuits trace straight through every vertex: rotation position ``i``
  connects to ``i + 2``.
* Faces are orbits of ``sigma . theta`` where ``sigma`` is the rotation
  successor; a sphere component satisfies ``V - E + F = 2``.
* At a marked vertex with rotation ``(d0, d1, d2, d3)`` and anchor ``d0``, the
  minus-resolution smooths the corners ``d0-d1`` and ``d2-d3``; the
  plus-resolution smooths ``d1-d2`` and ``d3-d0``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Tuple, Union

from .errors import MalformedMap

LINK = "link"
DOTTED = "dotted"
HANDLE = "handle"

CROSSING = "crossing"
MARKED = "marked"


@dataclass(frozen=True)
class Role:
    kind: str
    framing: Optional[int] = None

    def token(self) -> str:
        if self.kind == HANDLE:
            return f"handle:{self.framing}"
        return self.kind


ROLE_LINK = Role(LINK)
ROLE_DOTTED = Role(DOTTED)


def handle_role(framing: int) -> Role:
    return Role(HANDLE, int(framing))


@dataclass(frozen=True)
class Vertex:
    vid: int
    kind: str
    rot: Tuple[int, int, int, int]
    # crossing: frozenset of the two opposite darts drawn on top
    over: Optional[frozenset] = None
    # marked: the dart fixing the resolution convention
    anchor: Optional[int] = None

    def pos(self, dart: int) -> int:
        return self.rot.index(dart)


# A piece is a connected map ('m', min dart) or a free circle ('c', cid).
Piece = Tuple[str, int]
# Faces of maps are keyed by their smallest dart; circle faces by 'in'/'out'.
FaceKey = Union[int, str]


@dataclass(frozen=True)
class Place:
    parent: Optional[Piece]  # None for pieces in the shared outer region
    parent_face: Optional[FaceKey]
    outer_face: Optional[FaceKey]  # which own face looks outward; None for circles


class Diagram:
    """Immutable-by-convention diagram value.

    Construction verifies dart arities (raising :class:`MalformedMap`); the
    semantic checks live in :func:`validate_structure` so that e.g. a
    non-spherical map can be represented and reported rather than being
    unconstructible.
    """

    __slots__ = (
        "vertices",
        "theta",
        "circles",
        "circuit_roles",
        "placement",
        "name",
        "_dart_pos",
        "_circuits",
        "_circuit_of",
        "_components",
        "_faces",
        "_face_of",
        "_canon_cache",
    )

    def __init__(self, vertices, theta, circles=None, circuit_roles=None,
                 placement=None, name=""):
        self.vertices = {v.vid: v for v in vertices.values()} if isinstance(vertices, dict) \
            else {v.vid: v for v in vertices}
        self.theta = dict(theta)
        self.circles = dict(circles or {})
        self.circuit_roles = dict(circuit_roles or {})
        self.name = name
        self._canon_cache = None

        self._check_arities()
        self._index()
        self.placement = self._normalize_placement(placement or {})

    # -- construction-time checks ------------------------------------------

    def _check_arities(self):
        seen = {}
        for v in self.vertices.values():
            if len(v.rot) != 4 or len(set(v.rot)) != 4:
                raise MalformedMap(f"vertex {v.vid}: rotation must list 4 distinct darts")
            for d in v.rot:
                if d in seen:
                    raise MalformedMap(f"dart {d} appears in two vertex slots")
                seen[d] = v.vid
            if v.kind == CROSSING:
                if v.over is None or len(v.over) != 2:
                    raise MalformedMap(f"crossing {v.vid}: over pair missing")
                a, b = sorted(v.over)
                pa, pb = v.rot.index(a) if a in v.rot else -1, v.rot.index(b) if b in v.rot else -1
                if pa < 0 or pb < 0 or (pb - pa) % 4 != 2:
                    raise MalformedMap(f"crossing {v.vid}: over pair must be opposite darts")
            elif v.kind == MARKED:
                if v.anchor not in v.rot:
                    raise MalformedMap(f"marked {v.vid}: anchor must be one of its darts")
            else:
                raise MalformedMap(f"vertex {v.vid}: unknown kind {v.kind!r}")
        darts = set(seen)
        if set(self.theta) != darts:
            raise MalformedMap("edge involution domain differs from vertex slots")
        for d, e in self.theta.items():
            if e == d:
                raise MalformedMap(f"edge involution fixes dart {d}")
            if self.theta.get(e) != d:
                raise MalformedMap(f"edge involution not an involution at dart {d}")

    def _index(self):
        self._dart_pos = {}
        for v in self.vertices.values():
            for i, d in enumerate(v.rot):
                self._dart_pos[d] = (v.vid, i)
        self._circuits = None
        self._circuit_of = None
        self._components = None
        self._faces = None
        self._face_of = None

    def _normalize_placement(self, placement):
        norm = {}
        pieces = set(self.pieces())
        for piece, place in placement.items():
            if piece not in pieces:
                continue
            outer = place.outer_face
            if piece[0] == "m" and outer is None:
                outer = min(f for f, _ in self.faces_of_piece(piece))
            if piece[0] == "c":
                outer = None
            norm[piece] = Place(place.parent, place.parent_face, outer)
        for piece in pieces:
            if piece not in norm:
                outer = None
                if piece[0] == "m":
                    outer = min(f for f, _ in self.faces_of_piece(piece))
                norm[piece] = Place(None, None, outer)
        return norm

    # -- basic accessors ----------------------------------------------------

    def darts(self):
        return self.theta.keys()

    def vertex_of(self, d: int) -> Vertex:
        return self.vertices[self._dart_pos[d][0]]

    def pos_of(self, d: int) -> int:
        return self._dart_pos[d][1]

    def sigma(self, d: int) -> int:
        vid, i = self._dart_pos[d]
        return self.vertices[vid].rot[(i + 1) % 4]

    def sigma_inv(self, d: int) -> int:
        vid, i = self._dart_pos[d]
        return self.vertices[vid].rot[(i - 1) % 4]

    def straight(self, d: int) -> int:
        vid, i = self._dart_pos[d]
        return self.vertices[vid].rot[(i + 2) % 4]

    def arcs(self):
        return sorted({tuple(sorted((d, e))) for d, e in self.theta.items()})

    def n_crossings(self) -> int:
        return sum(1 for v in self.vertices.values() if v.kind == CROSSING)

    def n_marked(self) -> int:
        return sum(1 for v in self.vertices.values() if v.kind == MARKED)

    def marked_vertices(self):
        return [v for v in self.vertices.values() if v.kind == MARKED]

    # -- circuits -----------------------------------------------------------

    def circuits(self):
        """Closed straight-through walks; each dart lies on exactly one.

        A circuit is returned as the dart sequence starting from its smallest
        dart in the direction for which that dart departs its vertex.
        """
        if self._circuits is None:
            seen = set()
            out = []
            for d0 in sorted(self.theta):
                if d0 in seen:
                    continue
                seq = []
                d = d0
                while True:
                    seq.append(d)
                    seen.add(d)
                    e = self.theta[d]
                    seq.append(e)
                    seen.add(e)
                    d = self.straight(e)
                    if d == d0:
                        break
                out.append(tuple(seq))
            self._circuits = out
            self._circuit_of = {}
            for seq in out:
                key = min(seq)
                for d in seq:
                    self._circuit_of[d] = key
        return self._circuits

    def circuit_key(self, d: int) -> int:
        self.circuits()
        return self._circuit_of[d]

    def circuit_darts(self, key: int):
        for seq in self.circuits():
            if min(seq) == key:
                return seq
        raise KeyError(key)

    def role_of_dart(self, d: int) -> Optional[Role]:
        return self.circuit_roles.get(self.circuit_key(d))

    def writhe(self, key: int) -> int:
        """Signed self-crossing count of one circuit (orientation independent)."""
        from .invariants import crossing_sign  # local import to avoid a cycle

        seq = self.circuit_darts(key)
        # departure darts sit at even positions of the canonical traversal
        incoming = {d: (i % 2 == 1) for i, d in enumerate(seq)}
        w = 0
        for v in self.vertices.values():
            if v.kind == CROSSING and all(d in incoming for d in v.rot):
                w += crossing_sign(v, incoming)
        return w

    # -- components, faces, regions ------------------------------------------

    def pieces(self):
        return [("m", min(ds)) for ds in self._map_components()] + \
               [("c", cid) for cid in sorted(self.circles)]

    def _map_components(self):
        if self._components is None:
            parent = {d: d for d in self.theta}

            def find(x):
                while parent[x] != x:
                    parent[x] = parent[parent[x]]
                    x = parent[x]
                return x

            def union(a, b):
                ra, rb = find(a), find(b)
                if ra != rb:
                    parent[ra] = rb

            for d, e in self.theta.items():
                union(d, e)
            for v in self.vertices.values():
                for d in v.rot[1:]:
                    union(v.rot[0], d)
            groups = {}
            for d in self.theta:
                groups.setdefault(find(d), set()).add(d)
            self._components = sorted(groups.values(), key=min)
        return self._components

    def piece_of_dart(self, d: int) -> Piece:
        for ds in self._map_components():
            if d in ds:
                return ("m", min(ds))
        raise KeyError(d)

    def piece_darts(self, piece: Piece):
        for ds in self._map_components():
            if min(ds) == piece[1]:
                return ds
        raise KeyError(piece)

    def faces(self):
        """All map faces as (face key, dart cycle), grouped per piece."""
        if self._faces is None:
            seen = set()
            per_piece = {}
            for d0 in sorted(self.theta):
                if d0 in seen:
                    continue
                cyc = []
                d = d0
                while True:
                    cyc.append(d)
                    seen.add(d)
                    d = self.sigma(self.theta[d])
                    if d == d0:
                        break
                piece = self.piece_of_dart(d0)
                per_piece.setdefault(piece, []).append((min(cyc), tuple(cyc)))
            self._faces = {p: sorted(fl) for p, fl in per_piece.items()}
            self._face_of = {}
            for p, fl in self._faces.items():
                for key, cyc in fl:
                    for d in cyc:
                        self._face_of[d] = key
        return self._faces

    def faces_of_piece(self, piece: Piece):
        if piece[0] == "c":
            return [("out", None), ("in", None)]
        return self.faces().get(piece, [])

    def face_of_dart(self, d: int) -> FaceKey:
        self.faces()
        return self._face_of[d]

    def face_cycle(self, piece: Piece, key: FaceKey):
        for k, cyc in self.faces().get(piece, []):
            if k == key:
                return cyc
        raise KeyError((piece, key))

    def sector_face(self, vid: int, i: int) -> FaceKey:
        """Face key of the corner between rotation positions i and i+1 at vid."""
        return self.face_of_dart(self.vertices[vid].rot[(i + 1) % 4])

    def regions(self):
        """Union-find over face slots induced by the containment forest.

        Returns (slot -> region representative, region -> slot list).  Slots
        are (piece, face key); every root piece's outer face is fused into one
        shared region.
        """
        slots = []
        for piece in self.pieces():
            for key, _ in self.faces_of_piece(piece):
                slots.append((piece, key))
        parent = {s: s for s in slots}

        def find(s):
            while parent[s] != s:
                parent[s] = parent[parent[s]]
                s = parent[s]
            return s

        def union(a, b):
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb

        outer_slots = []
        for piece, place in self.placement.items():
            own_slot = (piece, "out") if piece[0] == "c" else (piece, place.outer_face)
            if place.parent is None:
                outer_slots.append(own_slot)
            else:
                union((place.parent, place.parent_face), own_slot)
        for s in outer_slots[1:]:
            union(outer_slots[0], s)
        groups = {}
        for s in slots:
            groups.setdefault(find(s), []).append(s)
        return {s: find(s) for s in slots}, groups

    # -- misc -----------------------------------------------------------------

    def with_name(self, name: str) -> "Diagram":
        d = Diagram(self.vertices, self.theta, self.circles, self.circuit_roles,
                    self.placement, name)
        return d

    def complexity(self):
        return (self.n_crossings(), self.n_marked(),
                len(self.circuits()) + len(self.circles))

    def __repr__(self):
        return (f"Diagram({self.name or 'unnamed'}: {len(self.vertices)} vertices, "
                f"{len(self.theta) // 2} arcs, {len(self.circles)} circles)")


# -- validation ---------------------------------------------------------------

SEV_ERROR = "error"
SEV_WARNING = "warning"


@dataclass(frozen=True)
class Finding:
    severity: str
    code: str
    site: str


@dataclass(frozen=True)
class ValidationReport:
    structural_ok: bool
    findings: Tuple[Finding, ...]

    def errors(self):
        return [f for f in self.findings if f.severity == SEV_ERROR]

    def text(self) -> str:
        lines = [f"structural_ok={'true' if self.structural_ok else 'false'}"]
        for f in self.findings:
            lines.append(f"{f.severity} {f.code} {f.site}")
        return "\n".join(lines) + "\n"


def validate_structure(d: Diagram) -> ValidationReport:
    """Semantic checks on a well-formed diagram.

    Arity violations raise :class:`MalformedMap` at construction time and are
    therefore not reportable here; this reports role placement, sphere
    embedding and containment problems.
    """
    findings = []

    def err(code, site):
        findings.append(Finding(SEV_ERROR, code, site))

    def warn(code, site):
        findings.append(Finding(SEV_WARNING, code, site))

    # roles must exist and fit their circuit kind
    for seq in d.circuits():
        key = min(seq)
        role = d.circuit_roles.get(key)
        if role is None:
            err("MissingRole", f"circuit {key}")
        elif role.kind == DOTTED and role.framing is not None:
            err("DottedFraming", f"circuit {key}")
        elif role.kind == HANDLE and role.framing is None:
            err("HandleWithoutFraming", f"circuit {key}")
    for cid, role in d.circles.items():
        if role is None:
            err("MissingRole", f"circle c{cid}")
        elif role.kind == DOTTED and role.framing is not None:
            err("DottedFraming", f"circle c{cid}")
        elif role.kind == HANDLE and role.framing is None:
            err("HandleWithoutFraming", f"circle c{cid}")

    # marked vertices sit on Link circuits only; dotted circles stay crossing-free
    for v in sorted(d.vertices.values(), key=lambda v: v.vid):
        roles = []
        for dart in v.rot:
            r = d.circuit_roles.get(d.circuit_key(dart))
            roles.append(r.kind if r else None)
        if v.kind == MARKED:
            if any(r != LINK for r in roles):
                err("RoleViolation", f"vertex {v.vid}")
        else:
            strand_roles = {roles[0], roles[2]}, {roles[1], roles[3]}
            if strand_roles[0] == {DOTTED} and strand_roles[1] == {DOTTED} and \
                    d.circuit_key(v.rot[0]) != d.circuit_key(v.rot[1]):
                err("DottedDottedCrossing", f"vertex {v.vid}")

    # each connected map embeds in the sphere
    for piece in d.pieces():
        if piece[0] != "m":
            continue
        ds = d.piece_darts(piece)
        nv = len({d._dart_pos[x][0] for x in ds})
        ne = len(ds) // 2
        nf = len(d.faces().get(piece, []))
        if nv - ne + nf != 2:
            err("SphereEmbedding", f"map {piece[1]}")

    # containment forest: acyclic, faces exist, single shared sphere
    ok_tree = True
    pieces = set(d.pieces())
    for piece, place in d.placement.items():
        if place.parent is not None:
            if place.parent not in pieces:
                err("ContainmentDangling", f"{piece} in {place.parent}")
                ok_tree = False
                continue
            pfaces = {k for k, _ in d.faces_of_piece(place.parent)}
            if place.parent_face not in pfaces:
                err("ContainmentBadFace", f"{piece} in {place.parent}:{place.parent_face}")
                ok_tree = False
        if piece[0] == "m":
            ofaces = {k for k, _ in d.faces_of_piece(piece)}
            if place.outer_face not in ofaces:
                err("ContainmentBadFace", f"{piece} outer {place.outer_face}")
                ok_tree = False
    if ok_tree:
        # cycle check by walking parents
        for piece in pieces:
            seen = set()
            p = piece
            while p is not None:
                if p in seen:
                    err("ContainmentCycle", f"{piece}")
                    ok_tree = False
                    break
                seen.add(p)
                p = d.placement[p].parent if p in d.placement else None
    if ok_tree and pieces:
        # the piece/region incidence must form a tree over one sphere
        _, groups = d.regions()
        n_slots = sum(len(d.faces_of_piece(p)) for p in pieces)
        n_regions = len(groups)
        if n_slots != len(pieces) + n_regions - 1:
            err("ContainmentNotTree", "diagram")
        else:
            # connectivity of the piece-region graph
            adj = {}
            slot_region, _ = d.regions()
            for (piece, key), reg in slot_region.items():
                adj.setdefault(piece, set()).add(("r", reg))
                adj.setdefault(("r", reg), set()).add(piece)
            start = next(iter(pieces))
            stack, seen = [start], {start}
            while stack:
                x = stack.pop()
                for y in adj.get(x, ()):
                    if y not in seen:
                        seen.add(y)
                        stack.append(y)
            if len(seen) != len(pieces) + n_regions:
                err("ContainmentDisconnected", "diagram")

    # surface presence
    has_link = any(r.kind == LINK for r in d.circuit_roles.values()) or \
        any(r.kind == LINK for r in d.circles.values())
    if not has_link:
        warn("EmptySurface", "diagram")
    else:
        warn("UnlinkUncertified", "diagram")

    ok = not any(f.severity == SEV_ERROR for f in findings)
    return ValidationReport(ok, tuple(findings))


def make_diagram(vertices=(), edges=(), roles=None, circles=None, placement=None,
                 name=""):
    """Convenience constructor.

    ``vertices``: iterables ``(vid, 'x', rot, over_pair)`` or
    ``(vid, 'm', rot, anchor)``.  ``roles`` maps any dart of a circuit (or
    ``('c', cid)``) to its :class:`Role`.
    """
    vs = {}
    for vid, kind, rot, datum in vertices:
        if kind in ("x", CROSSING):
            vs[vid] = Vertex(vid, CROSSING, tuple(rot), over=frozenset(datum))
        else:
            vs[vid] = Vertex(vid, MARKED, tuple(rot), anchor=datum)
    theta = {}
    for a, b in edges:
        theta[a] = b
        theta[b] = a
    circle_roles = {}
    d0 = Diagram(vs, theta, circles={cid: r for cid, r in (circles or {}).items()})
    circuit_roles = {}
    for key, role in (roles or {}).items():
        if isinstance(key, tuple) and key[0] == "c":
            circle_roles[key[1]] = role
        else:
            circuit_roles[d0.circuit_key(key)] = role
    all_circles = dict(circles or {})
    all_circles.update(circle_roles)
    return Diagram(vs, theta, circles=all_circles, circuit_roles=circuit_roles,
                   placement=placement, name=name)


def trace_circuits(d: Diagram):
    """Public circuit listing with inherited roles.

    Returns a list of (key, role, dart tuple); free circles are not included
    (they carry no darts) and are reported by the caller from ``d.circles``.
    """
    report = validate_structure(d)
    if not report.structural_ok:
        raise MalformedMap(f"invalid diagram: {[f.code for f in report.errors()]}")
    out = []
    for seq in d.circuits():
        key = min(seq)
        out.append((key, d.circuit_roles.get(key), seq))
    return out
