"""BULF v1: the line-oriented text format for diagrams.

Grammar (UTF-8, '#' comments, blank lines ignored)::

    bulf 1
    map <mapId>                  # opens a connected map block
      vertex <vid> crossing over=<dart>,<dart>
      vertex <vid> marked anchor=<dart>
      rot <vid> <d0> <d1> <d2> <d3>          # counterclockwise
      edge <dart> <dart>
      circle <cid>                           # free crossing-free circle
    role <circuitDart|c<cid>> link|dotted|handle:<int>
    embed <mapId|c<cid>> in <mapId>:<faceDart>
    embed <mapId|c<cid>> in c<cid>:in        # piece inside a free circle

Dart ids are file-global.  A child map's outward face is the face containing
its smallest dart; the serializer labels darts to satisfy this convention, so
no extra token is needed.  ``twist`` is reserved for a future band-framing
token and is rejected.
"""

from __future__ import annotations

from .canon import _Canonicalizer
from .diagram import (CROSSING, Diagram, MARKED, Place, Role, Vertex,
                      validate_structure)
from .errors import MalformedMap, ParseError, SemanticError

HEADER = "bulf 1"


# -- serialization -------------------------------------------------------------


def _winning_tree(d: Diagram):
    """Reconstruct the canonical rooting: document-ordered pieces and labels."""
    c = _Canonicalizer(d)
    best = None
    for region in sorted(c.region_slots, key=str):
        tops = sorted(c.region_slots[region],
                      key=lambda slot: c.piece_enc(slot[0], slot[1])[0])
        s = "sphere{" + ",".join(c.piece_enc(p, f)[0] for p, f in tops) + "}"
        if best is None or s < best[0]:
            best = (s, region, tops)
    _, region, tops = best
    order = []  # (piece, via_face, parent piece or None, parent face key or None)

    def visit(piece, via, parent, parent_face):
        order.append((piece, via, parent, parent_face))
        dd = c.d
        if piece[0] == "m":
            lab = c.piece_enc(piece, via)[2]
            face_items = []
            for fkey, _ in dd.faces_of_piece(piece):
                if fkey == via:
                    continue
                face_items.append((min(lab[x] for x in dd.face_cycle(piece, fkey)), fkey))
            face_items.sort()
            sides = [(fkey, fkey) for _, fkey in face_items]
        else:
            sides = [(side, side) for side in ({"in", "out"} - {via})]
        for fkey, _ in sides:
            reg = c.slot_region[(piece, fkey)]
            kids = [(q, qf) for (q, qf) in c.region_slots[reg] if q != piece]
            kids.sort(key=lambda slot: c.piece_enc(slot[0], slot[1])[0])
            for q, qf in kids:
                visit(q, qf, piece, fkey)

    for p, f in tops:
        visit(p, f, None, None)
    return c, order


def serialize(d: Diagram) -> str:
    report = validate_structure(d)
    if not report.structural_ok:
        raise SemanticError(
            f"cannot serialize invalid diagram: {[f.code for f in report.errors()]}")
    lines = [HEADER]
    if not d.pieces():
        return "\n".join(lines) + "\n"

    c, order = _winning_tree(d)
    map_id = {}
    circle_id = {}
    dart_label = {}
    base = 0
    for piece, via, _, _ in order:
        if piece[0] == "m":
            map_id[piece] = len(map_id)
            lab = c.piece_enc(piece, via)[2]
            for dart, l in lab.items():
                dart_label[dart] = base + l
            base += len(lab)
        else:
            circle_id[piece] = len(circle_id)

    def face_label(piece, fkey):
        return min(dart_label[x] for x in d.face_cycle(piece, fkey))

    # blocks
    synthetic_circles = []
    blocks = {}
    for piece, via, parent, _ in order:
        if piece[0] == "c":
            if parent is not None and parent[0] == "m":
                blocks.setdefault(parent, []).append(piece)
            else:
                synthetic_circles.append(piece)

    emitted_maps = []
    for piece, via, _, _ in order:
        if piece[0] != "m":
            continue
        emitted_maps.append(piece)
        lines.append(f"map {map_id[piece]}")
        piece_darts = d.piece_darts(piece)
        verts = sorted({d.vertex_of(x).vid for x in piece_darts})
        vorder = sorted(verts, key=lambda vid: min(dart_label[x] for x in d.vertices[vid].rot))
        new_vid = {vid: i for i, vid in enumerate(vorder)}
        for vid in vorder:
            v = d.vertices[vid]
            if v.kind == CROSSING:
                a, b = sorted(dart_label[x] for x in v.over)
                lines.append(f"vertex {new_vid[vid]} crossing over={a},{b}")
            else:
                lines.append(f"vertex {new_vid[vid]} marked anchor={dart_label[v.anchor]}")
            rot = [dart_label[x] for x in v.rot]
            k = rot.index(min(rot))
            rot = rot[k:] + rot[:k]
            lines.append(f"rot {new_vid[vid]} " + " ".join(str(x) for x in rot))
        for a, b in sorted(tuple(sorted((dart_label[x], dart_label[y])))
                           for x, y in d.arcs() if x in piece_darts):
            lines.append(f"edge {a} {b}")
        for circ in blocks.get(piece, []):
            lines.append(f"circle {circle_id[circ]}")
    if synthetic_circles:
        lines.append(f"map {len(map_id)}")
        for circ in synthetic_circles:
            lines.append(f"circle {circle_id[circ]}")

    # roles
    role_lines = []
    for seq in d.circuits():
        key = min(seq)
        role = d.circuit_roles[key]
        role_lines.append((min(dart_label[x] for x in seq), None, role.token()))
    for piece, cid in sorted(circle_id.items(), key=lambda kv: kv[1]):
        role_lines.append((None, cid, d.circles[piece[1]].token()))
    for dartlab, cid, token in sorted(role_lines, key=lambda t: (t[0] is None, t[0] or 0, t[1] or 0)):
        name = f"c{cid}" if dartlab is None else str(dartlab)
        lines.append(f"role {name} {token}")

    # placement
    for piece, via, parent, parent_face in order:
        if parent is None:
            continue
        child = f"c{circle_id[piece]}" if piece[0] == "c" else str(map_id[piece])
        if parent[0] == "c":
            lines.append(f"embed {child} in c{circle_id[parent]}:in")
        else:
            lines.append(f"embed {child} in {map_id[parent]}:{face_label(parent, parent_face)}")
    return "\n".join(lines) + "\n"


# -- parsing -------------------------------------------------------------------


def _tokens(text):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        yield lineno, line.split()


def deserialize(text: str) -> Diagram:
    it = list(_tokens(text))
    if not it:
        raise ParseError("empty document, expected 'bulf 1'")
    lineno, head = it[0]
    if head != ["bulf", "1"]:
        raise ParseError("expected header 'bulf 1'", lineno)

    vertex_decl = {}   # vid -> ("crossing", (a, b)) | ("marked", anchor)
    rot_decl = {}      # vid -> tuple of 4 darts
    vertex_map = {}    # vid -> map block id
    edges = []
    circle_block = {}  # cid -> map block id
    role_lines = []    # (lineno, target token, role token)
    embed_lines = []   # (lineno, child token, parent token, face token)
    cur_map = None
    map_ids = []

    def _int(tok, lineno, what):
        try:
            return int(tok)
        except ValueError:
            raise ParseError(f"expected integer {what}, got {tok!r}", lineno)

    for lineno, toks in it[1:]:
        kw = toks[0]
        if kw == "twist":
            raise ParseError("'twist' is reserved and not yet accepted", lineno)
        if kw == "map":
            if len(toks) != 2:
                raise ParseError("usage: map <id>", lineno)
            cur_map = _int(toks[1], lineno, "map id")
            if cur_map in map_ids:
                raise ParseError(f"duplicate map id {cur_map}", lineno)
            map_ids.append(cur_map)
        elif kw == "vertex":
            if cur_map is None:
                raise ParseError("vertex outside map block", lineno)
            if len(toks) != 4:
                raise ParseError("usage: vertex <vid> crossing|marked <datum>", lineno)
            vid = _int(toks[1], lineno, "vertex id")
            if vid in vertex_decl:
                raise ParseError(f"duplicate vertex {vid}", lineno)
            if toks[2] == "crossing":
                if not toks[3].startswith("over="):
                    raise ParseError("crossing needs over=<dart>,<dart>", lineno)
                pair = toks[3][5:].split(",")
                if len(pair) != 2:
                    raise ParseError("crossing needs over=<dart>,<dart>", lineno)
                vertex_decl[vid] = (CROSSING, (_int(pair[0], lineno, "dart"),
                                               _int(pair[1], lineno, "dart")))
            elif toks[2] == "marked":
                if not toks[3].startswith("anchor="):
                    raise ParseError("marked needs anchor=<dart>", lineno)
                vertex_decl[vid] = (MARKED, _int(toks[3][7:], lineno, "dart"))
            else:
                raise ParseError(f"unknown vertex kind {toks[2]!r}", lineno)
            vertex_map[vid] = cur_map
        elif kw == "rot":
            if cur_map is None:
                raise ParseError("rot outside map block", lineno)
            if len(toks) != 6:
                raise ParseError("usage: rot <vid> <d0> <d1> <d2> <d3>", lineno)
            vid = _int(toks[1], lineno, "vertex id")
            rot_decl[vid] = tuple(_int(t, lineno, "dart") for t in toks[2:])
        elif kw == "edge":
            if cur_map is None:
                raise ParseError("edge outside map block", lineno)
            if len(toks) != 3:
                raise ParseError("usage: edge <dart> <dart>", lineno)
            edges.append((lineno, _int(toks[1], lineno, "dart"), _int(toks[2], lineno, "dart")))
        elif kw == "circle":
            if cur_map is None:
                raise ParseError("circle outside map block", lineno)
            cid = _int(toks[1], lineno, "circle id")
            if cid in circle_block:
                raise ParseError(f"duplicate circle id {cid}", lineno)
            circle_block[cid] = cur_map
        elif kw == "role":
            if len(toks) != 3:
                raise ParseError("usage: role <circuit|c<cid>> <role>", lineno)
            role_lines.append((lineno, toks[1], toks[2]))
        elif kw == "embed":
            if len(toks) != 4 or toks[2] != "in":
                raise ParseError("usage: embed <piece> in <map>:<face>", lineno)
            if ":" not in toks[3]:
                raise ParseError("embed target must be <map>:<face>", lineno)
            parent, face = toks[3].split(":", 1)
            embed_lines.append((lineno, toks[1], parent, face))
        else:
            raise ParseError(f"unknown keyword {kw!r}", lineno)

    # assemble vertices
    if set(vertex_decl) != set(rot_decl):
        missing = set(vertex_decl) ^ set(rot_decl)
        raise SemanticError(f"vertex/rot lines do not match for ids {sorted(missing)}")
    vertices = {}
    for vid, (kind, datum) in vertex_decl.items():
        rot = rot_decl[vid]
        if kind == CROSSING:
            vertices[vid] = Vertex(vid, CROSSING, rot, over=frozenset(datum))
        else:
            vertices[vid] = Vertex(vid, MARKED, rot, anchor=datum)
    theta = {}
    for lineno, a, b in edges:
        if a in theta or b in theta:
            raise SemanticError(f"dart {a if a in theta else b} on two edges (line {lineno})")
        if a == b:
            raise SemanticError(f"edge {a} {b} is a loop on one dart (line {lineno})")
        theta[a] = b
        theta[b] = a

    def _parse_role(token, lineno):
        if token == "link":
            return Role("link")
        if token == "dotted":
            return Role("dotted")
        if token == "handle" or token.startswith("handle:"):
            parts = token.split(":")
            if len(parts) != 2:
                raise SemanticError(f"handle role needs a framing (line {lineno})")
            try:
                return Role("handle", int(parts[1]))
            except ValueError:
                raise SemanticError(f"bad framing {parts[1]!r} (line {lineno})")
        if token.startswith("dotted:"):
            raise SemanticError(f"dotted circuits carry no framing (line {lineno})")
        if token.startswith("link:"):
            raise SemanticError(f"link circuits carry no framing (line {lineno})")
        raise SemanticError(f"unknown role {token!r} (line {lineno})")

    circles = {}
    circuit_roles_raw = []
    for lineno, target, token in role_lines:
        role = _parse_role(token, lineno)
        if target.startswith("c"):
            cid = int(target[1:])
            if cid not in circle_block:
                raise SemanticError(f"role for unknown circle {target} (line {lineno})")
            circles[cid] = role
        else:
            circuit_roles_raw.append((lineno, int(target), role))
    for cid in circle_block:
        if cid not in circles:
            raise SemanticError(f"circle c{cid} has no role line")

    try:
        d0 = Diagram(vertices, theta, circles=circles)
    except MalformedMap as e:
        raise SemanticError(str(e))

    circuit_roles = {}
    for lineno, dart, role in circuit_roles_raw:
        if dart not in theta:
            raise SemanticError(f"role references unknown dart {dart} (line {lineno})")
        key = d0.circuit_key(dart)
        if key in circuit_roles and circuit_roles[key] != role:
            raise SemanticError(f"conflicting roles for circuit {key} (line {lineno})")
        circuit_roles[key] = role
    for seq in d0.circuits():
        if min(seq) not in circuit_roles:
            raise SemanticError(f"circuit {min(seq)} has no role line")

    # map blocks must each hold one connected component
    block_of_piece = {}
    for piece in d0.pieces():
        if piece[0] != "m":
            continue
        blocks = {vertex_map[d0.vertex_of(x).vid] for x in d0.piece_darts(piece)}
        if len(blocks) != 1:
            raise SemanticError(f"map block mixes components: {sorted(blocks)}")
        block_of_piece[piece] = blocks.pop()
    by_block = {}
    for piece, b in block_of_piece.items():
        if b in by_block:
            raise SemanticError(f"map block {b} holds two components")
        by_block[b] = piece

    def _resolve_piece(token, lineno):
        if token.startswith("c"):
            cid = int(token[1:])
            if cid not in circle_block:
                raise SemanticError(f"embed references unknown circle {token} (line {lineno})")
            return ("c", cid)
        b = int(token)
        if b not in by_block:
            raise SemanticError(f"embed references unknown or empty map {b} (line {lineno})")
        return by_block[b]

    placement = {}
    for lineno, child_tok, parent_tok, face_tok in embed_lines:
        child = _resolve_piece(child_tok, lineno)
        if parent_tok.startswith("c"):
            parent = _resolve_piece(parent_tok, lineno)
            if face_tok != "in":
                raise SemanticError(f"circle parents only expose face 'in' (line {lineno})")
            pface = "in"
        else:
            parent = _resolve_piece(parent_tok, lineno)
            dart = int(face_tok)
            if dart not in theta:
                raise SemanticError(f"embed face dart {dart} unknown (line {lineno})")
            if d0.piece_of_dart(dart) != parent:
                raise SemanticError(f"face dart {dart} not on parent map (line {lineno})")
            pface = d0.face_of_dart(dart)
        outer = None
        if child[0] == "m":
            outer = d0.face_of_dart(min(d0.piece_darts(child)))
        if child in placement:
            raise SemanticError(f"piece embedded twice (line {lineno})")
        placement[child] = Place(parent, pface, outer)

    return Diagram(vertices, theta, circles=circles, circuit_roles=circuit_roles,
                   placement=placement)
