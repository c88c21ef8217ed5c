"""Dart-level surgery with containment bookkeeping.

Moves and resolutions are written against :class:`Surgeon`: they cut and join
arcs, add or excise vertices, and promote or free circles.  ``finalize``
rebuilds the containment forest by tracking face regions through the surgery:

* every new face inherits the region of the old faces its surviving darts lay
  on (regions merge when a move merges faces);
* an old region whose darts end up split across several faces of one piece is
  divided, with non-face content following the sub-face holding the smallest
  surviving dart;
* faces made entirely of fresh darts carry an explicit hint (an old dart whose
  region they join, a circle side, or "fresh" for newly enclosed disks).

Closed arc chains left without vertices become free circles automatically;
their two sides join the regions of the faces that flanked the chain.
"""

from __future__ import annotations

from .diagram import CROSSING, Diagram, MARKED, Place, Role, Vertex

FRESH = "fresh"


class SurgeryError(Exception):
    """Internal invariant of a rewrite violated; indicates a bug in a move."""


class Surgeon:
    def __init__(self, d: Diagram):
        self.old = d
        self.vertices = dict(d.vertices)
        self.theta = dict(d.theta)
        self.circles = dict(d.circles)
        self.removed_vertices = set()
        self.virtual_links = []  # (dart of removed vertex, dart of removed vertex)
        self.role_hints = {}     # fresh dart -> Role
        self.face_hints = {}     # fresh dart -> old dart | ("cslot", cid, side) | FRESH
        self._next_dart = max(d.theta, default=-1) + 1
        self._next_vid = max(d.vertices, default=-1) + 1
        self._next_cid = max(d.circles, default=-1) + 1

    # -- allocation ---------------------------------------------------------

    def fresh_darts(self, n, base=None):
        if base is not None:
            block = list(range(base, base + n))
            if any(b in self.theta or b < self._next_dart for b in block):
                raise SurgeryError(f"fresh dart block {base}..{base + n - 1} not free")
            self._next_dart = base + n
            return block
        block = list(range(self._next_dart, self._next_dart + n))
        self._next_dart += n
        return block

    def fresh_vid(self):
        self._next_vid += 1
        return self._next_vid - 1

    def fresh_cid(self):
        self._next_cid += 1
        return self._next_cid - 1

    # -- structural edits -----------------------------------------------------

    def add_crossing(self, rot, over):
        vid = self.fresh_vid()
        self.vertices[vid] = Vertex(vid, CROSSING, tuple(rot), over=frozenset(over))
        return vid

    def add_marked(self, rot, anchor):
        vid = self.fresh_vid()
        self.vertices[vid] = Vertex(vid, MARKED, tuple(rot), anchor=anchor)
        return vid

    def replace_vertex(self, v: Vertex):
        self.vertices[v.vid] = v

    def cut(self, a):
        """Remove the arc at dart a; returns the old partner."""
        b = self.theta.pop(a)
        if self.theta.pop(b) != a:
            raise SurgeryError("involution corrupt")
        return b

    def join(self, a, b):
        if a in self.theta or b in self.theta:
            raise SurgeryError(f"joining paired darts {a},{b}")
        if a == b:
            raise SurgeryError(f"cannot join dart {a} to itself")
        self.theta[a] = b
        self.theta[b] = a

    def excise_vertex(self, vid, position_pairs):
        """Remove a vertex, virtually reconnecting through the given position
        pairs (e.g. [(0, 2), (1, 3)] passes straight through).

        Pairs may be partial: darts left unpaired absorb their arcs entirely,
        which is how a cap deletes the cup circle it caps off.
        """
        v = self.vertices.pop(vid)
        self.removed_vertices.add(vid)
        for i, j in position_pairs:
            self.virtual_links.append((v.rot[i], v.rot[j]))
        return v

    def remove_circle(self, cid):
        return self.circles.pop(cid)

    def add_circle_role(self, cid, role):
        self.circles[cid] = role

    # -- hints ---------------------------------------------------------------

    def hint_face(self, fresh_dart, where):
        self.face_hints[fresh_dart] = where

    def hint_role(self, dart, role):
        self.role_hints[dart] = role

    # -- finalize --------------------------------------------------------------

    def _resolve_virtual(self):
        """Collapse virtual links: returns (new theta, ghost cycles).

        A ghost cycle is a list of removed-vertex darts forming a closed chain,
        i.e. a freed crossing-free circle; each is reported with one old arc
        dart for region placement.
        """
        removed_darts = set()
        for vid in self.removed_vertices:
            v = self.old.vertices[vid]
            removed_darts.update(v.rot)
        vlink = {}
        for a, b in self.virtual_links:
            if a in vlink or b in vlink:
                raise SurgeryError("dart in two virtual links")
            vlink[a] = b
            vlink[b] = a

        theta = {}
        ghost_arcs = []
        seen = set()
        for a in list(self.theta):
            if a in seen or a in removed_darts:
                continue
            # walk from a through removed vertices
            b = self.theta[a]
            guard = 0
            while b in removed_darts:
                if b not in vlink:
                    raise SurgeryError(
                        f"surviving arc walks into unlinked removed dart {b}")
                b = self.theta[vlink[b]]
                guard += 1
                if guard > 10 ** 6:
                    raise SurgeryError("virtual walk does not terminate")
            theta[a] = b
            theta[b] = a
            seen.add(a)
            seen.add(b)
        # ghost cycles: removed darts whose arcs never reach a surviving dart
        visited = set()
        for a in removed_darts:
            if a in visited or a not in self.theta or a not in vlink:
                continue
            cyc = []
            b = a
            ghost = True
            guard = 0
            while True:
                cyc.append(b)
                visited.add(b)
                nxt = self.theta[b]
                if nxt not in removed_darts or nxt not in vlink:
                    ghost = False
                    break
                cyc.append(nxt)
                visited.add(nxt)
                b = vlink[nxt]
                guard += 1
                if guard > 10 ** 6:
                    raise SurgeryError("ghost walk does not terminate")
                if b == a:
                    break
            if ghost and len(cyc) >= 2:
                ghost_arcs.append(cyc)
        # drop removed darts from the working involution view
        for a in removed_darts:
            self.theta.pop(a, None)
        return theta, ghost_arcs

    def finalize(self, name="") -> Diagram:
        old = self.old
        theta_new, ghosts = self._resolve_virtual()
        # keep any arcs added during surgery between fresh darts
        for a, b in self.theta.items():
            if a not in theta_new:
                theta_new[a] = b

        circles = dict(self.circles)
        ghost_info = []
        for cyc in ghosts:
            cid = self.fresh_cid()
            role = old.circuit_roles.get(old.circuit_key(cyc[0]))
            circles[cid] = role
            ghost_info.append((cid, cyc[0]))

        draft = Diagram(self.vertices, theta_new, circles=circles)

        # roles for the new circuits
        circuit_roles = {}
        for seq in draft.circuits():
            candidates = set()
            for dart in seq:
                if dart in old.theta:
                    r = old.circuit_roles.get(old.circuit_key(dart))
                    if r is not None:
                        candidates.add(r)
                if dart in self.role_hints:
                    candidates.add(self.role_hints[dart])
            if len(candidates) > 1:
                raise SurgeryError(f"circuit {min(seq)} inherits conflicting roles {candidates}")
            if not candidates:
                raise SurgeryError(f"circuit {min(seq)} has no role source")
            circuit_roles[min(seq)] = candidates.pop()

        placement = self._rebuild_placement(draft, ghost_info)
        return Diagram(self.vertices, theta_new, circles=circles,
                       circuit_roles=circuit_roles, placement=placement, name=name)

    # -- placement reconstruction ----------------------------------------------

    def _rebuild_placement(self, draft: Diagram, ghost_info):
        old = self.old
        pieces = draft.pieces()
        if not pieces:
            return {}
        old_has_pieces = bool(old.pieces())
        if old_has_pieces:
            old_slot_region, _ = old.regions()
        else:
            old_slot_region = {}

        def old_region_of_dart(dart):
            piece = old.piece_of_dart(dart)
            return old_slot_region[(piece, old.face_of_dart(dart))]

        # union-find over region tokens (old region reps and fresh tokens)
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

        def resolve_hint(h, fallback_token):
            if h == FRESH:
                return fallback_token
            if isinstance(h, tuple) and h and h[0] == "cslot":
                return old_slot_region[(("c", h[1]), h[2])]
            return old_region_of_dart(h)

        # assign a region token to every new slot
        slot_token = {}
        new_map_slots = []
        for piece in pieces:
            if piece[0] == "c":
                continue
            for fkey, cyc in draft.faces().get(piece, []):
                slot = (piece, fkey)
                new_map_slots.append((slot, cyc))
                tokens = set()
                for dart in cyc:
                    if dart in old.theta:
                        tokens.add(old_region_of_dart(dart))
                    elif dart in self.face_hints:
                        tokens.add(resolve_hint(self.face_hints[dart], ("new", slot)))
                if not tokens:
                    raise SurgeryError(f"face {slot} has no region source; move must hint")
                tokens = sorted(tokens, key=str)
                for t in tokens[1:]:
                    union(tokens[0], t)
                slot_token[slot] = tokens[0]

        # circle side regions: freed chains from their flanking faces,
        # surviving circles from their old slots
        ghost_of = dict(ghost_info)
        for piece in pieces:
            if piece[0] != "c":
                continue
            cid = piece[1]
            if cid in ghost_of:
                a = ghost_of[cid]  # an old arc dart of the freed chain
                slot_token[(piece, "out")] = old_region_of_dart(a)
                slot_token[(piece, "in")] = old_region_of_dart(old.theta[a])
            elif cid in old.circles:
                slot_token[(piece, "out")] = old_slot_region[(piece, "out")]
                slot_token[(piece, "in")] = old_slot_region[(piece, "in")]
            else:
                raise SurgeryError(f"circle {cid} has no region source")

        # split detection: one token claimed by several map faces
        groups = {}
        for (slot, cyc) in new_map_slots:
            groups.setdefault(find(slot_token[slot]), []).append((slot, cyc))
        final_region = {}
        for token, members in groups.items():
            if len(members) == 1:
                final_region[members[0][0]] = token
                continue

            def min_old_dart(cyc):
                olds = [x for x in cyc if x in old.theta]
                return min(olds) if olds else float("inf")

            heir = min(members, key=lambda m: min_old_dart(m[1]))
            for slot, cyc in members:
                final_region[slot] = token if slot == heir[0] else ("split", slot)
        token_heir = {find(slot_token[slot]): reg for slot, reg in final_region.items()}
        for piece in pieces:
            if piece[0] != "c":
                continue
            for side in ("out", "in"):
                slot = (piece, side)
                tok = find(slot_token[slot])
                final_region[slot] = token_heir.get(tok, tok)

        region_slots = {}
        for slot, reg in final_region.items():
            region_slots.setdefault(reg, []).append(slot)
        if len(final_region) != len(pieces) + len(region_slots) - 1:
            raise SurgeryError(
                f"region structure is not a tree: {len(final_region)} slots, "
                f"{len(pieces)} pieces, {len(region_slots)} regions")

        # orient the bipartite piece/region tree from a deterministic root
        root_region = min(region_slots, key=lambda r: str(sorted(region_slots[r], key=str)))
        placement = {}
        queue = [(root_region, None)]  # (region, (parent piece, parent face) | None)
        seen_regions = {root_region}
        seen_pieces = set()
        while queue:
            reg, via = queue.pop(0)
            for (piece, fkey) in sorted(region_slots[reg], key=str):
                if piece in seen_pieces:
                    continue
                seen_pieces.add(piece)
                if piece[0] == "c" and fkey == "in":
                    # circle entered from its inside: sides are symmetric, so
                    # relabel to keep 'out' facing the parent region
                    a = final_region[(piece, "in")]
                    b = final_region[(piece, "out")]
                    final_region[(piece, "in")] = b
                    final_region[(piece, "out")] = a
                    region_slots[a] = [s for s in region_slots[a] if s != (piece, "in")] + [(piece, "out")]
                    region_slots[b] = [s for s in region_slots[b] if s != (piece, "out")] + [(piece, "in")]
                    fkey = "out"
                outer = None if piece[0] == "c" else fkey
                if via is None:
                    placement[piece] = Place(None, None, outer)
                else:
                    placement[piece] = Place(via[0], via[1], outer)
                for gkey, _ in draft.faces_of_piece(piece):
                    if gkey == fkey:
                        continue
                    sub = final_region[(piece, gkey)]
                    if sub not in seen_regions:
                        seen_regions.add(sub)
                        queue.append((sub, (piece, gkey)))
        if len(placement) != len(pieces):
            raise SurgeryError("placement reconstruction missed pieces")
        return placement
