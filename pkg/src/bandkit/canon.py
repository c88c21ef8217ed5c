"""Canonical forms for diagrams.

The canonical string is invariant under dart relabeling and under spherical
re-rooting (any region may serve as the outer one), and distinguishes mirror
images: labelings are generated by breadth-first traversals that follow the
rotation in its given counterclockwise direction only.

Connected maps are canonicalized by minimizing a structural encoding over all
admissible start darts; the containment forest is canonicalized by minimizing
over the choice of outer region and sorting sibling subtrees.
"""

from __future__ import annotations

import hashlib

from .diagram import CROSSING, Diagram, MARKED


def _bfs_labeling(d: Diagram, start: int):
    """Deterministic labeling of the start dart's component."""
    lab = {start: 0}
    order = [start]
    i = 0
    while i < len(order):
        x = order[i]
        i += 1
        for y in (d.sigma(x), d.theta[x]):
            if y not in lab:
                lab[y] = len(order)
                order.append(y)
    return lab, order


def _piece_string(d: Diagram, lab, order):
    rows = []
    for x in order:
        v = d.vertex_of(x)
        if v.kind == CROSSING:
            tag = "o" if x in v.over else "u"
        else:
            tag = "a" if x == v.anchor else "m"
        rows.append(f"{lab[d.sigma(x)]}.{lab[d.theta[x]]}.{tag}")
    roles = []
    seen = set()
    for x in order:
        key = d.circuit_key(x)
        if key in seen:
            continue
        seen.add(key)
        role = d.circuit_roles.get(key)
        token = role.token() if role else "?"
        roles.append((min(lab[y] for y in d.circuit_darts(key)), token))
    roles.sort()
    return ";".join(rows) + "|" + ",".join(f"{m}:{t}" for m, t in roles)


def _best_map_labeling(d: Diagram, piece, starts):
    best = None
    for s in sorted(starts):
        lab, order = _bfs_labeling(d, s)
        enc = _piece_string(d, lab, order)
        if best is None or enc < best[0]:
            best = (enc, lab)
    return best


class _Canonicalizer:
    def __init__(self, d: Diagram):
        self.d = d
        self.slot_region, self.region_slots = d.regions()
        self.memo = {}

    def piece_enc(self, piece, via_face):
        """Encoding of the subtree hanging from `piece` entered at `via_face`.

        Returns (string, units) where units lists circuits and circles in
        canonical order for reproducible invariant indexing.
        """
        key = (piece, via_face)
        if key in self.memo:
            return self.memo[key]
        d = self.d
        if piece[0] == "c":
            role = d.circles[piece[1]]
            # the two sides of a crossing-free circle are interchangeable, so
            # children are encoded on whichever side we did not enter from
            kid_parts = self.children_enc(piece, {"in", "out"} - {via_face})
            s = f"circle[{role.token()}]" + kid_parts[0]
            units = [("circle", piece[1])] + kid_parts[1]
            self.memo[key] = (s, units, None)
        else:
            starts = d.face_cycle(piece, via_face)
            enc, lab = _best_map_labeling(d, piece, starts)
            circuits = sorted(
                {d.circuit_key(x) for x in lab},
                key=lambda k: min(lab[y] for y in d.circuit_darts(k)))
            units = [("circuit", k) for k in circuits]
            kid_parts = self.children_enc(piece, set(), lab=lab, skip_face=via_face)
            s = "map[" + enc + "]" + kid_parts[0]
            units += kid_parts[1]
            self.memo[key] = (s, units, lab)
        return self.memo[key]

    def children_enc(self, piece, faces, lab=None, skip_face=None):
        d = self.d
        entries = []
        for fkey, _ in d.faces_of_piece(piece):
            if piece[0] == "m" and fkey == skip_face:
                continue
            if piece[0] == "c" and fkey not in faces:
                continue
            reg = self.slot_region[(piece, fkey)]
            kids = []
            for (q, qface) in self.region_slots[reg]:
                if q == piece:
                    continue
                kids.append(self.piece_enc(q, qface))
            if not kids:
                continue
            kids.sort(key=lambda t: t[0])
            if piece[0] == "m":
                flabel = min(lab[x] for x in d.face_cycle(piece, fkey))
            else:
                flabel = "*"  # circle sides carry no intrinsic name
            entries.append((flabel, kids))
        entries.sort(key=lambda t: str(t[0]))
        if not entries:
            return "", []
        parts = []
        units = []
        for flabel, kids in entries:
            parts.append(f"@{flabel}(" + ",".join(k[0] for k in kids) + ")")
            for k in kids:
                units += k[1]
        return "{" + "".join(parts) + "}", units

    def rooted(self, region):
        tops = []
        for (piece, fkey) in self.region_slots[region]:
            tops.append(self.piece_enc(piece, fkey))
        tops.sort(key=lambda t: t[0])
        s = "sphere{" + ",".join(t[0] for t in tops) + "}"
        units = []
        for t in tops:
            units += t[1]
        return s, units


def canonical_data(d: Diagram):
    """(canonical string, canonical unit order) for a diagram."""
    if d._canon_cache is not None:
        return d._canon_cache
    if not d.pieces():
        d._canon_cache = ("sphere{}", [])
        return d._canon_cache
    c = _Canonicalizer(d)
    best = None
    for region in sorted(c.region_slots, key=str):
        s, units = c.rooted(region)
        if best is None or s < best[0]:
            best = (s, units)
    d._canon_cache = best
    return best


def canonical_form(d: Diagram) -> str:
    return canonical_data(d)[0]


def isomorphic(d1: Diagram, d2: Diagram) -> bool:
    return canonical_form(d1) == canonical_form(d2)


def dedup_key(d: Diagram) -> str:
    return hashlib.sha256(canonical_form(d).encode()).hexdigest()


def canonical_unit_order(d: Diagram):
    """Circuits and circles in canonical order; used to index lambda and mu."""
    return canonical_data(d)[1]
