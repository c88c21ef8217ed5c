#!/usr/bin/env python3
"""Brute-force search for small planar marked-vertex patterns.

Used at build time to derive the fixture layouts that are frozen into
bandkit.builders; results are transcribed there with their properties.
"""

import itertools
import sys

sys.path.insert(0, "src")

from bandkit.diagram import Diagram, ROLE_LINK, Vertex, make_diagram

MARKED = "marked"
CROSSING = "crossing"


def matchings(darts):
    darts = sorted(darts)
    if not darts:
        yield []
        return
    a = darts[0]
    for b in darts[1:]:
        rest = [x for x in darts[1:] if x != b]
        for m in matchings(rest):
            yield [(a, b)] + m


def resolution_count(d, origin):
    # union-find over smoothed darts; counts all circles
    parent = {x: x for x in d.theta}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        parent[find(a)] = find(b)

    for a, b in d.theta.items():
        union(a, b)
    for v in d.vertices.values():
        if v.kind == CROSSING:
            union(v.rot[0], v.rot[2])
            union(v.rot[1], v.rot[3])
        else:
            p = v.rot.index(v.anchor)
            if origin == "plus":
                p += 1
            union(v.rot[p % 4], v.rot[(p + 1) % 4])
            union(v.rot[(p + 2) % 4], v.rot[(p + 3) % 4])
    return len({find(x) for x in d.theta})


def orientable_xor(d):
    # 2-colorability of the inequality graph
    adj = {x: set() for x in d.theta}
    for a, b in d.theta.items():
        adj[a].add(b)
    for v in d.vertices.values():
        if v.kind == CROSSING:
            adj[v.rot[0]].add(v.rot[2]); adj[v.rot[2]].add(v.rot[0])
            adj[v.rot[1]].add(v.rot[3]); adj[v.rot[3]].add(v.rot[1])
        else:
            for i in range(3):
                a, b = v.rot[i], v.rot[i + 1]
                adj[a].add(b); adj[b].add(a)
    color = {}
    for s in adj:
        if s in color:
            continue
        color[s] = 0
        stack = [s]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in color:
                    color[y] = 1 - color[x]
                    stack.append(y)
                elif color[y] == color[x]:
                    return False
    return True


def surface_components(d):
    parent = {x: x for x in d.theta}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        parent[find(a)] = find(b)

    for a, b in d.theta.items():
        union(a, b)
    for v in d.vertices.values():
        if v.kind == CROSSING:
            union(v.rot[0], v.rot[2])
            union(v.rot[1], v.rot[3])
        else:
            for x in v.rot[1:]:
                union(v.rot[0], x)
    return len({find(x) for x in d.theta})


def is_planar_connected(d):
    pieces = [p for p in d.pieces() if p[0] == "m"]
    if len(pieces) != 1:
        return False
    piece = pieces[0]
    ds = d.piece_darts(piece)
    nv = len(d.vertices)
    ne = len(ds) // 2
    nf = len(d.faces()[piece])
    return nv - ne + nf == 2


def search(n_marked, n_crossing, want):
    """want: dict with keys c_minus, c_plus, orientable, components."""
    n = n_marked + n_crossing
    found = []
    over_options = [(0, 2)]  # over choice irrelevant to resolutions/orientability
    for match in matchings(range(4 * n)):
        vertices = []
        for i in range(n_marked):
            vertices.append((i, "m", tuple(range(4 * i, 4 * i + 4)), 4 * i))
        for j in range(n_crossing):
            i = n_marked + j
            vertices.append((i, "x", tuple(range(4 * i, 4 * i + 4)),
                             (4 * i, 4 * i + 2)))
        try:
            d = make_diagram(vertices=vertices, edges=match,
                             roles={k: ROLE_LINK for k in range(0, 4 * n, 4)})
        except Exception:
            continue
        if not is_planar_connected(d):
            continue
        cm = resolution_count(d, "minus")
        cp = resolution_count(d, "plus")
        if (cm, cp) != (want["c_minus"], want["c_plus"]):
            continue
        if orientable_xor(d) != want["orientable"]:
            continue
        if surface_components(d) != want["components"]:
            continue
        found.append((match, cm, cp))
        if len(found) >= 8:
            break
    return found


if __name__ == "__main__":
    print("== torus candidates: 2 marked, 0 crossings, (1,1), orientable")
    for m, cm, cp in search(2, 0, dict(c_minus=1, c_plus=1, orientable=True, components=1)):
        print("  edges", m)
    print("== klein candidates: 2 marked, 0 crossings, (1,1), nonorientable")
    for m, cm, cp in search(2, 0, dict(c_minus=1, c_plus=1, orientable=False, components=1)):
        print("  edges", m)
    print("== klein candidates: 2 marked, 1 crossing, (1,1), nonorientable")
    for m, cm, cp in search(2, 1, dict(c_minus=1, c_plus=1, orientable=False, components=1)):
        print("  edges", m)
    print("== klein candidates: 2 marked, 2 crossings, (1,1), nonorientable")
    for m, cm, cp in search(2, 2, dict(c_minus=1, c_plus=1, orientable=False, components=1)):
        print("  edges", m)
