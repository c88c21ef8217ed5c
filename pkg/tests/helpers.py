"""Hand-built diagrams shared across the test suite."""

from bandkit.diagram import ROLE_LINK, Role, handle_role, make_diagram


def ring(role=ROLE_LINK):
    """One crossing-free round circle."""
    return make_diagram(circles={0: role})


def two_rings():
    return make_diagram(circles={0: ROLE_LINK, 1: ROLE_LINK})


def kinked_ring():
    """Round Link circle with a single R1 kink.

    Vertex rotation (0, 1, 2, 3) ccw; the small loop joins darts 2-3, the big
    loop joins 0-1.  One circuit, three faces.
    """
    return make_diagram(
        vertices=[(0, "x", (0, 1, 2, 3), (0, 2))],
        edges=[(0, 1), (2, 3)],
        roles={0: ROLE_LINK},
    )


def clasp():
    """Hopf clasp: two overlapping circles, linking number +1.

    Lens picture with intersections u (top) and w (bottom).  At u the ccw legs
    are (B-up, A-up, B-lens, A-lens) = (0, 1, 2, 3); at w they are
    (A-lens, B-lens, A-down, B-down) = (4, 5, 6, 7).  B is over at u and A
    over at w, which makes both crossings positive for the canonical circuit
    orientations.
    """
    return make_diagram(
        vertices=[
            (0, "x", (0, 1, 2, 3), (0, 2)),
            (1, "x", (4, 5, 6, 7), (4, 6)),
        ],
        edges=[(1, 6), (3, 4), (0, 7), (2, 5)],
        roles={0: ROLE_LINK, 1: ROLE_LINK},
    )


def bubble():
    """One circle passing twice through one marked vertex (a cup on a strand).

    Minus resolution: two circles; plus resolution: one.
    """
    return make_diagram(
        vertices=[(0, "m", (0, 1, 2, 3), 0)],
        edges=[(0, 1), (2, 3)],
        roles={0: ROLE_LINK},
    )


def trefoil(role=ROLE_LINK, positive=True):
    """3-crossing trefoil as the closure of the 2-braid with three like twists.

    Crossing i sits at height i with legs NE=4i, NW=4i+1, SW=4i+2, SE=4i+3 in
    counterclockwise rotation; over strand is the NE-SW diagonal for the
    positive version and NW-SE for the mirror.
    """
    over = (lambda i: (4 * i, 4 * i + 2)) if positive else (lambda i: (4 * i + 1, 4 * i + 3))
    return make_diagram(
        vertices=[(i, "x", (4 * i, 4 * i + 1, 4 * i + 2, 4 * i + 3), over(i))
                  for i in range(3)],
        edges=[(2, 5), (3, 4), (6, 9), (7, 8), (10, 1), (11, 0)],
        roles={0: role},
    )


def rp2_standard():
    """Nonorientable control: unknot with an incoherently attached band pair.

    Every diagram in this encoding has even Euler characteristic (resmoothing
    a vertex changes the circle count by one, so c_minus + c_plus + |v| is
    even), so the honest-to-goodness projective plane needs the reserved
    twist token; the shipped control is the standard unknotted Klein bottle.
    """
    return make_diagram(
        vertices=[(0, "m", (0, 1, 2, 3), 0), (1, "m", (4, 5, 6, 7), 4),
                  (2, "x", (8, 9, 10, 11), (8, 10))],
        edges=[(0, 4), (1, 7), (2, 8), (3, 11), (5, 10), (6, 9)],
        roles={0: ROLE_LINK},
    )
