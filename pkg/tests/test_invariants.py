import pytest

from bandkit.diagram import ROLE_LINK, Role, make_diagram
from bandkit.errors import DimensionMismatch, SameCircuit
from bandkit.invariants import (MINUS, PLUS, euler_characteristic,
                                homology_class_equal, homology_vector,
                                lattice_contains, linking_number, orientable,
                                orientable_by_cell_complex, resolve,
                                resolution_circle_count,
                                resolution_circle_count_oracle,
                                surface_components, surface_invariants)

from helpers import bubble, clasp, kinked_ring, ring, trefoil, two_rings


def torus():
    """Unknotted torus: two marked vertices joined by four mirrored arcs."""
    return make_diagram(
        vertices=[(0, "m", (0, 1, 2, 3), 0), (1, "m", (4, 5, 6, 7), 4)],
        edges=[(0, 4), (1, 7), (2, 6), (3, 5)],
        roles={0: ROLE_LINK, 1: ROLE_LINK},
    )


def klein():
    """Nonorientable control: two marked vertices and one crossing, chi = 0."""
    return make_diagram(
        vertices=[(0, "m", (0, 1, 2, 3), 0), (1, "m", (4, 5, 6, 7), 4),
                  (2, "x", (8, 9, 10, 11), (8, 10))],
        edges=[(0, 4), (1, 7), (2, 8), (3, 11), (5, 10), (6, 9)],
        roles={0: ROLE_LINK},
    )


def test_resolve_identity_without_marked_vertices():
    d = kinked_ring()
    for origin in (MINUS, PLUS):
        r = resolve(d, origin)
        assert r.base.n_crossings() == 1
        assert r.base.n_marked() == 0


def test_bubble_resolutions():
    d = bubble()
    assert resolution_circle_count(d, MINUS) == 2
    assert resolution_circle_count(d, PLUS) == 1
    assert resolution_circle_count_oracle(d, MINUS) == 2
    assert resolution_circle_count_oracle(d, PLUS) == 1


def test_bubble_is_a_sphere():
    d = bubble()
    assert euler_characteristic(d) == 2
    assert surface_components(d) == 1
    assert orientable(d)
    assert orientable_by_cell_complex(d)


def test_ring_is_unknotted_sphere():
    d = ring()
    assert euler_characteristic(d) == 2
    assert surface_components(d) == 1
    assert orientable(d)


def test_two_rings_two_components():
    assert surface_components(two_rings()) == 2
    assert euler_characteristic(two_rings()) == 4


def test_torus_invariants():
    d = torus()
    assert resolution_circle_count(d, MINUS) == 1
    assert resolution_circle_count(d, PLUS) == 1
    assert euler_characteristic(d) == 0
    assert surface_components(d) == 1
    assert orientable(d)
    assert orientable_by_cell_complex(d)


def test_klein_invariants():
    d = klein()
    assert euler_characteristic(d) == 0
    assert surface_components(d) == 1
    assert not orientable(d)
    assert not orientable_by_cell_complex(d)


def test_empty_diagram_conventions():
    d = make_diagram()
    assert euler_characteristic(d) == 0
    assert surface_components(d) == 0
    assert orientable(d)


def test_clasp_linking_number_plus_one():
    d = clasp()
    keys = [min(seq) for seq in d.circuits()]
    assert linking_number(d, keys[0], keys[1]) == 1
    assert linking_number(d, keys[1], keys[0]) == 1


def test_linking_same_circuit_raises():
    d = clasp()
    key = min(d.circuits()[0])
    with pytest.raises(SameCircuit):
        linking_number(d, key, key)


def test_split_circuits_link_zero():
    d = two_rings()
    assert linking_number(d, ("c", 0), ("c", 1)) == 0


def test_trefoil_writhe_is_three():
    d = trefoil()
    assert abs(d.writhe(d.circuit_key(0))) == 3
    m = trefoil(positive=False)
    assert d.writhe(d.circuit_key(0)) == -m.writhe(m.circuit_key(0))


def test_lattice_membership():
    assert lattice_contains([(1, 0), (0, 2)], (3, 4))
    assert not lattice_contains([(1, 0), (0, 2)], (0, 1))
    assert lattice_contains([], (0, 0))
    assert not lattice_contains([], (1, 0))
    assert lattice_contains([(2, 4)], (4, 8))
    assert not lattice_contains([(2, 4)], (3, 6))


def test_homology_class_equal_basics():
    assert homology_class_equal((1, 2), (1, 2), ())
    assert homology_class_equal((1, 2), (0, 2), ((1, 0),))
    assert not homology_class_equal((1,), (0,), ())
    with pytest.raises(DimensionMismatch):
        homology_class_equal((1,), (1, 2), ())


def test_homology_vector_no_handles():
    lam, mu = homology_vector(torus())
    assert lam == ()
    assert mu == ()


def test_invariants_block_format():
    text = surface_invariants(bubble()).text()
    assert "euler=2" in text
    assert "orientable=true" in text
    assert "components=1" in text
