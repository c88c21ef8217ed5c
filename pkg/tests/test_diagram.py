import pytest

from bandkit.diagram import (ROLE_LINK, Role, handle_role, make_diagram,
                             trace_circuits, validate_structure)
from bandkit.errors import MalformedMap

from helpers import bubble, clasp, kinked_ring, ring, rp2_standard, trefoil, two_rings


def test_ring_is_valid_with_two_faces():
    d = ring()
    rep = validate_structure(d)
    assert rep.structural_ok
    assert d.faces_of_piece(("c", 0)) == [("out", None), ("in", None)]


def test_kinked_ring_single_circuit_three_faces():
    d = kinked_ring()
    circuits = d.circuits()
    assert len(circuits) == 1
    assert len(circuits[0]) == 4
    piece = d.pieces()[0]
    assert len(d.faces()[piece]) == 3
    assert validate_structure(d).structural_ok


def test_clasp_has_four_faces():
    d = clasp()
    piece = d.pieces()[0]
    assert len(d.faces()[piece]) == 4
    assert len(d.circuits()) == 2


def test_bubble_traces_one_circuit_of_four_darts():
    d = bubble()
    circuits = d.circuits()
    assert len(circuits) == 1
    assert sorted(circuits[0]) == [0, 1, 2, 3]


def test_two_disjoint_rings_two_components():
    d = two_rings()
    assert len(d.pieces()) == 2
    assert validate_structure(d).structural_ok


def test_trefoil_valid_single_circuit():
    d = trefoil()
    assert len(d.circuits()) == 1
    assert validate_structure(d).structural_ok
    assert d.writhe(d.circuit_key(0)) in (3, -3)


def test_marked_vertex_on_non_link_circuit_is_role_violation():
    d = make_diagram(
        vertices=[(0, "m", (0, 1, 2, 3), 0)],
        edges=[(0, 1), (2, 3)],
        roles={0: Role("dotted")},
    )
    rep = validate_structure(d)
    assert not rep.structural_ok
    assert any(f.code == "RoleViolation" for f in rep.errors())


def test_dotted_circuit_with_framing_is_error():
    d = make_diagram(circles={0: Role("dotted", 3)})
    rep = validate_structure(d)
    assert any(f.code == "DottedFraming" for f in rep.errors())


def test_empty_diagram_warns_empty_surface():
    d = make_diagram()
    rep = validate_structure(d)
    assert rep.structural_ok
    assert any(f.code == "EmptySurface" for f in rep.findings)


def test_missing_role_is_error():
    d = make_diagram(
        vertices=[(0, "x", (0, 1, 2, 3), (0, 2))],
        edges=[(0, 1), (2, 3)],
    )
    rep = validate_structure(d)
    assert not rep.structural_ok
    assert any(f.code == "MissingRole" for f in rep.errors())


def test_bad_involution_raises_malformed():
    with pytest.raises(MalformedMap):
        make_diagram(
            vertices=[(0, "x", (0, 1, 2, 3), (0, 2))],
            edges=[(0, 0), (1, 2)],
            roles={0: ROLE_LINK},
        )


def test_bad_over_pair_raises_malformed():
    with pytest.raises(MalformedMap):
        make_diagram(
            vertices=[(0, "x", (0, 1, 2, 3), (0, 1))],
            edges=[(0, 1), (2, 3)],
            roles={0: ROLE_LINK},
        )


def test_trace_circuits_reports_roles():
    d = kinked_ring()
    out = trace_circuits(d)
    assert len(out) == 1
    key, role, seq = out[0]
    assert role == ROLE_LINK
    assert len(seq) == 4


def test_rp2_standard_two_circuits_one_vertex():
    d = rp2_standard()
    assert len(d.circuits()) == 2
    assert validate_structure(d).structural_ok
