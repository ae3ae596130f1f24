import pytest

from f2poly import (
    F2Poly,
    IllFormed,
    NotWellDefined,
    Presentation,
    PresentationError,
    RingMap,
    action_matrix,
    apply_map,
    bigraded_dimension,
    compose,
    enumerate_basis,
    format_poly,
    graded_dimension,
    is_homogeneous,
    map_order,
    multiply,
    parse_poly,
    reduce,
)
from series import expand, parse_series


@pytest.fixture
def target_ring() -> Presentation:
    return Presentation.build([("z", 1), ("y", 1), ("x", 3), ("w", 4)], ["z^2", "z*y^2", "z*x", "x^2"])


@pytest.fixture
def sd16_ring() -> Presentation:
    return Presentation.build([("x", 1), ("y", 1), ("w", 2)], ["x*y"])


# ========================= Presentations =========================

def test_presentation_validation():
    with pytest.raises(PresentationError):
        Presentation.build([("x", 1), ("x", 2)])
    with pytest.raises(PresentationError):
        Presentation.build([("x", 0)])
    with pytest.raises(PresentationError):
        Presentation.build([("x", 1, 2)])
    with pytest.raises(PresentationError):
        Presentation.build([("x", 1)], ["1"])
    with pytest.raises(PresentationError):
        Presentation.build([("x", 1)], ["q^2"])


def test_monomial_round_trip(target_ring):
    m = target_ring.parse_monomial("z*y^2")
    assert m == (1, 2, 0, 0)
    assert target_ring.format_monomial(m) == "z*y^2"
    assert target_ring.degree(m) == 3
    assert not target_ring.is_reduced(m)
    assert str(target_ring) == "F2[z, y, x, w]/(z^2, z*y^2, z*x, x^2)"


def test_reduce_drops_relation_multiples(target_ring):
    p = parse_poly(target_ring, "z*y + z*y^2 + x*w")
    assert format_poly(target_ring, reduce(target_ring, p)) == "x*w + z*y"


def test_polynomial_arithmetic_mod_two(sd16_ring):
    x = parse_poly(sd16_ring, "x + w")
    assert x + x == F2Poly()
    square = multiply(sd16_ring, x, x)
    assert format_poly(sd16_ring, square) == "w^2 + x^2"
    assert multiply(sd16_ring, parse_poly(sd16_ring, "x"), parse_poly(sd16_ring, "y")) == F2Poly()
    assert is_homogeneous(sd16_ring, parse_poly(sd16_ring, "x^2 + w"))
    assert not is_homogeneous(sd16_ring, parse_poly(sd16_ring, "x + w"))


# ========================= Bases =========================

def test_target_ring_graded_dimensions(target_ring):
    dims = [graded_dimension(target_ring, d) for d in range(21)]
    assert dims[:7] == [1, 2, 2, 2, 3, 4, 4]
    assert dims == expand(parse_series("(1+t)/((1-t)*(1-t^4))"), 20)


def test_basis_order_is_graded_lex(sd16_ring):
    assert enumerate_basis(sd16_ring, 2) == ((2, 0, 0), (0, 2, 0), (0, 0, 1))
    assert enumerate_basis(sd16_ring, -1) == ()
    assert enumerate_basis(sd16_ring, 0) == ((0, 0, 0),)


def test_sd16_ring_dimensions(sd16_ring):
    dims = [graded_dimension(sd16_ring, d) for d in range(21)]
    assert dims == expand(parse_series("(1+t)/((1-t)*(1-t^2))"), 20)


def test_bigraded_dimension():
    e2 = Presentation.build([("a", 1, 1), ("sigma1", 1), ("w", 2)], ["a*sigma1"])
    assert bigraded_dimension(e2, 0, 2) == 2
    assert bigraded_dimension(e2, 3, 0) == 1
    assert bigraded_dimension(e2, 2, 1) == 0
    assert bigraded_dimension(e2, 2, 2) == 1


# ========================= Ring maps =========================

def test_swap_action(sd16_ring):
    swap = RingMap.permutation(sd16_ring, {"x": "y", "y": "x"})
    assert map_order(swap, 4) == 2
    image = apply_map(swap, parse_poly(sd16_ring, "x^3 + x*w"))
    assert format_poly(sd16_ring, image) == "y^3 + y*w"
    assert compose(swap, swap) == RingMap.identity(sd16_ring)


def test_action_matrix_columns(sd16_ring):
    swap = RingMap.permutation(sd16_ring, {"x": "y", "y": "x"})
    # basis x^2, y^2, w
    assert action_matrix(swap, 2) == [0b010, 0b001, 0b100]


def test_translation_action_has_order_two():
    pres = Presentation.build([("y1", 1), ("z1", 1), ("b2y1", 2)], ["y1^2"])
    f = RingMap.from_strings(pres, {"b2y1": "b2y1 + z1^2"})
    assert map_order(f, 8) == 2
    assert apply_map(f, parse_poly(pres, "b2y1")) == parse_poly(pres, "b2y1 + z1^2")
    assert apply_map(f, parse_poly(pres, "y1*b2y1")) == parse_poly(pres, "y1*b2y1 + y1*z1^2")
    assert apply_map(f, parse_poly(pres, "y1 + z1")) == parse_poly(pres, "y1 + z1")


def _sample_maps():
    sd16 = Presentation.build([("x", 1), ("y", 1), ("w", 2)], ["x*y"])
    translation = Presentation.build([("y1", 1), ("z1", 1), ("b2y1", 2)], ["y1^2"])
    return [
        (RingMap.permutation(sd16, {"x": "y", "y": "x"}), ["x + w", "y^2 + x*w", "w^2 + x^3", "1 + y"]),
        (RingMap.from_strings(translation, {"b2y1": "b2y1 + z1^2"}),
         ["b2y1 + y1*z1", "z1^2 + y1", "b2y1^2 + z1*b2y1", "1 + z1"]),
    ]


@pytest.mark.parametrize("f,samples", _sample_maps())
def test_apply_map_is_additive(f, samples):
    pres = f.domain
    for a in samples:
        for b in samples:
            pa, pb = parse_poly(pres, a), parse_poly(pres, b)
            assert apply_map(f, pa + pb) == apply_map(f, pa) + apply_map(f, pb)


@pytest.mark.parametrize("f,samples", _sample_maps())
def test_apply_map_is_multiplicative(f, samples):
    pres = f.domain
    for a in samples:
        for b in samples:
            pa, pb = parse_poly(pres, a), parse_poly(pres, b)
            assert apply_map(f, multiply(pres, pa, pb)) == multiply(pres, apply_map(f, pa), apply_map(f, pb))


def test_ill_defined_maps_are_rejected(sd16_ring):
    with pytest.raises(NotWellDefined):
        RingMap.from_strings(sd16_ring, {"x": "x + w"})
    with pytest.raises(NotWellDefined):
        RingMap.from_strings(sd16_ring, {"x": "w", "y": "w"})
    with pytest.raises(NotWellDefined):
        # y -> x sends the relation x*y to x^2
        RingMap.from_strings(sd16_ring, {"y": "x"})
    with pytest.raises(PresentationError):
        RingMap.from_strings(sd16_ring, {"v": "x"})


def test_apply_map_requires_reduced_input(sd16_ring):
    with pytest.raises(IllFormed):
        apply_map(RingMap.identity(sd16_ring), F2Poly.of(sd16_ring.parse_monomial("x*y")))


def test_map_order_none_when_not_found():
    pres = Presentation.build([("x", 1), ("y", 1), ("z", 1)])
    cycle = RingMap.from_strings(pres, {"x": "y", "y": "z", "z": "x"})
    assert map_order(cycle, 2) is None
    assert map_order(cycle, 3) == 3
