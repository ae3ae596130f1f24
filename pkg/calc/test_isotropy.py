from fractions import Fraction

import pytest

from fixtures import load_fixture
from isotropy import (
    NotASubgroup,
    NotOrthogonal,
    OrderMismatch,
    QSqrt2,
    Subspace,
    distinct_stabilizers,
    elementary_abelian_check,
    fixed_line_components,
    group_closure,
    isotropy_report,
    isotropy_subgroups,
    mat_vec,
    maximal_isotropy_groups,
    nullspace,
    parse_matrix,
    projective_exponent_bound,
    scaled_identity_minus,
)

I2 = parse_matrix([[[1, 0], [0, 0]], [[0, 0], [1, 0]]])
SWAP = parse_matrix([[[0, 0], [1, 0]], [[1, 0], [0, 0]]])
ROT45 = parse_matrix([[[0, "1/2"], [0, "-1/2"]], [[0, "1/2"], [0, "1/2"]]])


# ========================= Q(sqrt 2) =========================

def test_field_arithmetic():
    x = QSqrt2(1, 1)
    assert x * x.conjugate() == -1
    assert x * x.inverse() == 1
    assert QSqrt2(0, "1/2") * QSqrt2(0, 1) == 1
    assert (x + 1) - x == 1
    assert 2 * x == QSqrt2(2, 2)
    assert x / 2 == QSqrt2(Fraction(1, 2), Fraction(1, 2))
    with pytest.raises(ZeroDivisionError):
        QSqrt2(0).inverse()


def test_field_str():
    assert str(QSqrt2(3)) == "3"
    assert str(QSqrt2(0, Fraction(1, 2))) == "1/2√2"
    assert str(QSqrt2(1, -1)) == "1-1√2"
    assert str(QSqrt2(-1, 2)) == "-1+2√2"


def test_parse_pair():
    assert QSqrt2.parse(["-1/2", 3]) == QSqrt2(Fraction(-1, 2), 3)
    with pytest.raises(ValueError):
        QSqrt2.parse([1])


# ========================= Linear algebra =========================

def test_nullspace_and_subspaces():
    one, zero = QSqrt2(1), QSqrt2(0)
    kernel = nullspace([(one, one, zero)], 3)
    assert len(kernel) == 2
    plane = Subspace.span(kernel, 3)
    assert plane.contains((one, -one, zero))
    assert not plane.contains((one, one, zero))
    line = Subspace.span([(zero, zero, one)], 3)
    assert line.issubspace(plane)
    assert plane.intersection(Subspace.span([(one, zero, zero)], 3)).dim == 0


def test_fixed_line_components():
    plus, minus = fixed_line_components(SWAP)
    assert plus.dim == minus.dim == 1
    assert fixed_line_components(ROT45) == []


def test_m16_fixed_line_components():
    rep = load_fixture("m16_rep")
    one, zero = QSqrt2(1), QSqrt2(0)
    (central,) = fixed_line_components(rep.element("r^4"))
    assert central.dim == 4
    assert fixed_line_components(rep.element("f r^2")) == []
    components = fixed_line_components(rep.element("f r^4"))
    assert [c.dim for c in components] == [2, 2]
    antidiagonal = [(one, zero, -one, zero), (zero, one, zero, -one)]
    assert any(all(c.contains(v) for v in antidiagonal) for c in components)


def _neg(v):
    return tuple(-x for x in v)


@pytest.mark.parametrize("name", ["m16_rep", "sd16_rep", "d8c4_rep", "q8_rep"])
def test_eigenspaces_split_cleanly(name):
    rep = load_fixture(name)
    for g in rep.matrices:
        plus = Subspace.kernel(scaled_identity_minus(g, 1))
        minus = Subspace.kernel(scaled_identity_minus(g, -1))
        assert all(mat_vec(g, v) == v for v in plus.basis)
        assert all(mat_vec(g, v) == _neg(v) for v in minus.basis)
        assert plus.intersection(minus).dim == 0
        for c in fixed_line_components(g):
            assert all(mat_vec(g, v) in (v, _neg(v)) for v in c.basis)


@pytest.mark.parametrize("name", ["m16_rep", "sd16_rep", "d8c4_rep", "q8_rep"])
def test_stabilizers_hold_on_their_lines(name):
    rep = load_fixture(name)
    for pair in isotropy_subgroups(rep):
        basis = pair.subspace.basis
        generic = tuple(sum((QSqrt2(k + 1) * b[j] for k, b in enumerate(basis)), QSqrt2(0))
                        for j in range(rep.dimension))
        assert pair.subspace.contains(generic)
        for k, g in enumerate(rep.matrices):
            keeps = any(pair.subspace.issubspace(c) for c in fixed_line_components(g))
            assert keeps == (k in pair.stabilizer)
            if keeps:
                assert mat_vec(g, generic) in (generic, _neg(generic))


# ========================= Groups =========================

def test_rotation_closure_has_order_eight():
    group = group_closure([("r", ROT45)], 8)
    assert group.order == 8
    assert group.labels[0] == "e"
    assert group.element("r^8") == group.matrices[0]
    assert group.label_of(group.element("r r r")) == "r^3"


def test_order_mismatch():
    with pytest.raises(OrderMismatch):
        group_closure([("r", ROT45)], 4)
    with pytest.raises(OrderMismatch):
        group_closure([("r", ROT45)], 16)


def test_non_orthogonal_generator():
    shear = parse_matrix([[[1, 0], [1, 0]], [[0, 0], [1, 0]]])
    with pytest.raises(NotOrthogonal):
        group_closure([("u", shear)], 2)


def test_words_and_subgroups():
    rep = load_fixture("sd16_rep")
    assert rep.element("s r s^-1") == rep.element("r^3")
    assert len(rep.generated(["s", "r^4"])) == 4
    assert len(rep.generated(["r"])) == 8
    with pytest.raises(ValueError):
        rep.element("t")


def test_elementary_abelian_check():
    rep = load_fixture("sd16_rep")
    assert elementary_abelian_check(rep, ["e", "s", "r^4", "s r^4"])
    assert not elementary_abelian_check(rep, rep.generated(["r^2"]))
    with pytest.raises(NotASubgroup):
        elementary_abelian_check(rep, ["e", "s", "r"])


# ========================= Isotropy =========================

def test_sd16_stabilizers():
    rep = load_fixture("sd16_rep")
    stabs = distinct_stabilizers(isotropy_subgroups(rep))
    assert set(stabs) == {rep.generated(["r^4"]), rep.generated(["s", "s r^4"]),
                          rep.generated(["s r^2", "s r^6"])}
    assert projective_exponent_bound(rep) == 4


def test_d8c4_maximal_groups():
    rep = load_fixture("d8c4_rep")
    maximal = maximal_isotropy_groups(isotropy_subgroups(rep))
    assert set(maximal) == {rep.generated(["sigma", "sigma rho^2"]),
                            rep.generated(["sigma rho", "sigma rho^3"]),
                            rep.generated(["rho gamma", "rho^3 gamma"])}
    assert all(rep.element("rho^2") in [rep.matrices[i] for i in m] for m in maximal)


def test_m16_stabilizers_lie_in_klein_four():
    rep = load_fixture("m16_rep")
    allowed = rep.subgroup(["e", "f", "f r^4", "r^4"])
    assert all(st <= allowed for st in distinct_stabilizers(isotropy_subgroups(rep)))


def test_q8_isotropy_is_central():
    rep = load_fixture("q8_rep")
    pairs = isotropy_subgroups(rep)
    assert distinct_stabilizers(pairs) == [rep.generated(["i^2"])]
    assert maximal_isotropy_groups(pairs) == [rep.generated(["i^2"])]


def test_complex_bound():
    rep = load_fixture("q8_rep")
    assert projective_exponent_bound(rep, "complex") == 7


def test_isotropy_report():
    report = isotropy_report("sd16_rep", load_fixture("sd16_rep"))
    assert report.order == 16
    assert report.elementary_abelian
    assert report.bound == 4
    assert len(report.stabilizers) == 3
    assert all(entry.stabilizer[0] == "e" for entry in report.pairs)
