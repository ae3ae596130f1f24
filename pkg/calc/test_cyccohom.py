import pytest

from cyccohom import (
    GradedAction,
    GroupOrderError,
    coinvariants_dim,
    f2_kernel,
    f2_rank,
    invariants_dim,
    matches_presentation,
    module_generation_check,
    rank_nullity_holds,
    rank_profile,
    row_dims,
    verify_row_series,
)
from f2poly import Presentation, RingMap, parse_poly
from fixtures import load_fixture, load_ring
from series import expand, parse_series


@pytest.fixture
def m16_swap() -> GradedAction:
    return load_fixture("m16_swap")


@pytest.fixture
def sd16_swap() -> GradedAction:
    pres = Presentation.build([("x", 1), ("y", 1), ("w", 2)], ["x*y"])
    return GradedAction(pres, RingMap.permutation(pres, {"x": "y", "y": "x"}), 2)


# ========================= F_2 linear algebra =========================

def test_f2_rank():
    assert f2_rank([0b011, 0b101, 0b110]) == 2
    assert f2_rank([]) == 0
    assert f2_rank([0, 0b1]) == 1


def test_f2_kernel():
    # columns c0 = c1 + c2
    kernel = f2_kernel([0b11, 0b01, 0b10])
    assert kernel == [0b111]
    assert f2_kernel([0b1, 0b10]) == []
    assert f2_kernel([0, 0b1]) == [0b1]


# ========================= Group orders =========================

def test_group_order_must_be_power_of_two(sd16_swap):
    with pytest.raises(GroupOrderError):
        GradedAction(sd16_swap.presentation, sd16_swap.action, 3)
    with pytest.raises(GroupOrderError):
        GradedAction(sd16_swap.presentation, sd16_swap.action, 1)


def test_action_order_must_divide_group_order():
    pres = Presentation.build([("x", 1), ("y", 1), ("z", 1)])
    cycle = RingMap.from_strings(pres, {"x": "y", "y": "z", "z": "x"})
    with pytest.raises(GroupOrderError):
        GradedAction(pres, cycle, 4)


def test_action_on_other_presentation_is_rejected(sd16_swap):
    other = Presentation.build([("x", 1), ("y", 1)])
    with pytest.raises(GroupOrderError):
        GradedAction(other, sd16_swap.action, 2)


# ========================= Rows =========================

def test_sd16_degree_four(sd16_swap):
    # basis x^4, y^4, x^2*w, y^2*w, w^2
    assert invariants_dim(sd16_swap, 4) == 3
    assert coinvariants_dim(sd16_swap, 4) == 3
    assert row_dims(sd16_swap, 1, 4, s_min=1).row(1)[4] == 1


def test_sd16_rows(sd16_swap):
    table = row_dims(sd16_swap, 4, 20)
    assert table.row(0) == expand(parse_series("1/((1-t)*(1-t^2))"), 20)
    for s in range(1, 5):
        assert table.row(s) == expand(parse_series("1/(1-t^2)"), 20)


def test_m16_rows_are_invariants(m16_swap):
    # the norm of a C4 acting through an involution vanishes mod 2
    want = expand(parse_series("1/((1-t)*(1-t^2))"), 12)
    table = row_dims(m16_swap, 6, 12)
    for s in range(7):
        assert table.row(s) == want


def test_trivial_action_has_one_class_per_bidegree():
    ga = load_fixture("c8_trivial")
    table = row_dims(ga, 5, 10)
    assert all(v == 1 for v in table.dims.values())


def test_row_series_check(m16_swap):
    assert verify_row_series(m16_swap, 3, parse_series("1/((1-t)*(1-t^2))"), bound=15)
    assert not verify_row_series(m16_swap, 3, parse_series("1/(1-t)^2"), bound=15)


def test_threads_do_not_change_rows(sd16_swap):
    assert row_dims(sd16_swap, 4, 16, threads=1) == row_dims(sd16_swap, 4, 16, threads=3)


def test_row_output_formats(sd16_swap):
    table = row_dims(sd16_swap, 1, 2)
    assert table.to_json() == {"t_max": 2, "rows": {"0": [1, 1, 2], "1": [1, 0, 1]}}
    assert table.to_tsv().splitlines()[:3] == ["s\tt\tdim", "0\t0\t1", "0\t1\t1"]


# ========================= E_2 presentations =========================

@pytest.mark.parametrize("action,ring,s_max", [
    ("m16_swap", "m16_e2", 6),
    ("sd16_swap", "sd16_e2", 4),
    ("c8_trivial", "cyclic_e2", 5),
])
def test_rows_match_bigraded_presentation(action, ring, s_max):
    assert matches_presentation(load_fixture(action), load_ring(ring), s_max, 12) == []


def test_mismatched_presentation_is_reported(sd16_swap):
    assert matches_presentation(sd16_swap, load_ring("m16_e2"), 2, 4) != []


# ========================= Module generation =========================

def test_m16_coinvariants_generated_by_one_and_x(m16_swap):
    pres = m16_swap.presentation
    report = module_generation_check(m16_swap, [parse_poly(pres, "1"), parse_poly(pres, "x")], bound=15)
    assert report.surjective
    assert report.first_failure is None
    assert report.generators == ["1", "x"]
    assert report.kernel_dims() == expand(parse_series("t/((1-t)*(1-t^2))"), 15)


def test_generation_failure_is_located(m16_swap):
    pres = m16_swap.presentation
    report = module_generation_check(m16_swap, [parse_poly(pres, "1")], bound=4)
    assert not report.surjective
    assert report.first_failure == 1


def test_module_generators_must_be_homogeneous(m16_swap):
    pres = m16_swap.presentation
    with pytest.raises(ValueError):
        module_generation_check(m16_swap, [parse_poly(pres, "1 + x")], bound=2)
    with pytest.raises(ValueError):
        module_generation_check(m16_swap, [parse_poly(pres, "0")], bound=2)


@pytest.mark.parametrize("name", ["m16_swap", "sd16_swap", "c8_trivial", "d8c4_summand", "c4xc2_c2_swap"])
def test_rank_nullity(name):
    ga = load_fixture(name)
    assert all(rank_nullity_holds(ga, t) for t in range(10))


@pytest.mark.parametrize("name", ["m16_swap", "sd16_swap", "c8_trivial", "d8c4_summand", "c4xc2_c2_swap"])
def test_complementary_ranks(name):
    # N (1 + g) = 0 mod 2, so im N sits inside ker(1 + g)
    ga = load_fixture(name)
    for t in range(12):
        rank_a, rank_n, dim = rank_profile(ga, t)
        assert rank_a + rank_n <= dim


def test_rank_profile_extremes(sd16_swap):
    # for q = 2 the norm is 1 + g itself
    assert all(rank_profile(sd16_swap, t)[0] == rank_profile(sd16_swap, t)[1] for t in range(10))
    trivial = load_fixture("c8_trivial")
    assert [rank_profile(trivial, t)[:2] for t in range(6)] == [(0, 0)] * 6
