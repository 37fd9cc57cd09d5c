import pytest

from aniso.bounds import (BoundQuery, BoundsError, FiniteMatrixGroup, GroupTooLarge,
                          HypothesisFails, MissingParameter, UnknownType,
                          bound_calculator, burnside_divisibility_check,
                          coprime_part, minkowski_values, pi1_order_split,
                          torsion_primes)
from aniso.fieldmatrix import mat_from_rows
from aniso.scalars import Field, cyclotomic, prime_field, rationals


def test_minkowski_table():
    assert (minkowski_values(1).upsilon_a, minkowski_values(1).upsilon_m) == (2, 2)
    assert (minkowski_values(2).upsilon_a, minkowski_values(2).upsilon_m) == (12, 24)
    assert (minkowski_values(3).upsilon_a, minkowski_values(3).upsilon_m) == (48, 48)


def test_minkowski_beyond_table():
    mv = minkowski_values(4)
    assert mv.upsilon_a is None and not mv.upsilon_a_known
    assert mv.upsilon_m == 5760
    assert minkowski_values(5).upsilon_m == 11520


def test_minkowski_prime_support():
    # every prime <= n + 1 contributes at least one factor
    for n in (1, 2, 3, 4, 6, 10):
        um = minkowski_values(n).upsilon_m
        p = 2
        while p <= n + 1:
            if all(p % q for q in range(2, p)):
                assert um % p == 0
            p += 1


def test_torsion_primes_table():
    assert torsion_primes([("A", 4)]) == frozenset()
    assert torsion_primes([("C", 3)]) == frozenset()
    assert torsion_primes([("B", 2)]) == frozenset({2})
    assert torsion_primes([("D", 4)]) == frozenset({2})
    assert torsion_primes([("G", 2)]) == frozenset({2})
    assert torsion_primes([("F", 4)]) == frozenset({2, 3})
    assert torsion_primes([("E", 6)]) == frozenset({2, 3})
    assert torsion_primes([("E", 8)]) == frozenset({2, 3, 5})
    assert torsion_primes([("B", 2), ("F", 4)]) == frozenset({2, 3})
    assert torsion_primes([]) == frozenset()


def test_torsion_primes_rejects_bad_types():
    for bad in [("G", 3), ("F", 5), ("E", 9), ("D", 1), ("A", 0), ("X", 2)]:
        with pytest.raises(UnknownType):
            torsion_primes([bad])


def test_coprime_part():
    assert coprime_part(24, 3) == 8
    assert coprime_part(24, 2) == 3
    assert coprime_part(7, 5) == 7
    assert coprime_part(1, 2) == 1


def s3_matrices():
    field = Field(rationals())
    # order-3 rotation and a transposition in the standard 2-dim model
    r = mat_from_rows([[field(0), field(-1)], [field(1), field(-1)]])
    t = mat_from_rows([[field(0), field(1)], [field(1), field(0)]])
    return r, t


def test_finite_matrix_group_closure():
    r, t = s3_matrices()
    group = FiniteMatrixGroup.from_generators(rationals(), [r, t])
    assert group.order == 6
    orders = sorted(group.element_order(m) for m in group.elements)
    assert orders == [1, 2, 2, 2, 3, 3]


def test_finite_matrix_group_cap():
    field = Field(rationals())
    shear = mat_from_rows([[field.one, field.one], [field.zero, field.one]])
    with pytest.raises(GroupTooLarge):
        FiniteMatrixGroup.from_generators(rationals(), [shear], cap=50)


def test_burnside_cyclic_size_one():
    field = Field(cyclotomic(5))
    z = field.zeta(5)
    elements = [mat_from_rows([[z ** k]]) for k in range(5)]
    group = FiniteMatrixGroup(cyclotomic(5), elements)
    report = burnside_divisibility_check(group, 5)
    assert report.hypothesis_holds and report.divides
    assert report.coprime_order == 5 and report.bound == 5


def test_burnside_s3():
    r, t = s3_matrices()
    group = FiniteMatrixGroup.from_generators(rationals(), [r, t])
    report = burnside_divisibility_check(group, 6)
    assert report.hypothesis_holds
    assert report.coprime_order == 6 and report.bound == 36
    assert report.divides


def sl2_f3_group():
    field = Field(prime_field(3))
    a = mat_from_rows([[field(1), field(1)], [field(0), field(1)]])
    b = mat_from_rows([[field(0), field(-1)], [field(1), field(0)]])
    return FiniteMatrixGroup.from_generators(prime_field(3), [a, b])


def test_burnside_char_p_group():
    group = sl2_f3_group()
    assert group.order == 24
    report = burnside_divisibility_check(group, 4)
    assert report.characteristic == 3
    assert report.coprime_order == 8  # 24 with the 3-part removed
    assert report.hypothesis_holds
    assert report.bound == 16 and report.divides


def test_burnside_hypothesis_failure_reported():
    group = sl2_f3_group()
    report = burnside_divisibility_check(group, 2)
    assert not report.hypothesis_holds
    assert 4 in report.violating_orders
    with pytest.raises(HypothesisFails):
        burnside_divisibility_check(group, 2, strict=True)


def test_bound_calculator_examples():
    assert bound_calculator(BoundQuery("torus", n=2)).divisor_bound == 576
    assert bound_calculator(BoundQuery("severi_brauer", n=5)).divisor_bound == 25
    assert bound_calculator(BoundQuery("quadric_even", n=4)).divisor_bound == 512
    assert bound_calculator(BoundQuery("quadric_odd", n=5)).divisor_bound == 16


def test_bound_calculator_torus_matches_table():
    for n in (1, 2, 3, 4):
        expected = minkowski_values(n).upsilon_m ** n
        assert bound_calculator(BoundQuery("torus", n=n)).divisor_bound == expected


def test_bound_calculator_reductive_kinds():
    q = BoundQuery("reductive_perfect", n=2, r=2, N=3)
    assert bound_calculator(q).divisor_bound == 2 * 24 ** 3
    q2 = BoundQuery("general_lag", n=2, r=2, N=3)
    assert bound_calculator(q2).divisor_bound == 2 * 24 ** 3
    q3 = BoundQuery("semisimple_char_p", n=2, r=1, N=4, p=5, m=2)
    assert bound_calculator(q3).divisor_bound == 24 ** 4
    assert "5^2" in bound_calculator(q3).meaning


def test_bound_calculator_missing_parameters():
    with pytest.raises(MissingParameter):
        bound_calculator(BoundQuery("torus"))
    with pytest.raises(MissingParameter):
        bound_calculator(BoundQuery("reductive_perfect", n=2))
    with pytest.raises(BoundsError):
        bound_calculator(BoundQuery("torus", n=0))


def test_bound_calculator_meanings_mention_divisor():
    for query in (BoundQuery("torus", n=1),
                  BoundQuery("severi_brauer", n=3),
                  BoundQuery("quadric_odd", n=3),
                  BoundQuery("quadric_even", n=6)):
        result = bound_calculator(query)
        assert "divid" in result.meaning


def test_pi1_order_split():
    assert pi1_order_split((4, 2)) == (1, 2)
    assert pi1_order_split((12, 2)) == (3, 2)
    assert pi1_order_split((7, 3)) == (7, 0)
    assert pi1_order_split((1, 5)) == (1, 0)
