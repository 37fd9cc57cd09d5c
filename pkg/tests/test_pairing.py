import random
from fractions import Fraction

import pytest

from aniso.fieldmatrix import mat_from_rows
from aniso.pairing import (AlternatingPairing, CommutatorNotScalar,
                           FiniteAbelianGroup, GroupTooLarge, InvalidPairing,
                           PairingError, brute_force_isotropic_max,
                           is_perfect, isotropic_subgroup,
                           matrix_commutator_pairing, pairing_radical,
                           random_pairing, validate_pairing)
from aniso.scalars import Field, cyclotomic


def symplectic_z4():
    group = FiniteAbelianGroup([4, 4])
    return AlternatingPairing(group, [[0, Fraction(1, 4)],
                                      [Fraction(-1, 4), 0]])


def test_group_element_arithmetic():
    g = FiniteAbelianGroup([2, 4])
    assert g.order == 8 and g.exponent == 4
    assert g.add((1, 3), (1, 2)) == (0, 1)
    assert g.reduce((5, -1)) == (1, 3)
    assert len(list(g.elements())) == 8


def test_group_validation():
    with pytest.raises(PairingError):
        FiniteAbelianGroup([4, 2])  # not a divisibility chain
    with pytest.raises(PairingError):
        FiniteAbelianGroup([1])


def test_validate_pairing():
    assert validate_pairing(symplectic_z4())
    group = FiniteAbelianGroup([4, 4])
    bad = AlternatingPairing(group, [[0, Fraction(1, 3)],
                                     [Fraction(-1, 3), 0]])
    assert not validate_pairing(bad)  # value order does not divide 4
    not_alt = AlternatingPairing(group, [[Fraction(1, 4), 0],
                                         [0, 0]])
    assert not validate_pairing(not_alt)


def test_pairing_values():
    p = symplectic_z4()
    assert p.value((1, 0), (0, 1)) == Fraction(1, 4)
    assert p.value((0, 1), (1, 0)) == Fraction(3, 4)  # reduced mod 1
    assert p.value((2, 0), (0, 2)) == 0
    assert p.value((1, 1), (1, 1)) == 0  # alternating


def test_perfect_and_radical():
    p = symplectic_z4()
    assert is_perfect(p)
    assert pairing_radical(p) == [(0, 0)]
    group = FiniteAbelianGroup([2, 2])
    degenerate = AlternatingPairing(group, [[0, 0], [0, 0]])
    assert not is_perfect(degenerate)
    assert len(pairing_radical(degenerate)) == 4


def test_isotropic_subgroup_z4_oracle():
    sub = isotropic_subgroup(symplectic_z4())
    assert sub.order == 4
    assert sub.generator_orders == (4,)
    assert 16 % (sub.order ** 2) == 0


def test_isotropic_subgroup_vanishes_and_covers():
    p = symplectic_z4()
    sub = isotropic_subgroup(p)
    for g in sub.generators:
        for h in sub.generators:
            assert p.value(g, h) == 0
    assert (sub.order ** 2) % p.group.order == 0


def test_isotropic_trivial_pairing_takes_everything():
    group = FiniteAbelianGroup([2, 2])
    p = AlternatingPairing(group, [[0, 0], [0, 0]])
    assert isotropic_subgroup(p).order == 4


def test_brute_force_agrees_on_small_groups():
    rng = random.Random(3)
    for _ in range(25):
        p = random_pairing(rng, max_order=36)
        sub = isotropic_subgroup(p)
        best, witness = brute_force_isotropic_max(p)
        assert sub.order == best  # greedy construction hits the maximum
        for g in witness:
            for h in witness:
                assert p.value(g, h) == 0


def test_seeded_random_pairings_property():
    # 200 pairings on groups of order <= 256: isotropic square covers
    rng = random.Random(0)
    for _ in range(200):
        p = random_pairing(rng, max_order=256)
        assert p.group.order <= 256
        assert validate_pairing(p)
        sub = isotropic_subgroup(p)
        for g in sub.generators:
            for h in sub.generators:
                assert p.value(g, h) == 0
        assert (sub.order ** 2) % p.group.order == 0


def test_brute_force_caps():
    group = FiniteAbelianGroup([2] * 13)
    gram = [[0] * 13 for _ in range(13)]
    p = AlternatingPairing(group, gram)
    with pytest.raises(GroupTooLarge):
        brute_force_isotropic_max(p)  # order 8192 over the cap


def test_matrix_commutator_pairing_heisenberg():
    # clock and shift matrices: commutator is the scalar zeta_3
    field = Field(cyclotomic(3))
    z = field.zeta(3)
    zero, one = field.zero, field.one
    clock = mat_from_rows([[one, zero, zero], [zero, z, zero],
                           [zero, zero, z * z]])
    shift = mat_from_rows([[zero, zero, one], [one, zero, zero],
                           [zero, one, zero]])
    result = matrix_commutator_pairing([clock, shift])
    assert result.generator_orders == (3, 3)
    assert result.pairing.group.invariant_factors == (3, 3)
    assert is_perfect(result.pairing)
    values = {result.pairing.value(x, y)
              for x in ((1, 0), (0, 1)) for y in ((1, 0), (0, 1))}
    assert Fraction(1, 3) in values or Fraction(2, 3) in values


def test_matrix_commutator_rejects_nonscalar_commutator():
    field = Field(cyclotomic(4))
    zero, one = field.zero, field.one
    a = mat_from_rows([[zero, one], [one, zero]])
    b = mat_from_rows([[one, one], [zero, one]])
    with pytest.raises((CommutatorNotScalar, PairingError)):
        matrix_commutator_pairing([a, b], order_bound=8)


def test_json_roundtrip():
    p = symplectic_z4()
    back = AlternatingPairing.from_json(p.to_json())
    assert back.group.invariant_factors == (4, 4)
    assert back.gram == p.gram


def test_gram_shape_validation():
    group = FiniteAbelianGroup([2, 2])
    with pytest.raises(InvalidPairing):
        AlternatingPairing(group, [[0]])
