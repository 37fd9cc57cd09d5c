"""Alternating pairings on finite abelian groups and isotropic subgroups.

Shows the extraction algorithm on a perfect pairing, checks it against
exhaustive search, and recovers a pairing from commuting matrix lifts.
"""

import random
from fractions import Fraction

from aniso import fieldmatrix
from aniso.pairing import (AlternatingPairing, FiniteAbelianGroup,
                           brute_force_isotropic_max, is_perfect,
                           isotropic_subgroup, matrix_commutator_pairing,
                           random_pairing, validate_pairing)
from aniso.scalars import Field, cyclotomic


def main():
    group = FiniteAbelianGroup([4, 4])
    gram = [[Fraction(0), Fraction(1, 4)], [Fraction(-1, 4), Fraction(0)]]
    p = AlternatingPairing(group, gram)
    print(f"pairing on Z/4 x Z/4: valid {bool(validate_pairing(p))}, "
          f"perfect {is_perfect(p)}")
    sub = isotropic_subgroup(p)
    print(f"  isotropic subgroup of order {sub.order} generated by "
          f"{sub.generators}, and {sub.order}^2 = {p.group.order} = |group|")

    rng = random.Random(7)
    agree = 0
    for _ in range(40):
        q = random_pairing(rng, max_order=128)
        best, _ = brute_force_isotropic_max(q)
        agree += isotropic_subgroup(q).order == best
    print(f"\nextraction matches exhaustive search on {agree}/40 "
          "random pairings")

    # clock-and-shift matrices give the Heisenberg group at level 3
    field = Field(cyclotomic(3))
    z = field.zeta(3)
    clock = fieldmatrix.mat_from_rows([
        [field.one, field.zero, field.zero],
        [field.zero, z, field.zero],
        [field.zero, field.zero, z * z]])
    shift = fieldmatrix.mat_from_rows([
        [field.zero, field.zero, field.one],
        [field.one, field.zero, field.zero],
        [field.zero, field.one, field.zero]])
    result = matrix_commutator_pairing([clock, shift])
    print(f"\nclock and shift at level 3: commutator pairing on "
          f"{result.pairing.group.invariant_factors}, value on the "
          f"generator pair {result.pairing.value((0, 1), (1, 0))}, "
          f"perfect {is_perfect(result.pairing)}")


if __name__ == "__main__":
    main()
