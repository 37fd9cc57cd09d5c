"""Finite subgroups of projective units in symbol algebras.

Covers reduced norms in the quaternions, the generic two-generator
subgroup of order n^2, and torsion behaviour mod p where the algebra
splits yet large elementary abelian subgroups appear.
"""

from fractions import Fraction

from aniso.csa import (SymbolAlgebraSpec, WeylModPSpec, algebra_inverse,
                       distinct_irreducible_family,
                       finite_order_in_projective_units,
                       inseparable_torsion_subgroup, reduced_norm,
                       weyl_split_verification)
from aniso.pairing import commutator_pairing_from_central_extension
from aniso.scalars import Field, cyclotomic, function_field, rationals


def main():
    base = rationals()
    field = Field(base)
    ham = SymbolAlgebraSpec(base, 2, field(-1), field(-1))
    x = ham.scalar(Fraction(1)) + ham.u + ham.v + ham.u * ham.v
    print(f"quaternion 1+i+j+k: reduced norm {reduced_norm(x)}, "
          f"inverse check {(x * algebra_inverse(x)).scalar_part()}")
    print(f"  i has projective order "
          f"{finite_order_in_projective_units(ham.u).order}")

    n = 3
    sym_base = function_field(cyclotomic(n), ("a", "b"))
    sym_field = Field(sym_base)
    spec = SymbolAlgebraSpec(sym_base, n, sym_field.var("a"),
                             sym_field.var("b"))
    result = commutator_pairing_from_central_extension(
        [spec.u, spec.v], mul=lambda s, t: s * t, inv=algebra_inverse,
        scalar_part=lambda s: s.scalar_part())
    print(f"\ngeneric symbol algebra of degree {n}: the classes of u and v "
          f"generate {result.pairing.group.invariant_factors}")
    print(f"  commutator pairing value {result.pairing.value((0, 1), (1, 0))}"
          f" on the generator pair")

    for p in (2, 3):
        wspec = WeylModPSpec(p)
        cert = weyl_split_verification(wspec)
        family = distinct_irreducible_family(wspec, 3)
        rep = inseparable_torsion_subgroup(wspec, family)
        print(f"\nmod-{p} Weyl algebra: split certificate ok {cert.ok}; "
              f"an elementary abelian subgroup of rank {rep.rank} and order "
              f"{rep.group_order} sits in the projective units")


if __name__ == "__main__":
    main()
