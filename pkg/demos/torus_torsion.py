"""Torsion points of anisotropic tori through their lattice models.

Builds the sign-flip torus of rank 1 and the norm-one tori attached to
small groups, then tabulates d-torsion and checks the exponent bound.
"""

from aniso.lattice import IntMatrix
from aniso.torus import (TorusModel, averaging_certificate, cyclic_table,
                         exponent_bound_check, is_anisotropic,
                         norm_quotient_torus, symmetric_table, torsion_points)


def describe(model):
    print(f"\n{model.label}: rank {model.rank}, acting group of order "
          f"{model.theta_order}, anisotropic: {is_anisotropic(model)}")
    for d in (2, 3, 4, 5, 6, 12):
        report = torsion_points(model, d)
        factors = report.group.invariant_factors or ("trivial",)
        print(f"  {d:>2}-torsion: invariant factors {factors}")
    check = exponent_bound_check(model, 30)
    print(f"  every d-torsion exponent for d <= 30 divides "
          f"{model.theta_order}: {check.all_pass}")


def main():
    flip = TorusModel(1, [IntMatrix.from_rows([[-1]])], label="sign flip")
    describe(flip)

    cert = averaging_certificate(flip, 2, (1,))
    print(f"  averaging certificate for the 2-torsion witness: {cert.holds}")

    for n in (2, 3, 4):
        describe(norm_quotient_torus(cyclic_table(n), label=f"norm-one, Z/{n}"))
    describe(norm_quotient_torus(symmetric_table(3), label="norm-one, S_3"))


if __name__ == "__main__":
    main()
