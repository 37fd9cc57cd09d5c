"""Order bounds for finite matrix groups over the rationals.

Walks the exact value table for small ranks and shows how the
calculator combines it with variety parameters.
"""

from aniso.bounds import BoundQuery, bound_calculator, minkowski_values, torsion_primes


def main():
    print("Least common multiples of finite subgroup orders in GL_n(Z):")
    for n in range(1, 6):
        vals = minkowski_values(n)
        tag = "maximal order known" if vals.upsilon_a_known else "lcm only"
        print(f"  n={n}: lcm {vals.upsilon_m:>6}  ({tag})")

    print("\nBound calculator on sample inputs:")
    for query in (
        BoundQuery("torus", n=2),
        BoundQuery("severi_brauer", n=5),
        BoundQuery("quadric_odd", n=9),
        BoundQuery("quadric_even", n=4),
        BoundQuery("reductive_perfect", n=3, r=2, N=3),
    ):
        result = bound_calculator(query)
        print(f"  {query.kind:>17}: {result.divisor_bound:>8}  {result.meaning}")

    print("\nPrimes needing care per simple type:")
    for types in ([("A", 4)], [("B", 3), ("G", 2)], [("E", 8)]):
        label = " + ".join(f"{t}{r}" for t, r in types)
        print(f"  {label}: {sorted(torsion_primes(types)) or 'none'}")


if __name__ == "__main__":
    main()
