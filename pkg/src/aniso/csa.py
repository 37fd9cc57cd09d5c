"""Two families of noncommutative algebras at desk scale.

Symbol algebras: generated by u, v over a field containing a primitive
n-th root of unity z, with u^n = a, v^n = b, and v u = z u v. Elements are
kept in the normal form sum c_{ij} u^i v^j with 0 <= i, j < n.

Characteristic-p Weyl-type algebras: generated by u, v over F_p(x, y) with
v^p = x, u^p = y, and v u - u v = 1; same normal-form shape with p in
place of n.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .errors import AnisoError
from . import fieldmatrix
from .scalars import (Field, FieldDescriptor, FieldElement, MinimalPolynomial,
                      finite_field, function_field, is_kth_power,
                      minimal_polynomial_power_relation, prime_field)


class AlgebraError(AnisoError):
    pass


class SpecMismatch(AlgebraError):
    pass


class NotInvertible(AlgebraError):
    pass


class PrimeTooLarge(AlgebraError):
    pass


class ZeroPolynomial(AlgebraError):
    pass


class NotScalarPower(AlgebraError):
    pass


class SymbolAlgebraSpec:
    """u^n = a, v^n = b, vu = z uv over a base containing z = zeta_n."""

    kind = "symbol"

    def __init__(self, base: FieldDescriptor, degree: int,
                 a: FieldElement, b: FieldElement):
        if degree < 2:
            raise AlgebraError("degree must be at least 2")
        field = Field(base)
        self.base = base
        self.field = field
        self.degree = degree
        self.zeta = field.zeta(degree)  # raises RootOfUnityMissing if absent
        if a.descriptor != base or b.descriptor != base:
            raise SpecMismatch("parameters must live in the base field")
        if a.is_zero or b.is_zero:
            raise AlgebraError("parameters must be nonzero")
        self.a = a
        self.b = b

    def __repr__(self):
        return f"SymbolAlgebraSpec(degree={self.degree}, base={self.base!r})"

    def __eq__(self, other):
        return (isinstance(other, SymbolAlgebraSpec)
                and (self.base, self.degree, self.a, self.b)
                == (other.base, other.degree, other.a, other.b))

    def __hash__(self):
        return hash((self.base, self.degree, self.a, self.b))

    @property
    def zero(self) -> "AlgebraElement":
        return AlgebraElement(self, {})

    @property
    def one(self) -> "AlgebraElement":
        return self.scalar(self.field.one)

    @property
    def u(self) -> "AlgebraElement":
        return AlgebraElement(self, {(1, 0): self.field.one})

    @property
    def v(self) -> "AlgebraElement":
        return AlgebraElement(self, {(0, 1): self.field.one})

    def scalar(self, c) -> "AlgebraElement":
        c = self._coerce(c)
        return AlgebraElement(self, {(0, 0): c} if not c.is_zero else {})

    def _coerce(self, c) -> FieldElement:
        if isinstance(c, FieldElement):
            if c.descriptor != self.base:
                raise SpecMismatch("scalar from a different field")
            return c
        return self.field(c)


class WeylModPSpec:
    """v^p = x, u^p = y, vu - uv = 1 over F_p(x, y)."""

    kind = "weyl"

    def __init__(self, p: int):
        if p < 2 or any(p % q == 0 for q in range(2, p)):
            raise AlgebraError("p must be prime")
        self.p = p
        self.degree = p
        self.base = function_field(prime_field(p), ("x", "y"))
        self.field = Field(self.base)
        self.a = self.field.var("y")  # u^p
        self.b = self.field.var("x")  # v^p

    def __repr__(self):
        return f"WeylModPSpec(p={self.p})"

    def __eq__(self, other):
        return isinstance(other, WeylModPSpec) and self.p == other.p

    def __hash__(self):
        return hash(("WeylModPSpec", self.p))

    @property
    def zero(self) -> "AlgebraElement":
        return AlgebraElement(self, {})

    @property
    def one(self) -> "AlgebraElement":
        return self.scalar(self.field.one)

    @property
    def u(self) -> "AlgebraElement":
        return AlgebraElement(self, {(1, 0): self.field.one})

    @property
    def v(self) -> "AlgebraElement":
        return AlgebraElement(self, {(0, 1): self.field.one})

    def scalar(self, c) -> "AlgebraElement":
        c = self._coerce(c)
        return AlgebraElement(self, {(0, 0): c} if not c.is_zero else {})

    def _coerce(self, c) -> FieldElement:
        if isinstance(c, FieldElement):
            if c.descriptor != self.base:
                raise SpecMismatch("scalar from a different field")
            return c
        return self.field(c)

    def v_polynomial(self, coeffs: Sequence[int]) -> "AlgebraElement":
        """Element sum coeffs[j] v^j from prime-field integer coefficients."""
        out = self.zero
        vj = self.one
        for c in coeffs:
            if c % self.p:
                out = out + vj * self.field.from_int(c)
            vj = vj * self.v
        return out


class AlgebraElement:
    """Normal form sum c_{ij} u^i v^j, exponents inside the degree box."""

    __slots__ = ("spec", "coefficients")

    def __init__(self, spec, coefficients: dict):
        n = spec.degree
        clean = {}
        for (i, j), c in coefficients.items():
            if not (0 <= i < n and 0 <= j < n):
                raise AlgebraError("exponents outside the normal-form box")
            if not c.is_zero:
                clean[(i, j)] = c
        self.spec = spec
        self.coefficients = clean

    # -------------------------------------------------- ring structure
    def __add__(self, other):
        self._check(other)
        out = dict(self.coefficients)
        for key, c in other.coefficients.items():
            s = out.get(key)
            out[key] = c if s is None else s + c
        return AlgebraElement(self.spec, out)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return AlgebraElement(self.spec,
                              {k: -c for k, c in self.coefficients.items()})

    def __mul__(self, other):
        if isinstance(other, FieldElement) or isinstance(other, (int, Fraction)):
            c = self.spec._coerce(other)
            return AlgebraElement(self.spec,
                                  {k: v * c for k, v in self.coefficients.items()})
        self._check(other)
        return algebra_multiply(self, other)

    def __rmul__(self, other):
        return self * other

    def __pow__(self, e: int):
        if e < 0:
            return algebra_inverse(self) ** (-e)
        out = self.spec.one
        acc = self
        while e:
            if e & 1:
                out = out * acc
            acc = acc * acc
            e >>= 1
        return out

    def __eq__(self, other):
        return (isinstance(other, AlgebraElement) and self.spec == other.spec
                and self.coefficients == other.coefficients)

    def __hash__(self):
        return hash((self.spec, tuple(sorted(self.coefficients.items(),
                                             key=lambda kv: kv[0]))))

    def _check(self, other):
        if not isinstance(other, AlgebraElement) or other.spec != self.spec:
            raise SpecMismatch("elements from different algebras")

    # -------------------------------------------------- structure queries
    @property
    def is_zero(self) -> bool:
        return not self.coefficients

    def scalar_part(self) -> Optional[FieldElement]:
        """The base-field value when the element is scalar, else None."""
        if not self.coefficients:
            return self.spec.field.zero
        if set(self.coefficients) == {(0, 0)}:
            return self.coefficients[(0, 0)]
        return None

    @property
    def is_scalar(self) -> bool:
        return self.scalar_part() is not None

    def v_only(self) -> bool:
        return all(i == 0 for i, _ in self.coefficients)

    def __repr__(self):
        if not self.coefficients:
            return "0"
        bits = []
        for (i, j) in sorted(self.coefficients):
            c = self.coefficients[(i, j)]
            mono = "".join((f"u^{i}" if i > 1 else "u" * min(i, 1),
                            f"v^{j}" if j > 1 else "v" * min(j, 1)))
            bits.append(f"({c!r}){mono}" if mono else f"({c!r})")
        return " + ".join(bits)

    def to_json(self) -> dict:
        from .scalars import element_to_json
        return {f"{i},{j}": element_to_json(c)
                for (i, j), c in sorted(self.coefficients.items())}

    @staticmethod
    def from_json(spec, obj: dict) -> "AlgebraElement":
        from .scalars import element_from_json
        out = {}
        for key, val in obj.items():
            i, j = (int(t) for t in key.split(","))
            out[(i, j)] = element_from_json(val, spec.base)
        return AlgebraElement(spec, out)


def algebra_multiply(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    """Product in normal form; the reordering rule depends on the algebra kind."""
    spec = x.spec
    if spec != y.spec:
        raise SpecMismatch("elements from different algebras")
    n = spec.degree
    field = spec.field
    out: dict = {}

    def accumulate(i, j, c):
        if c.is_zero:
            return
        # reduce u and v powers past the box through the defining scalars
        if i >= n:
            c = c * spec.a
            i -= n
        if j >= n:
            c = c * spec.b
            j -= n
        key = (i, j)
        s = out.get(key)
        total = c if s is None else s + c
        out[key] = total

    if spec.kind == "symbol":
        zpow = [field.one]
        for _ in range(2 * n):
            zpow.append(zpow[-1] * spec.zeta)
        for (i, j), c in x.coefficients.items():
            for (k, l), d in y.coefficients.items():
                # v^j u^k = z^{jk} u^k v^j
                accumulate(i + k, j + l, c * d * zpow[(j * k) % n])
    else:
        binom = _binomial_table(2 * n)
        for (i, j), c in x.coefficients.items():
            for (k, l), d in y.coefficients.items():
                cd = c * d
                # v^j u^k = sum_t C(j,t) C(k,t) t! u^{k-t} v^{j-t}
                for t in range(min(j, k) + 1):
                    factor = binom[j][t] * binom[k][t] * math.factorial(t)
                    if factor % spec.p == 0:
                        continue
                    accumulate(i + k - t, j + l - t,
                               cd * field.from_int(factor))
    return AlgebraElement(spec, out)


def _binomial_table(n: int) -> list[list[int]]:
    rows = [[1]]
    for i in range(1, n + 1):
        prev = rows[-1]
        rows.append([1] + [prev[k - 1] + prev[k] for k in range(1, i)] + [1])
    return rows


def algebra_inverse(x: AlgebraElement) -> AlgebraElement:
    """Two-sided inverse; single-monomial fast path, dense linear solve else."""
    spec = x.spec
    n = spec.degree
    if x.is_zero:
        raise NotInvertible("zero has no inverse")
    if len(x.coefficients) == 1:
        (i, j), c = next(iter(x.coefficients.items()))
        w = AlgebraElement(spec, {((n - i) % n, (n - j) % n): spec.field.one})
        s = (x * w).scalar_part()
        if s is None or s.is_zero:
            raise NotInvertible("monomial inverse failed")
        return w * s.inverse()
    # x * y = 1 as an n^2 x n^2 linear system over the base field
    basis = [(i, j) for i in range(n) for j in range(n)]
    pos = {key: t for t, key in enumerate(basis)}
    cols = []
    for key in basis:
        prod = x * AlgebraElement(spec, {key: spec.field.one})
        col = [spec.field.zero] * len(basis)
        for k2, c in prod.coefficients.items():
            col[pos[k2]] = c
        cols.append(col)
    mat = fieldmatrix.mat_from_rows([[cols[j][i] for j in range(len(basis))]
                                     for i in range(len(basis))])
    rhs = [spec.field.one if t == pos[(0, 0)] else spec.field.zero
           for t in range(len(basis))]
    sol = fieldmatrix.solve_right(mat, rhs)
    if sol is None:
        raise NotInvertible("element is a zero divisor")
    y = AlgebraElement(spec, {key: sol[t] for key, t in pos.items()})
    assert (x * y).scalar_part() is not None
    return y


# ---------------------------------------------------------------------------
# reduced norm through the regular representation over K[u]/(u^n - a)

def _upoly_mul(spec, f: list, g: list) -> list:
    """Multiply in K[u]/(u^n - a); inputs are length-n coefficient lists."""
    n = spec.degree
    field = spec.field
    out = [field.zero] * n
    for i, ci in enumerate(f):
        if ci.is_zero:
            continue
        for j, cj in enumerate(g):
            if cj.is_zero:
                continue
            k = i + j
            c = ci * cj
            if k >= n:
                k -= n
                c = c * spec.a
            out[k] = out[k] + c
    return out


def regular_representation(x: AlgebraElement) -> list[list[list[FieldElement]]]:
    """Matrix of left multiplication by x on the right-module basis v^j.

    Entry [r][c] is a length-n coefficient list in u: x * v^c equals
    sum_r v^r * (entry polynomial in u), using u^i v^t = z^{-it} v^t u^i.
    """
    spec = x.spec
    if spec.kind != "symbol":
        raise AlgebraError("regular representation is for symbol algebras")
    n = spec.degree
    field = spec.field
    zpows = [field.one]
    for _ in range(n - 1):
        zpows.append(zpows[-1] * spec.zeta)
    mat = [[[field.zero] * n for _ in range(n)] for _ in range(n)]
    for (i, m), c in x.coefficients.items():
        for col in range(n):
            t = m + col
            coeff = c
            if t >= n:
                t -= n
                coeff = coeff * spec.b
            # u^i v^t = z^{-i t} v^t u^i
            coeff = coeff * zpows[(-i * t) % n]
            mat[t][col][i] = mat[t][col][i] + coeff
    return mat


def reduced_norm(x: AlgebraElement) -> FieldElement:
    """Determinant of the regular representation; lands in the base field."""
    spec = x.spec
    if spec.kind != "symbol":
        raise AlgebraError("reduced norm implemented for symbol algebras")
    n = spec.degree
    field = spec.field
    mat = regular_representation(x)
    total = [field.zero] * n
    for perm, sign in _permutations_signed(n):
        term = [field.zero] * n
        term[0] = field.one
        for r in range(n):
            term = _upoly_mul(spec, term, mat[r][perm[r]])
        if sign < 0:
            term = [-c for c in term]
        total = [s + t for s, t in zip(total, term)]
    assert all(c.is_zero for c in total[1:]), \
        "reduced norm must be scalar in the u-subfield"
    return total[0]


def _permutations_signed(n: int):
    import itertools
    for perm in itertools.permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n)
                  if perm[i] > perm[j])
        yield perm, -1 if inv % 2 else 1


# ---------------------------------------------------------------------------
# norm residue classes in K*/(K*)^n

@dataclass(frozen=True)
class NormResidueClass:
    """Class of a norm value modulo n-th powers of the base field."""
    value: FieldElement
    n: int

    def is_trivial(self) -> Optional[bool]:
        return is_kth_power(self.value, self.n)

    def same_class_as(self, other: "NormResidueClass") -> Optional[bool]:
        if self.n != other.n or self.value.descriptor != other.value.descriptor:
            raise SpecMismatch("classes from different settings")
        return is_kth_power(self.value / other.value, self.n)


def norm_residue_class(x: AlgebraElement) -> NormResidueClass:
    nrm = reduced_norm(x)
    if nrm.is_zero:
        raise NotInvertible("zero reduced norm")
    return NormResidueClass(nrm, x.spec.degree)


def norm_residue_injectivity_check(elements: Sequence[AlgebraElement]) -> bool:
    """Definite pairwise-distinctness of norm classes; raises if undecided."""
    classes = [norm_residue_class(x) for x in elements]
    for i in range(len(classes)):
        for j in range(i + 1, len(classes)):
            same = classes[i].same_class_as(classes[j])
            if same is None:
                raise AlgebraError("norm-class comparison undecided")
            if same:
                return False
    return True


# ---------------------------------------------------------------------------
# torsion in the projective unit group

@dataclass(frozen=True)
class ProjectiveOrderReport:
    is_torsion: bool
    order: Optional[int]
    scalar_value: Optional[FieldElement]
    divides_degree: Optional[bool]


def finite_order_in_projective_units(x: AlgebraElement,
                                     bound: Optional[int] = None,
                                     division_assumed: bool = True) -> ProjectiveOrderReport:
    """Smallest k with x^k scalar, searched up to bound (default degree²)."""
    spec = x.spec
    if x.is_zero:
        raise NotInvertible("zero is not a unit")
    if bound is None:
        bound = spec.degree ** 2
    acc = x
    for k in range(1, bound + 1):
        s = acc.scalar_part()
        if s is not None:
            if s.is_zero:
                raise NotInvertible("power collapsed to zero; not a unit")
            divides = spec.degree % k == 0 if division_assumed else None
            return ProjectiveOrderReport(True, k, s, divides)
        acc = acc * x
    return ProjectiveOrderReport(False, None, None, None)


def heisenberg_subgroup_elements(spec: SymbolAlgebraSpec) -> list[AlgebraElement]:
    """The n² monomials u^i v^j, a transversal of the subgroup generated by
    the classes of u and v in the projective units."""
    n = spec.degree
    return [AlgebraElement(spec, {(i, j): spec.field.one})
            for i in range(n) for j in range(n)]


# ---------------------------------------------------------------------------
# the characteristic-p split certificate

@dataclass(frozen=True)
class WeylSplitCertificate:
    p: int
    u_matrix: tuple
    v_matrix: tuple
    u_power_is_y: bool
    v_power_is_x: bool
    commutator_is_one: bool
    monomials_independent: bool

    @property
    def ok(self) -> bool:
        return (self.u_power_is_y and self.v_power_is_x
                and self.commutator_is_one and self.monomials_independent)


def weyl_split_verification(spec: WeylModPSpec) -> WeylSplitCertificate:
    """Split the char-p algebra over the field with formal p-th roots.

    Over F_p(X, Y) with x = X^p and y = Y^p, realize u as multiplication by
    z plus Y, and v as d/dz plus X, on the truncated polynomial space of
    dimension p. All defining relations and the independence of the p²
    products of the shifted generators are verified exactly.
    """
    p = spec.p
    if p > 7:
        raise PrimeTooLarge("split verification capped at p = 7")
    big = Field(function_field(prime_field(p), ("X", "Y")))
    X, Y = big.var("X"), big.var("Y")
    zero, one = big.zero, big.one

    uprime = [[one if r == c + 1 else zero for c in range(p)] for r in range(p)]
    vprime = [[big.from_int(c) if r == c - 1 else zero for c in range(p)]
              for r in range(p)]
    um = fieldmatrix.mat_from_rows(uprime)
    vm = fieldmatrix.mat_from_rows(vprime)
    ident = fieldmatrix.identity(big, p)
    u_full = fieldmatrix.mat_add(um, fieldmatrix.mat_scale(ident, Y))
    v_full = fieldmatrix.mat_add(vm, fieldmatrix.mat_scale(ident, X))

    u_pow = fieldmatrix.mat_pow(u_full, p)
    v_pow = fieldmatrix.mat_pow(v_full, p)
    y_scalar = fieldmatrix.mat_scale(ident, Y ** p)
    x_scalar = fieldmatrix.mat_scale(ident, X ** p)
    comm = fieldmatrix.mat_sub(fieldmatrix.mat_mul(v_full, u_full),
                               fieldmatrix.mat_mul(u_full, v_full))

    rows = []
    acc_u = ident
    for i in range(p):
        acc = acc_u
        for j in range(p):
            rows.append([acc[r][c] for r in range(p) for c in range(p)])
            acc = fieldmatrix.mat_mul(acc, vm)
        acc_u = fieldmatrix.mat_mul(acc_u, um)
    rank = fieldmatrix.mat_rank(fieldmatrix.mat_from_rows(rows))

    return WeylSplitCertificate(
        p=p,
        u_matrix=u_full,
        v_matrix=v_full,
        u_power_is_y=fieldmatrix.mat_eq(u_pow, y_scalar),
        v_power_is_x=fieldmatrix.mat_eq(v_pow, x_scalar),
        commutator_is_one=fieldmatrix.mat_eq(comm, ident),
        monomials_independent=rank == p * p)


# ---------------------------------------------------------------------------
# inseparable torsion subgroups (classes of polynomials in v)

@dataclass(frozen=True)
class InseparableTorsionReport:
    p: int
    generators: tuple[AlgebraElement, ...]
    orders_divide_p: bool
    commute: bool
    rank: int

    @property
    def group_order(self) -> int:
        return self.p ** self.rank


def inseparable_torsion_subgroup(spec: WeylModPSpec,
                                 generators: Sequence[AlgebraElement]) -> InseparableTorsionReport:
    """Verify that polynomial-in-v classes form an elementary abelian
    p-subgroup of the projective units and compute its rank exactly.

    The rank is found by enumerating all products with exponents below p
    and counting how many are scalar; that count is p^(m - rank).
    """
    p = spec.p
    gens = list(generators)
    for g in gens:
        if g.is_zero:
            raise ZeroPolynomial("zero polynomial supplied")
        if not g.v_only():
            raise AlgebraError("generators must be polynomials in v")
    orders_ok = all((g ** p).scalar_part() is not None for g in gens)
    commute = all(gens[i] * gens[j] == gens[j] * gens[i]
                  for i in range(len(gens)) for j in range(i + 1, len(gens)))
    if not orders_ok or not commute:
        raise AlgebraError("classes must commute and have order dividing p "
                           "for the rank computation to make sense")
    m = len(gens)
    scalar_count = 0
    for code in range(p ** m):
        e = []
        c = code
        for _ in range(m):
            e.append(c % p)
            c //= p
        prod = spec.one
        for g, ei in zip(gens, e):
            if ei:
                prod = prod * g ** ei
        if prod.scalar_part() is not None:
            scalar_count += 1
    rank = m
    count = scalar_count
    while count > 1:
        if count % p:
            raise AlgebraError("scalar-product count is not a p-power; "
                               "generators do not span an elementary abelian group")
        count //= p
        rank -= 1
    return InseparableTorsionReport(p, tuple(gens), orders_ok, commute, rank)


def distinct_irreducible_family(spec: WeylModPSpec, m: int) -> list[AlgebraElement]:
    """First m monic irreducible polynomials in v over the prime field,
    ordered by degree then coefficient tuple."""
    p = spec.p
    found: list[tuple[int, ...]] = []
    degree = 1
    while len(found) < m:
        for code in range(p ** degree):
            coeffs = []
            c = code
            for _ in range(degree):
                coeffs.append(c % p)
                c //= p
            poly = tuple(coeffs) + (1,)
            if _poly_irreducible_mod_p(poly, p):
                found.append(poly)
                if len(found) == m:
                    break
        degree += 1
    return [spec.v_polynomial(f) for f in found]


def _poly_irreducible_mod_p(coeffs: tuple[int, ...], p: int) -> bool:
    """Monic irreducibility over the prime field by trial division."""
    deg = len(coeffs) - 1
    if deg < 1:
        return False
    for d in range(1, deg // 2 + 1):
        for code in range(p ** d):
            div = []
            c = code
            for _ in range(d):
                div.append(c % p)
                c //= p
            if _poly_divides_mod_p(div + [1], list(coeffs), p):
                return False
    return True


def _poly_divides_mod_p(div: list[int], target: list[int], p: int) -> bool:
    rem = [c % p for c in target]
    dd = len(div) - 1
    while rem and rem[-1] == 0:
        rem.pop()
    while len(rem) - 1 >= dd:
        lead = rem[-1]  # divisor is monic
        shift = len(rem) - 1 - dd
        for i, c in enumerate(div):
            rem[shift + i] = (rem[shift + i] - lead * c) % p
        while rem and rem[-1] == 0:
            rem.pop()
    return not rem


# ---------------------------------------------------------------------------
# separability

@dataclass(frozen=True)
class SeparabilityReport:
    separable: bool
    minimal_polynomial: MinimalPolynomial
    witness: Optional[InseparableTorsionReport]


def separability_check(spec, power: int, value: FieldElement) -> SeparabilityReport:
    """Separability of an element given by a power relation elt^power = value.

    For an inseparable element of a char-p algebra the report carries the
    order-p subgroup witness generated by the class of v.
    """
    minpoly = minimal_polynomial_power_relation(Field(value.descriptor), power, value)
    witness = None
    if not minpoly.separable and isinstance(spec, WeylModPSpec):
        witness = inseparable_torsion_subgroup(spec, [spec.v])
    return SeparabilityReport(minpoly.separable, minpoly, witness)
