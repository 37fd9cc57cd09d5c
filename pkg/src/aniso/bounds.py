"""Numeric bound calculators and divisibility checkers.

Covers the classical least-common-multiple bound for finite subgroups of
integer matrix groups, the torsion-prime table keyed by Dynkin type, the
exponent-to-order divisibility theorem for finite matrix groups, and the
composite divisor bounds for tori, reductive groups, division-algebra
automorphisms, and pointless quadrics.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from . import fieldmatrix
from .errors import AnisoError
from .scalars import Field, FieldDescriptor


class BoundsError(AnisoError):
    pass


class UnknownType(BoundsError):
    pass


class GroupTooLarge(BoundsError):
    pass


class MissingParameter(BoundsError):
    pass


class HypothesisFails(BoundsError):
    """The exponent hypothesis fails on some element of coprime order."""


# ---------------------------------------------------------------------------
# integer matrix group bounds

_MAX_ORDER_TABLE = {1: 2, 2: 12, 3: 48}


def _primes_upto(n: int) -> list[int]:
    sieve = [True] * (n + 1)
    out = []
    for p in range(2, n + 1):
        if sieve[p]:
            out.append(p)
            for k in range(p * p, n + 1, p):
                sieve[k] = False
    return out


@dataclass(frozen=True)
class MinkowskiValues:
    n: int
    upsilon_a: Optional[int]
    upsilon_m: int

    @property
    def upsilon_a_known(self) -> bool:
        return self.upsilon_a is not None


def minkowski_values(n: int) -> MinkowskiValues:
    """Bounds for finite subgroups of the n x n integer matrix group.

    upsilon_m is the least common multiple of all finite subgroup orders,
    computed from the prime-by-prime floor formula; upsilon_a is the
    maximal single order, known from the table only for n <= 3.
    """
    if n < 1:
        raise BoundsError("n must be positive")
    upsilon_m = 1
    for p in _primes_upto(n + 1):
        exponent = 0
        block = p - 1
        while block <= n:
            exponent += n // block
            block *= p
        upsilon_m *= p ** exponent
    for p in _primes_upto(n + 1):
        if upsilon_m % p:
            raise BoundsError("internal consistency: missing prime factor")
    return MinkowskiValues(n=n, upsilon_a=_MAX_ORDER_TABLE.get(n),
                           upsilon_m=upsilon_m)


# ---------------------------------------------------------------------------
# torsion primes by Dynkin type

def torsion_primes(type_list: Iterable[tuple[str, int]]) -> frozenset:
    """Union of torsion-prime sets over quasi-simple factors.

    Types A and C contribute nothing; B, D, and G2 contribute 2;
    F4, E6, and E7 contribute {2, 3}; E8 contributes {2, 3, 5}.
    """
    out: set[int] = set()
    for entry in type_list:
        letter, rank = entry
        letter = letter.upper()
        if letter in ("A", "B", "C"):
            if rank < 1:
                raise UnknownType(f"{letter}_{rank} is not a valid type")
            if letter in ("B",):
                out |= {2}
        elif letter == "D":
            if rank < 2:
                raise UnknownType(f"D_{rank} is not a valid type")
            out |= {2}
        elif letter == "G":
            if rank != 2:
                raise UnknownType(f"G_{rank} is not a valid type")
            out |= {2}
        elif letter == "F":
            if rank != 4:
                raise UnknownType(f"F_{rank} is not a valid type")
            out |= {2, 3}
        elif letter == "E":
            if rank in (6, 7):
                out |= {2, 3}
            elif rank == 8:
                out |= {2, 3, 5}
            else:
                raise UnknownType(f"E_{rank} is not a valid type")
        else:
            raise UnknownType(f"unknown Dynkin letter {letter!r}")
    return frozenset(out)


# ---------------------------------------------------------------------------
# explicit finite matrix groups and the exponent-order theorem

class FiniteMatrixGroup:
    """An explicit finite group of invertible matrices over an exact field."""

    def __init__(self, descriptor: FieldDescriptor, elements: Sequence):
        if not elements:
            raise BoundsError("a group needs at least the identity")
        self.descriptor = descriptor
        self.field = Field(descriptor)
        self.elements = list(elements)
        n = len(self.elements[0])
        self.degree = n
        ident = fieldmatrix.identity(self.field, n)
        index = {}
        for m in self.elements:
            if len(m) != n or any(len(row) != n for row in m):
                raise BoundsError("mixed matrix shapes in one group")
            if m in index:
                raise BoundsError("duplicate element in group list")
            index[m] = True
        if ident not in index:
            raise BoundsError("identity matrix missing")
        if len(self.elements) <= 2000:
            for a in self.elements:
                for b in self.elements:
                    if fieldmatrix.mat_mul(a, b) not in index:
                        raise BoundsError("element list is not closed "
                                          "under multiplication")

    @classmethod
    def from_generators(cls, descriptor: FieldDescriptor, generators,
                        cap: int = 100000) -> "FiniteMatrixGroup":
        fld = Field(descriptor)
        if not generators:
            raise BoundsError("need at least one generator")
        n = len(generators[0])
        ident = fieldmatrix.identity(fld, n)
        elements = [ident]
        seen = {ident}
        queue = [ident]
        gens = [fieldmatrix.mat_from_rows([list(r) for r in g])
                for g in generators]
        while queue:
            current = queue.pop(0)
            for g in gens:
                nxt = fieldmatrix.mat_mul(current, g)
                if nxt not in seen:
                    if len(elements) >= cap:
                        raise GroupTooLarge(f"closure exceeded cap {cap}")
                    seen.add(nxt)
                    elements.append(nxt)
                    queue.append(nxt)
        return cls(descriptor, elements)

    @property
    def order(self) -> int:
        return len(self.elements)

    def element_order(self, m) -> int:
        ident = fieldmatrix.identity(self.field, self.degree)
        power = m
        for k in range(1, self.order + 1):
            if fieldmatrix.mat_eq(power, ident):
                return k
            power = fieldmatrix.mat_mul(power, m)
        raise BoundsError("element order exceeds the group order")


def coprime_part(value: int, p: int) -> int:
    """Largest factor of value not divisible by p; value itself when p = 0."""
    if p <= 0:
        return value
    while value % p == 0:
        value //= p
    return value


@dataclass(frozen=True)
class BurnsideReport:
    group_order: int
    degree: int
    d: int
    characteristic: int
    coprime_order: int
    bound: int
    hypothesis_holds: bool
    violating_orders: tuple
    divides: Optional[bool]


def burnside_divisibility_check(group: FiniteMatrixGroup, d: int,
                                strict: bool = False) -> BurnsideReport:
    """Exponent hypothesis and order conclusion for a finite matrix group.

    If every element of order coprime to the characteristic satisfies
    g^d = 1, the part of the group order coprime to the characteristic
    must divide d^degree. A failed hypothesis is reported (or raised with
    strict=True); a failed conclusion under a true hypothesis is an
    implementation bug and raises.
    """
    if d < 1:
        raise BoundsError("d must be positive")
    p = group.field.characteristic
    violating = []
    for m in group.elements:
        order = group.element_order(m)
        if p and order % p == 0:
            continue
        if d % order:
            violating.append(order)
    hypothesis = not violating
    coprime = coprime_part(group.order, p)
    bound = d ** group.degree
    divides: Optional[bool] = None
    if hypothesis:
        divides = bound % coprime == 0
        if not divides:
            raise BoundsError("conclusion failed under a true hypothesis; "
                              "this indicates an implementation bug")
    elif strict:
        raise HypothesisFails(f"element orders {sorted(set(violating))} "
                              f"do not divide {d}")
    return BurnsideReport(group_order=group.order, degree=group.degree, d=d,
                          characteristic=p, coprime_order=coprime,
                          bound=bound, hypothesis_holds=hypothesis,
                          violating_orders=tuple(sorted(set(violating))),
                          divides=divides)


# ---------------------------------------------------------------------------
# composite divisor bounds

BOUND_KINDS = ("torus", "reductive_perfect", "general_lag",
               "semisimple_char_p", "severi_brauer", "quadric_odd",
               "quadric_even")


@dataclass(frozen=True)
class BoundQuery:
    kind: str
    n: Optional[int] = None
    r: Optional[int] = None
    N: Optional[int] = None
    p: Optional[int] = None
    m: Optional[int] = None


@dataclass(frozen=True)
class BoundResult:
    query: BoundQuery
    divisor_bound: int
    meaning: str


def _need(query: BoundQuery, *names: str) -> list[int]:
    out = []
    for name in names:
        value = getattr(query, name)
        if value is None:
            raise MissingParameter(f"kind {query.kind!r} needs parameter "
                                   f"{name!r}")
        if value < 1 and name != "m":
            raise BoundsError(f"parameter {name!r} must be positive")
        if name == "m" and value < 0:
            raise BoundsError("parameter 'm' must be non-negative")
        out.append(value)
    return out


def bound_calculator(query: BoundQuery) -> BoundResult:
    """The exact integer divisor bound for a supported scenario."""
    kind = query.kind
    if kind == "torus":
        (n,) = _need(query, "n")
        um = minkowski_values(n).upsilon_m
        return BoundResult(query, um ** n,
                           f"order of a finite subgroup of an anisotropic "
                           f"rank-{n} torus divides {um}^{n}")
    if kind == "reductive_perfect":
        n, r, big_n = _need(query, "n", "r", "N")
        um = minkowski_values(n).upsilon_m
        return BoundResult(query, r * um ** big_n,
                           f"order of a finite subgroup divides "
                           f"{r}*{um}^{big_n} for anisotropic reductive "
                           f"groups over perfect fields")
    if kind == "general_lag":
        n, r, big_n = _need(query, "n", "r", "N")
        um = minkowski_values(n).upsilon_m
        return BoundResult(query, r * um ** big_n,
                           f"part of the subgroup order coprime to the "
                           f"characteristic divides {r}*{um}^{big_n}")
    if kind == "semisimple_char_p":
        n, r, big_n, p, m = _need(query, "n", "r", "N", "p", "m")
        um = minkowski_values(n).upsilon_m
        return BoundResult(query, r * um ** big_n,
                           f"subgroups split as a normal part of order "
                           f"coprime to {p} dividing {r}*{um}^{big_n}, "
                           f"extended by an abelian {p}-group of exponent "
                           f"at most {p}^{m}")
    if kind == "severi_brauer":
        (n,) = _need(query, "n")
        return BoundResult(query, n * n,
                           f"finite automorphism groups are abelian of "
                           f"exponent dividing {n} and order dividing "
                           f"{n}^2 when the algebra is division")
    if kind == "quadric_odd":
        (n,) = _need(query, "n")
        if n % 2 == 0 or n < 3:
            raise BoundsError("quadric_odd needs odd n >= 3")
        return BoundResult(query, 2 ** (n - 1),
                           f"finite automorphism groups of a pointless "
                           f"quadric in {n} variables are elementary "
                           f"abelian 2-groups of order dividing 2^{n - 1}")
    if kind == "quadric_even":
        (n,) = _need(query, "n")
        if n % 2 or n < 4:
            raise BoundsError("quadric_even needs even n >= 4")
        return BoundResult(query, 8 ** (n - 1),
                           f"order of a finite automorphism group of a "
                           f"pointless quadric in {n} variables divides "
                           f"8^{n - 1}")
    raise BoundsError(f"unknown bound kind {kind!r}; expected one of "
                      f"{BOUND_KINDS}")


def pi1_order_split(order_and_p: tuple[int, int]) -> tuple[int, int]:
    """Factor order = l * p^m with l coprime to p; returns (l, m)."""
    order, p = order_and_p
    if order < 1:
        raise BoundsError("order must be positive")
    if p < 2:
        raise BoundsError("p must be a prime")
    m = 0
    l = order
    while l % p == 0:
        l //= p
        m += 1
    return l, m
