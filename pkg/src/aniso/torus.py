"""Tori modeled as integer lattices with a finite matrix group acting.

A torus over a field with enough roots of unity is captured, for every
purpose of this package, by its rank-n lattice of one-parameter subgroups
together with the finite group of integer matrices acting on it. The field
never appears: all questions (anisotropy, torsion, exponent bounds) reduce
to exact integer linear algebra.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .errors import AnisoError
from .lattice import (AbelianGroupStructure, IntMatrix, fixed_sublattice,
                      group_closure, kernel_mod_d)


class TorusError(AnisoError):
    pass


class TrivialGroup(TorusError):
    pass


class NotAnisotropic(TorusError):
    pass


class NotInvariant(TorusError):
    pass


class OrderMismatch(TorusError):
    pass


class CharDividesOrder(TorusError):
    pass


class EnumerationTooLarge(TorusError):
    pass


class BadGroupTable(TorusError):
    pass


class TorusModel:
    """Rank-n lattice with a finite action; immutable after construction.

    characteristic is the characteristic of the intended base field
    scenario (0 if none); torsion orders are required to be coprime to it.
    norm_group_order is set by norm_quotient_torus and tightens the
    exponent bound that exponent_bound_check verifies.
    """

    def __init__(self, rank: int, theta_generators: Sequence[IntMatrix],
                 label: str = "", characteristic: int = 0,
                 norm_group_order: Optional[int] = None,
                 cap: Optional[int] = None):
        if rank < 1:
            raise TorusError("rank must be positive")
        gens = tuple(theta_generators)
        if not gens:
            gens = (IntMatrix.identity(rank),)
        for g in gens:
            if g.rows != rank or g.cols != rank:
                raise TorusError("generator size does not match rank")
            if abs(g.det()) != 1:
                raise TorusError("generators must be invertible over the integers")
        self.rank = rank
        self.theta_generators = gens
        self.label = label
        self.characteristic = characteristic
        self.norm_group_order = norm_group_order
        self.theta_elements = group_closure(gens, cap)

    @property
    def theta_order(self) -> int:
        return len(self.theta_elements)

    def __repr__(self):
        tag = self.label or "torus"
        return f"TorusModel({tag!r}, rank={self.rank}, theta order {self.theta_order})"

    def to_json(self) -> dict:
        return {"rank": str(self.rank),
                "theta_generators": [g.to_json() for g in self.theta_generators],
                "label": self.label}

    @staticmethod
    def from_json(obj: dict) -> "TorusModel":
        gens = [IntMatrix.from_json(g) for g in obj["theta_generators"]]
        return TorusModel(int(obj["rank"]), gens, obj.get("label", ""),
                          characteristic=int(obj.get("characteristic", 0)))


def is_anisotropic(t: TorusModel) -> bool:
    """True iff no nonzero lattice vector is fixed by the whole action."""
    return not fixed_sublattice(t.theta_generators)


@dataclass(frozen=True)
class TorsionReport:
    d: int
    group: AbelianGroupStructure
    witnesses: tuple[tuple[int, ...], ...]
    divisibility_check: bool


def torsion_points(t: TorusModel, d: int) -> TorsionReport:
    """Structure of the d-torsion fixed by the action, with witnesses.

    The d-torsion of the torus is the lattice tensored with d-th roots of
    unity; with all those roots in the base field the rational points are
    exactly the action-invariant vectors mod d. The report also records
    whether the group exponent divides the acting group's order, which
    must hold whenever the torus is anisotropic.
    """
    if t.characteristic and d % t.characteristic == 0:
        raise CharDividesOrder(
            f"torsion order {d} not coprime to characteristic {t.characteristic}")
    structure, witnesses = kernel_mod_d(t.theta_generators, d)
    exponent = structure.exponent
    check = exponent is not None and t.theta_order % exponent == 0
    return TorsionReport(d, structure, tuple(witnesses), check)


def coset_order(vbar: Sequence[int], d: int) -> int:
    """Order of the class of vbar in (Z/d)^n."""
    g = math.gcd(d, math.gcd(*[int(x) for x in vbar]) if any(vbar) else d)
    return d // g


def enumerate_invariant_cosets(t: TorusModel, d: int,
                               cap: int = 10 ** 6) -> list[tuple[int, ...]]:
    """All vectors in (Z/d)^n fixed mod d by every generator, zero included."""
    if d < 2:
        raise TorusError("modulus must be >= 2")
    if d ** t.rank > cap:
        raise EnumerationTooLarge(f"{d}^{t.rank} exceeds cap {cap}")
    out = []
    total = d ** t.rank
    for code in range(total):
        v = []
        c = code
        for _ in range(t.rank):
            v.append(c % d)
            c //= d
        v = tuple(v)
        if all(tuple(x % d for x in g.apply(v)) == v for g in t.theta_generators):
            out.append(v)
    return out


@dataclass(frozen=True)
class AveragingCertificate:
    """Machine check that an invariant class of exact order d forces d | #Θ.

    The lift v is summed over the whole acting group; anisotropy forces the
    invariant sum w to vanish, while invariance of the class makes w congruent
    to (#Θ)·v mod d. Both facts are recomputed here rather than trusted.
    """
    d: int
    lift: tuple[int, ...]
    theta_order: int
    sum_vector: tuple[int, ...]
    sum_is_zero: bool
    multiple_vanishes: bool
    d_divides_theta_order: bool

    @property
    def holds(self) -> bool:
        return self.sum_is_zero and self.multiple_vanishes and self.d_divides_theta_order


def averaging_certificate(t: TorusModel, d: int,
                          vbar: Sequence[int]) -> AveragingCertificate:
    if d < 2:
        raise TorusError("modulus must be >= 2")
    if len(vbar) != t.rank:
        raise TorusError("coset vector length does not match rank")
    if not is_anisotropic(t):
        raise NotAnisotropic("certificate requires an anisotropic torus")
    v = tuple(int(x) % d for x in vbar)
    for g in t.theta_generators:
        if tuple(x % d for x in g.apply(v)) != v:
            raise NotInvariant(f"{v} is moved mod {d} by a generator")
    if coset_order(v, d) != d:
        raise OrderMismatch(
            f"class of {v} has order {coset_order(v, d)}, expected exactly {d}")
    w = [0] * t.rank
    for g in t.theta_elements:
        gv = g.apply(v)
        w = [a + b for a, b in zip(w, gv)]
    w = tuple(w)
    order = t.theta_order
    sum_is_zero = all(x == 0 for x in w)
    multiple_vanishes = all((order * x) % d == 0 for x in v)
    cert = AveragingCertificate(d, v, order, w, sum_is_zero,
                                multiple_vanishes, order % d == 0)
    assert cert.holds, "averaging identity failed on a checked-valid input"
    return cert


# ---------------------------------------------------------------------------
# finite groups by multiplication table, and the norm-quotient construction

def validate_group_table(table: Sequence[Sequence[int]]) -> None:
    """Table rows give products: table[i][j] = index of g_i g_j, identity 0."""
    n = len(table)
    if n < 1:
        raise BadGroupTable("empty table")
    for row in table:
        if len(row) != n or any(not (0 <= x < n) for x in row):
            raise BadGroupTable("table is not square over valid indices")
    for i in range(n):
        if table[0][i] != i or table[i][0] != i:
            raise BadGroupTable("index 0 must act as the identity")
        if sorted(table[i]) != list(range(n)) or sorted(r[i] for r in table) != list(range(n)):
            raise BadGroupTable("table rows and columns must be permutations")
    for i in range(n):
        for j in range(n):
            for k in range(n):
                if table[table[i][j]][k] != table[i][table[j][k]]:
                    raise BadGroupTable("associativity fails")
    for i in range(n):
        if 0 not in table[i]:
            raise BadGroupTable(f"element {i} has no inverse")


def cyclic_table(n: int) -> list[list[int]]:
    return [[(i + j) % n for j in range(n)] for i in range(n)]


def symmetric_table(k: int) -> list[list[int]]:
    """Multiplication table of all permutations of k letters, identity first.

    Elements are ordered lexicographically as tuples; composition is
    (s*t)(i) = s(t(i)).
    """
    import itertools
    perms = sorted(itertools.permutations(range(k)))
    index = {p: i for i, p in enumerate(perms)}
    return [[index[tuple(s[t[i]] for i in range(k))] for t in perms] for s in perms]


def table_from_permutation_generators(generators: Sequence[Sequence[int]],
                                      cap: Optional[int] = None) -> list[list[int]]:
    """Close permutation generators and return the multiplication table.

    Permutations are given in one-line notation on 0..m-1 and act on the
    group they generate by composition; the identity gets index 0.
    """
    if not generators:
        raise TrivialGroup("no generators")
    m = len(generators[0])
    gens = [tuple(g) for g in generators]
    for g in gens:
        if sorted(g) != list(range(m)):
            raise BadGroupTable("generator is not a permutation")
    from .lattice import closure_cap, ClosureCapExceeded
    limit = closure_cap(cap)
    ident = tuple(range(m))
    seen = {ident: 0}
    order_list = [ident]
    queue = [ident]
    while queue:
        nxt = []
        for s in queue:
            for g in gens:
                prod = tuple(s[g[i]] for i in range(m))
                if prod not in seen:
                    if len(seen) >= limit:
                        raise ClosureCapExceeded(f"group exceeded cap {limit}")
                    seen[prod] = len(order_list)
                    order_list.append(prod)
                    nxt.append(prod)
        queue = nxt
    idx = {p: i for i, p in enumerate(order_list)}
    return [[idx[tuple(s[t[i]] for i in range(m))] for t in order_list]
            for s in order_list]


def norm_quotient_torus(table: Sequence[Sequence[int]],
                        label: str = "") -> TorusModel:
    """Torus of norm-one directions for the regular action of a finite group.

    The lattice is the group ring of G modulo the all-ones vector, of rank
    |G| - 1, with basis the classes of (g - identity) for g != identity.
    Left multiplication by s sends that basis class to the class of
    (sg - identity) minus the class of (s - identity).
    """
    validate_group_table(table)
    n = len(table)
    if n < 2:
        raise TrivialGroup("need a group of order at least 2")
    rank = n - 1

    def action_matrix(s: int) -> IntMatrix:
        cols = []
        for g in range(1, n):
            col = [0] * rank
            sg = table[s][g]
            if sg != 0:
                col[sg - 1] += 1
            if s != 0:
                col[s - 1] -= 1
            cols.append(col)
        return IntMatrix.from_rows([[cols[j][i] for j in range(rank)]
                                    for i in range(rank)])

    gens = [action_matrix(s) for s in range(1, n)]
    if not label:
        label = f"norm-quotient torus of a group of order {n}"
    return TorusModel(rank, gens, label, norm_group_order=n)


@dataclass(frozen=True)
class ExponentBoundReport:
    d_range: int
    theta_order: int
    group_bound: Optional[int]
    rows: tuple[tuple[int, int], ...]  # (d, exponent of d-torsion)
    all_pass: bool


def exponent_bound_check(t: TorusModel, d_range: int) -> ExponentBoundReport:
    """Check for every d up to d_range that the d-torsion exponent divides
    the acting group's order (and the norm group order when present)."""
    if not is_anisotropic(t):
        raise NotAnisotropic("exponent bounds only hold for anisotropic tori")
    rows = []
    ok = True
    for d in range(2, d_range + 1):
        if t.characteristic and d % t.characteristic == 0:
            continue
        rep = torsion_points(t, d)
        e = rep.group.exponent
        rows.append((d, e))
        if t.theta_order % e:
            ok = False
        if t.norm_group_order is not None and t.norm_group_order % e:
            ok = False
    return ExponentBoundReport(d_range, t.theta_order, t.norm_group_order,
                               tuple(rows), ok)
