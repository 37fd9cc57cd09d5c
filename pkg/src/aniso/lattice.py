"""Integer lattices: Smith normal form, kernels, closures, cohomology.

Conventions used throughout the package:

- matrices act on column vectors, so a group element g sends v to g @ v;
- a lattice is handed around as a list of row vectors spanning it;
- Smith decompositions satisfy U @ M @ V = D with U, V unimodular and the
  diagonal forming a divisibility chain d1 | d2 | ... with zeros last.

Pivot rule for the Smith reduction: the nonzero entry of smallest absolute
value in the working submatrix, ties broken by lowest row index then lowest
column index. This makes every decomposition reproducible bit for bit.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .errors import AnisoError


class LatticeError(AnisoError):
    pass


class NotUnimodular(LatticeError):
    pass


class InvalidModulus(LatticeError):
    pass


class ClosureCapExceeded(LatticeError):
    pass


DEFAULT_CLOSURE_CAP = 10000
CLOSURE_CAP_ENV = "ANISO_CLOSURE_CAP"


def closure_cap(explicit: Optional[int] = None) -> int:
    if explicit is not None:
        return explicit
    return int(os.environ.get(CLOSURE_CAP_ENV, DEFAULT_CLOSURE_CAP))


@dataclass(frozen=True)
class IntMatrix:
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if not self.entries:
            raise LatticeError("matrix needs at least one row")
        w = len(self.entries[0])
        for r in self.entries:
            if len(r) != w:
                raise LatticeError("ragged rows")

    @staticmethod
    def from_rows(rows: Iterable[Sequence[int]]) -> "IntMatrix":
        return IntMatrix(tuple(tuple(int(x) for x in r) for r in rows))

    @staticmethod
    def identity(n: int) -> "IntMatrix":
        return IntMatrix(tuple(tuple(1 if i == j else 0 for j in range(n))
                               for i in range(n)))

    @staticmethod
    def zeros(r: int, c: int) -> "IntMatrix":
        return IntMatrix(tuple((0,) * c for _ in range(r)))

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0])

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i]

    def col(self, j: int) -> tuple[int, ...]:
        return tuple(r[j] for r in self.entries)

    def transpose(self) -> "IntMatrix":
        return IntMatrix(tuple(zip(*self.entries)))

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise LatticeError("shape mismatch")
        bt = tuple(zip(*other.entries))
        return IntMatrix(tuple(
            tuple(sum(x * y for x, y in zip(row, col)) for col in bt)
            for row in self.entries))

    def __add__(self, other):
        return IntMatrix(tuple(tuple(x + y for x, y in zip(a, b))
                               for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other):
        return IntMatrix(tuple(tuple(x - y for x, y in zip(a, b))
                               for a, b in zip(self.entries, other.entries)))

    def __neg__(self):
        return IntMatrix(tuple(tuple(-x for x in r) for r in self.entries))

    def apply(self, v: Sequence[int]) -> tuple[int, ...]:
        if len(v) != self.cols:
            raise LatticeError("vector length mismatch")
        return tuple(sum(x * y for x, y in zip(row, v)) for row in self.entries)

    def is_identity(self) -> bool:
        return self == IntMatrix.identity(self.rows) if self.rows == self.cols else False

    def det(self) -> int:
        if self.rows != self.cols:
            raise LatticeError("determinant of a non-square matrix")
        m = [[Fraction(x) for x in row] for row in self.entries]
        n = self.rows
        det = Fraction(1)
        for col in range(n):
            piv = next((r for r in range(col, n) if m[r][col]), None)
            if piv is None:
                return 0
            if piv != col:
                m[col], m[piv] = m[piv], m[col]
                det = -det
            det *= m[col][col]
            inv = 1 / m[col][col]
            for r in range(col + 1, n):
                if m[r][col]:
                    f = m[r][col] * inv
                    for c in range(col, n):
                        m[r][c] -= f * m[col][c]
        assert det.denominator == 1
        return int(det)

    def power(self, e: int) -> "IntMatrix":
        if e < 0:
            return int_inverse(self).power(-e)
        out = IntMatrix.identity(self.rows)
        acc = self
        while e:
            if e & 1:
                out = out @ acc
            acc = acc @ acc
            e >>= 1
        return out

    def to_json(self) -> dict:
        return {"rows": str(self.rows), "cols": str(self.cols),
                "entries": [[str(x) for x in row] for row in self.entries]}

    @staticmethod
    def from_json(obj) -> "IntMatrix":
        if isinstance(obj, list):
            return IntMatrix.from_rows(obj)
        m = IntMatrix.from_rows(obj["entries"])
        if "rows" in obj and (m.rows != int(obj["rows"]) or m.cols != int(obj["cols"])):
            raise LatticeError("declared shape disagrees with entries")
        return m


def int_inverse(m: IntMatrix) -> IntMatrix:
    """Inverse of a unimodular integer matrix."""
    if m.rows != m.cols:
        raise NotUnimodular("non-square matrix")
    n = m.rows
    a = [[Fraction(x) for x in row] + [Fraction(1 if i == j else 0) for j in range(n)]
         for i, row in enumerate(m.entries)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col]), None)
        if piv is None:
            raise NotUnimodular("singular matrix")
        a[col], a[piv] = a[piv], a[col]
        inv = 1 / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col]:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    out = []
    for row in a:
        vals = row[n:]
        if any(v.denominator != 1 for v in vals):
            raise NotUnimodular("inverse is not integral")
        out.append(tuple(int(v) for v in vals))
    return IntMatrix(tuple(out))


# ---------------------------------------------------------------------------
# Smith normal form

@dataclass(frozen=True)
class SNFResult:
    U: IntMatrix
    D: IntMatrix
    V: IntMatrix

    @property
    def diagonal(self) -> tuple[int, ...]:
        return tuple(self.D.entries[i][i] for i in range(min(self.D.rows, self.D.cols)))

    def verify(self, m: IntMatrix) -> bool:
        if (self.U @ m @ self.V) != self.D:
            return False
        if abs(self.U.det()) != 1 or abs(self.V.det()) != 1:
            return False
        diag = self.diagonal
        for i in range(self.D.rows):
            for j in range(self.D.cols):
                if i != j and self.D.entries[i][j]:
                    return False
        for a, b in zip(diag, diag[1:]):
            if a == 0 and b != 0:
                return False
            if a and b % a:
                return False
        return all(x >= 0 for x in diag)


def smith_normal_form(m: IntMatrix) -> SNFResult:
    """U @ m @ V = D with the documented pivot rule and divisibility chain."""
    a = [list(row) for row in m.entries]
    rows, cols = m.rows, m.cols
    u = [list(row) for row in IntMatrix.identity(rows).entries]
    v = [list(row) for row in IntMatrix.identity(cols).entries]

    def row_op(i, j, q):  # row_i -= q * row_j
        a[i] = [x - q * y for x, y in zip(a[i], a[j])]
        u[i] = [x - q * y for x, y in zip(u[i], u[j])]

    def col_op(i, j, q):  # col_i -= q * col_j
        for r in range(rows):
            a[r][i] -= q * a[r][j]
        for r in range(cols):
            v[r][i] -= q * v[r][j]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for r in range(rows):
            a[r][i], a[r][j] = a[r][j], a[r][i]
        for r in range(cols):
            v[r][i], v[r][j] = v[r][j], v[r][i]

    t = 0
    limit = min(rows, cols)
    while t < limit:
        # re-select the smallest-|value| pivot every round; this keeps
        # coefficients from compounding across euclidean passes
        pivot = None
        for i in range(t, rows):
            for j in range(t, cols):
                if a[i][j]:
                    key = (abs(a[i][j]), i, j)
                    if pivot is None or key < pivot:
                        pivot = key
        if pivot is None:
            break
        _, pi, pj = pivot
        if pi != t:
            swap_rows(pi, t)
        if pj != t:
            swap_cols(pj, t)
        p = a[t][t]
        reduced = False
        for i in range(t + 1, rows):
            if a[i][t]:
                row_op(i, t, a[i][t] // p)
                reduced = True
        for j in range(t + 1, cols):
            if a[t][j]:
                col_op(j, t, a[t][j] // p)
                reduced = True
        if reduced:
            continue
        # pivot must divide the remaining submatrix for the chain to hold
        bad = None
        for i in range(t + 1, rows):
            for j in range(t + 1, cols):
                if a[i][j] % p:
                    bad = i
                    break
            if bad is not None:
                break
        if bad is not None:
            a[t] = [x + y for x, y in zip(a[t], a[bad])]
            u[t] = [x + y for x, y in zip(u[t], u[bad])]
            continue
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    result = SNFResult(IntMatrix.from_rows(u), IntMatrix.from_rows(a),
                       IntMatrix.from_rows(v))
    assert result.verify(m), "internal SNF inconsistency"
    return result


# ---------------------------------------------------------------------------
# kernels and fixed sublattices

def integer_kernel(m: IntMatrix) -> list[tuple[int, ...]]:
    """Basis (as rows) of {v : m @ v = 0}."""
    snf = smith_normal_form(m)
    diag = snf.diagonal
    rank = sum(1 for d in diag if d)
    return [snf.V.col(i) for i in range(rank, m.cols)]


def _stack_shifted(generators: Sequence[IntMatrix]) -> IntMatrix:
    if not generators:
        raise LatticeError("need at least one generator")
    n = generators[0].cols
    rows = []
    ident = IntMatrix.identity(n)
    for g in generators:
        if g.rows != n or g.cols != n:
            raise LatticeError("generators must be square of equal size")
        rows.extend((g - ident).entries)
    return IntMatrix.from_rows(rows)


def fixed_sublattice(generators: Sequence[IntMatrix]) -> list[tuple[int, ...]]:
    """Basis rows of the common fixed sublattice of the generated group.

    A vector fixed by every generator is fixed by every word in them, so
    only generators are stacked.
    """
    return integer_kernel(_stack_shifted(generators))


@dataclass(frozen=True)
class AbelianGroupStructure:
    """Invariant factors d1 | d2 | ... (each >= 2) plus a free rank."""
    invariant_factors: tuple[int, ...]
    free_rank: int = 0

    def __post_init__(self):
        for a, b in zip(self.invariant_factors, self.invariant_factors[1:]):
            if b % a:
                raise LatticeError("invariant factors must form a divisibility chain")
        if any(d < 2 for d in self.invariant_factors):
            raise LatticeError("invariant factors must be >= 2")

    @property
    def order(self) -> Optional[int]:
        if self.free_rank:
            return None
        out = 1
        for d in self.invariant_factors:
            out *= d
        return out

    @property
    def exponent(self) -> Optional[int]:
        if self.free_rank:
            return None
        return self.invariant_factors[-1] if self.invariant_factors else 1

    @property
    def is_trivial(self) -> bool:
        return not self.invariant_factors and not self.free_rank


def kernel_mod_d(generators: Sequence[IntMatrix], d: int):
    """Structure and generators of {v in (Z/d)^n : g v = v for all g}.

    Returns (AbelianGroupStructure, witnesses) where witnesses are coset
    generators with entries reduced into [0, d), one per invariant factor,
    matching the factor order.
    """
    if d < 2:
        raise InvalidModulus(f"modulus must be >= 2, got {d}")
    stacked = _stack_shifted(generators)
    n = stacked.cols
    snf = smith_normal_form(stacked)
    diag = list(snf.diagonal) + [0] * (n - len(snf.diagonal))
    factors = []
    witnesses = []
    for i in range(n):
        s = diag[i]
        order = math.gcd(s, d) if s else d
        if order > 1:
            factors.append(order)
            vec = tuple((x * (d // order)) % d for x in snf.V.col(i))
            witnesses.append(vec)
    structure = AbelianGroupStructure(tuple(factors))
    return structure, witnesses


# ---------------------------------------------------------------------------
# group closure

def group_closure(generators: Sequence[IntMatrix], cap: Optional[int] = None) -> list[IntMatrix]:
    """BFS closure of the generated matrix group, identity first.

    Deterministic order: breadth first, multiplying by generators in the
    given order on the right. Raises ClosureCapExceeded past the cap
    (default 10000, override with the ANISO_CLOSURE_CAP variable).
    """
    cap = closure_cap(cap)
    if not generators:
        raise LatticeError("need at least one generator")
    n = generators[0].rows
    ident = IntMatrix.identity(n)
    seen = {ident.entries: ident}
    queue = [ident]
    while queue:
        nxt = []
        for m in queue:
            for g in generators:
                prod = m @ g
                if prod.entries not in seen:
                    if len(seen) >= cap:
                        raise ClosureCapExceeded(f"closure exceeded cap {cap}")
                    seen[prod.entries] = prod
                    nxt.append(prod)
        queue = nxt
    return list(seen.values())


# ---------------------------------------------------------------------------
# quotients of lattices and first cohomology

def row_basis(rows: Sequence[Sequence[int]], ambient: int) -> list[tuple[int, ...]]:
    """Basis rows of the lattice spanned by the given rows of Z^ambient."""
    rows = [tuple(int(x) for x in r) for r in rows if any(r)]
    if not rows:
        return []
    m = IntMatrix.from_rows(rows)
    if m.cols != ambient:
        raise LatticeError("ambient dimension mismatch")
    snf = smith_normal_form(m)
    vinv = int_inverse(snf.V)
    out = []
    for i, s in enumerate(snf.diagonal):
        if s:
            out.append(tuple(s * x for x in vinv.row(i)))
    return out


def solve_left(a: IntMatrix, b: Sequence[int]) -> Optional[tuple[int, ...]]:
    """One integer solution x of x @ a = b, or None."""
    if len(b) != a.cols:
        raise LatticeError("vector length mismatch")
    snf = smith_normal_form(a)
    c = tuple(sum(bj * snf.V.entries[j][i] for j, bj in enumerate(b))
              for i in range(a.cols))
    diag = list(snf.diagonal) + [0] * (a.cols - len(snf.diagonal))
    y = [0] * a.rows
    for i in range(a.cols):
        s = diag[i]
        if s:
            if c[i] % s:
                return None
            if i < a.rows:
                y[i] = c[i] // s
        elif c[i]:
            return None
    return tuple(sum(y[j] * snf.U.entries[j][i] for j in range(a.rows))
                 for i in range(a.rows))


def _reduce_mod_rows(v: Sequence[int], basis: list[tuple[int, ...]]) -> tuple[int, ...]:
    # bring v into a box modulo the row lattice using echelonized basis rows
    v = list(v)
    ech = sorted(basis, key=lambda r: next((i for i, x in enumerate(r) if x), len(r)))
    for row in ech:
        lead = next((i for i, x in enumerate(row) if x), None)
        if lead is None:
            continue
        q = v[lead] // row[lead] if row[lead] else 0
        if q:
            v = [x - q * y for x, y in zip(v, row)]
    return tuple(v)


def abelian_quotient(numerator_rows: Sequence[Sequence[int]],
                     denominator_rows: Sequence[Sequence[int]],
                     ambient: int):
    """Structure of (span numerator) / (span denominator) plus generators.

    The denominator must be contained in the numerator span. Returns
    (AbelianGroupStructure, torsion_generators, free_generators) with
    generator vectors in Z^ambient matching the invariant factor order.
    """
    num = row_basis(numerator_rows, ambient)
    den = [tuple(int(x) for x in r) for r in denominator_rows if any(r)]
    if not num:
        return AbelianGroupStructure(()), [], []
    r = len(num)
    if not den:
        return (AbelianGroupStructure((), free_rank=r), [], list(num))
    # express denominator rows in the numerator basis (exact rational solve)
    bt = [[Fraction(num[i][k]) for i in range(r)] for k in range(ambient)]
    coeff_rows = []
    for drow in den:
        aug = [row[:] + [Fraction(dv)] for row, dv in zip(bt, drow)]
        sol = _solve_exact(aug, r)
        if sol is None:
            raise LatticeError("denominator lattice not contained in numerator lattice")
        coeff_rows.append(tuple(int(x) for x in sol))
    c = IntMatrix.from_rows(coeff_rows)
    snf = smith_normal_form(c)
    vinv = int_inverse(snf.V)
    diag = list(snf.diagonal) + [0] * (r - len(snf.diagonal))
    torsion, free = [], []
    factors = []
    den_basis = row_basis(den, ambient)
    for i in range(r):
        w = vinv.row(i)
        gen = tuple(sum(w[j] * num[j][k] for j in range(r)) for k in range(ambient))
        s = diag[i]
        if s == 0:
            free.append(gen)
        elif s > 1:
            factors.append(s)
            torsion.append(_reduce_mod_rows(gen, den_basis))
    structure = AbelianGroupStructure(tuple(factors), free_rank=len(free))
    return structure, torsion, free


def _solve_exact(aug, ncols):
    # Gaussian elimination on an augmented Fraction system; unique or None
    rows = len(aug)
    rank = 0
    piv_cols = []
    for col in range(ncols):
        piv = next((rr for rr in range(rank, rows) if aug[rr][col]), None)
        if piv is None:
            continue
        aug[rank], aug[piv] = aug[piv], aug[rank]
        inv = 1 / aug[rank][col]
        aug[rank] = [x * inv for x in aug[rank]]
        for rr in range(rows):
            if rr != rank and aug[rr][col]:
                f = aug[rr][col]
                aug[rr] = [x - f * y for x, y in zip(aug[rr], aug[rank])]
        piv_cols.append(col)
        rank += 1
    for rr in range(rank, rows):
        if aug[rr][ncols]:
            return None
    x = [Fraction(0)] * ncols
    for col, rr in zip(piv_cols, range(rank)):
        x[col] = aug[rr][ncols]
    if any(v.denominator != 1 for v in x):
        return None
    return x


def h1_of_theta_module(generators: Sequence[IntMatrix],
                       cap: Optional[int] = None) -> AbelianGroupStructure:
    """First cohomology of the generated finite group acting on Z^n.

    Cocycles are maps c with c(gh) = c(g) + g c(h), computed from the full
    multiplication table; coboundaries are v - g v. The result is finite
    for a finite acting group, and the free rank is asserted to vanish.
    """
    elements = group_closure(generators, cap)
    n = elements[0].rows
    index = {m.entries: i for i, m in enumerate(elements)}
    k = len(elements)
    nvars = k * n
    eq_rows = []
    for gi, g in enumerate(elements):
        for hi, h in enumerate(elements):
            prod = index[(g @ h).entries]
            for r in range(n):
                row = [0] * nvars
                row[prod * n + r] += 1
                row[gi * n + r] -= 1
                for s in range(n):
                    row[hi * n + s] -= g.entries[r][s]
                if any(row):
                    eq_rows.append(tuple(row))
    if eq_rows:
        cocycles = integer_kernel(IntMatrix.from_rows(eq_rows))
    else:
        cocycles = [tuple(1 if i == j else 0 for j in range(nvars)) for i in range(nvars)]
    coboundaries = []
    for bidx in range(n):
        vec = []
        for g in elements:
            col = g.col(bidx)
            vec.extend(x - (1 if r == bidx else 0) for r, x in enumerate(col))
        coboundaries.append(tuple(vec))
    structure, _, _ = abelian_quotient(cocycles, coboundaries, nvars)
    assert structure.free_rank == 0, "H^1 of a finite group on Z^n must be finite"
    return structure
