"""Quadratic forms over exact fields.

Forms are stored as upper-triangular coefficient dictionaries. The module
provides the associated bilinear form, diagonalization away from
characteristic 2, the canonical normal form with its Arf parameter over
finite fields of characteristic 2, extraction of an isotropic vector from
an isometry of order p in characteristic p, order checks for projective
isometries, and the multiplier-form construction that yields non-abelian
finite isometry groups of pointless quadrics in dimension 2^k.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

from . import fieldmatrix
from .errors import AnisoError
from .scalars import (
    Field,
    FieldDescriptor,
    FieldElement,
    FieldTooLarge,
    artin_schreier_image,
    descriptor_from_json,
    descriptor_to_json,
    element_from_json,
    element_to_json,
    function_field,
    rationals,
)


class QuadFormError(AnisoError):
    pass


class DegenerateForm(QuadFormError):
    pass


class CharTwo(QuadFormError):
    pass


class WrongCharacteristic(QuadFormError):
    pass


class NotOrderP(QuadFormError):
    pass


class NotIsometry(QuadFormError):
    pass


class NotDiagonalizable(QuadFormError):
    pass


class OrderExceedsBound(QuadFormError):
    """An element order incompatible with the asserted anisotropy."""


class KTooLarge(QuadFormError):
    pass


class AllZeroCandidate(QuadFormError):
    pass


class ConsistencyAlarm(QuadFormError):
    """A computation reached a state the supporting theory rules out."""


# ---------------------------------------------------------------------------
# the form type

class QuadraticForm:
    """q(x) = sum of coeffs[(i, j)] * x_i * x_j over pairs i <= j."""

    __slots__ = ("descriptor", "field", "dim", "coeffs")

    def __init__(self, descriptor: FieldDescriptor, dim: int, coeffs):
        if dim < 1:
            raise QuadFormError("dimension must be positive")
        field = Field(descriptor)
        clean = {}
        for key, value in dict(coeffs).items():
            i, j = key
            if not (0 <= i <= j < dim):
                raise QuadFormError(f"coefficient index {key} outside the "
                                    f"upper triangle of dimension {dim}")
            c = field(value)
            if not c.is_zero:
                clean[(i, j)] = c
        self.descriptor = descriptor
        self.field = field
        self.dim = dim
        self.coeffs = clean

    def coeff(self, i: int, j: int) -> FieldElement:
        if i > j:
            i, j = j, i
        return self.coeffs.get((i, j), self.field.zero)

    def evaluate(self, vector: Sequence) -> FieldElement:
        if len(vector) != self.dim:
            raise QuadFormError(f"vector length {len(vector)} != dim {self.dim}")
        vec = [self.field(x) for x in vector]
        total = self.field.zero
        for (i, j), c in self.coeffs.items():
            total = total + c * vec[i] * vec[j]
        return total

    def transform(self, matrix) -> "QuadraticForm":
        """The composed form x -> q(matrix @ x)."""
        n = self.dim
        if len(matrix) != n or any(len(row) != n for row in matrix):
            raise QuadFormError("change of basis has the wrong shape")
        out: dict = {}
        for (i, j), c in self.coeffs.items():
            for k in range(n):
                cik = matrix[i][k]
                if cik.is_zero:
                    continue
                for l in range(n):
                    cjl = matrix[j][l]
                    if cjl.is_zero:
                        continue
                    key = (k, l) if k <= l else (l, k)
                    term = c * cik * cjl
                    out[key] = out[key] + term if key in out else term
        return QuadraticForm(self.descriptor, n, out)

    def scale(self, c) -> "QuadraticForm":
        c = self.field(c)
        return QuadraticForm(self.descriptor, self.dim,
                             {k: v * c for k, v in self.coeffs.items()})

    def __eq__(self, other):
        if not isinstance(other, QuadraticForm):
            return NotImplemented
        return (self.descriptor == other.descriptor and self.dim == other.dim
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.descriptor, self.dim,
                     tuple(sorted(self.coeffs.items()))))

    def __repr__(self):
        terms = []
        for (i, j), c in sorted(self.coeffs.items()):
            mono = f"x{i}^2" if i == j else f"x{i}*x{j}"
            terms.append(f"({c!r})*{mono}")
        body = " + ".join(terms) if terms else "0"
        return f"QuadraticForm(dim={self.dim}, {body})"

    def to_json(self) -> dict:
        return {
            "field": descriptor_to_json(self.descriptor),
            "dim": str(self.dim),
            "coeffs": {f"{i},{j}": element_to_json(c)
                       for (i, j), c in sorted(self.coeffs.items())},
        }

    @classmethod
    def from_json(cls, obj: dict) -> "QuadraticForm":
        descriptor = descriptor_from_json(obj["field"])
        coeffs = {}
        for key, val in obj["coeffs"].items():
            i, j = (int(part) for part in key.split(","))
            coeffs[(i, j)] = element_from_json(val, descriptor)
        return cls(descriptor, int(obj["dim"]), coeffs)


def associated_bilinear(q: QuadraticForm):
    """Gram matrix of (v, w) -> q(v + w) - q(v) - q(w).

    Symmetric always; in characteristic 2 the diagonal vanishes, so the
    matrix is alternating.
    """
    n = q.dim
    two = q.field.from_int(2)
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            if i == j:
                row.append(two * q.coeff(i, i))
            else:
                row.append(q.coeff(i, j))
        rows.append(row)
    return fieldmatrix.mat_from_rows(rows)


def is_nondegenerate(q: QuadraticForm) -> bool:
    return not fieldmatrix.mat_det(associated_bilinear(q)).is_zero


def _bil(gram, x, y, field) -> FieldElement:
    total = field.zero
    for i, xi in enumerate(x):
        if xi.is_zero:
            continue
        for j, yj in enumerate(y):
            if yj.is_zero or gram[i][j].is_zero:
                continue
            total = total + xi * gram[i][j] * yj
    return total


def _columns_matrix(vectors, n):
    return fieldmatrix.mat_from_rows(
        [[vectors[col][row] for col in range(len(vectors))] for row in range(n)])


# ---------------------------------------------------------------------------
# diagonalization away from characteristic 2

@dataclass(frozen=True)
class Diagonalization:
    change_of_basis: tuple
    diagonal: tuple


def diagonalize(q: QuadraticForm) -> Diagonalization:
    """Change of basis C with q(Cx) = sum a_i x_i^2, char != 2 only."""
    field = q.field
    if field.characteristic == 2:
        raise CharTwo("diagonalization needs characteristic != 2")
    if not is_nondegenerate(q):
        raise DegenerateForm("form has singular Gram matrix")
    gram = associated_bilinear(q)
    n = q.dim
    basis = [[field.one if i == j else field.zero for i in range(n)]
             for j in range(n)]
    for t in range(n):
        if _bil(gram, basis[t], basis[t], field).is_zero:
            swap = next((s for s in range(t + 1, n)
                         if not _bil(gram, basis[s], basis[s], field).is_zero),
                        None)
            if swap is not None:
                basis[t], basis[swap] = basis[swap], basis[t]
            else:
                mate = next((s for s in range(t + 1, n)
                             if not _bil(gram, basis[t], basis[s],
                                         field).is_zero), None)
                if mate is None:
                    raise DegenerateForm("residual block pairs to zero")
                basis[t] = [a + b for a, b in zip(basis[t], basis[mate])]
        d = _bil(gram, basis[t], basis[t], field)
        for s in range(t + 1, n):
            c = _bil(gram, basis[t], basis[s], field)
            if c.is_zero:
                continue
            f = c / d
            basis[s] = [a - f * b for a, b in zip(basis[s], basis[t])]
    change = _columns_matrix(basis, n)
    diag = tuple(q.evaluate(vec) for vec in basis)
    check = q.transform(change)
    expected = QuadraticForm(q.descriptor, n,
                             {(i, i): diag[i] for i in range(n)})
    if check != expected:
        raise ConsistencyAlarm("diagonalization verification failed")
    return Diagonalization(change_of_basis=change, diagonal=diag)


# ---------------------------------------------------------------------------
# characteristic-2 normal form and its Arf parameter

def canonical_char2_form(descriptor: FieldDescriptor, dim: int,
                         a) -> QuadraticForm:
    """x1^2 + x1 x2 + a x2^2 + x3 x4 + ... in the given even dimension."""
    if dim % 2:
        raise DegenerateForm("characteristic-2 normal form needs even dimension")
    field = Field(descriptor)
    coeffs = {(0, 0): field.one, (0, 1): field.one, (1, 1): field(a)}
    for t in range(1, dim // 2):
        coeffs[(2 * t, 2 * t + 1)] = field.one
    return QuadraticForm(descriptor, dim, coeffs)


def _finite_char2(descriptor: FieldDescriptor) -> bool:
    return (descriptor.characteristic == 2
            and descriptor.kind in ("prime_field", "finite_field"))


def _sqrt_char2(x: FieldElement, descriptor: FieldDescriptor) -> FieldElement:
    # Frobenius is bijective on F_{2^m}; the square root is x^(2^(m-1))
    m = descriptor.m if descriptor.kind == "finite_field" else 1
    return x ** (2 ** (m - 1))


@dataclass(frozen=True)
class ArfNormalForm:
    arf: FieldElement
    change_of_basis: tuple
    canonical_form: QuadraticForm


def _block_value(gamma1, gamma2, c, field) -> FieldElement:
    c1, c2, c3, c4 = c
    return (c1 * c1 + c1 * c2 + gamma1 * c2 * c2
            + c3 * c3 + c3 * c4 + gamma2 * c4 * c4)


def _nullspace(rows, field, ncols):
    """Basis of the right kernel of the matrix given by rows."""
    m = [list(r) for r in rows]
    pivots = {}
    rank = 0
    for col in range(ncols):
        piv = next((r for r in range(rank, len(m))
                    if not m[r][col].is_zero), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = m[rank][col].inverse()
        m[rank] = [x * inv for x in m[rank]]
        for r in range(len(m)):
            if r != rank and not m[r][col].is_zero:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[rank])]
        pivots[col] = rank
        rank += 1
    basis = []
    for free in range(ncols):
        if free in pivots:
            continue
        vec = [field.zero] * ncols
        vec[free] = field.one
        for col, r in pivots.items():
            vec[col] = -m[r][free]
        basis.append(tuple(vec))
    return basis


def arf_normal_form(q: QuadraticForm) -> ArfNormalForm:
    """Carry q over F_{2^m} to the canonical even-dimensional shape.

    The change of basis C satisfies q(Cx) = x1^2 + x1 x2 + a x2^2
    + x3 x4 + ... exactly; a is returned reduced to the smallest
    representative of its coset modulo the image of c -> c^2 - c.
    """
    descriptor = q.descriptor
    if not _finite_char2(descriptor):
        raise WrongCharacteristic("normal form needs a finite field of "
                                  "characteristic 2")
    field = q.field
    n = q.dim
    gram = associated_bilinear(q)
    if n % 2 or fieldmatrix.mat_det(gram).is_zero:
        raise DegenerateForm("alternating Gram matrix is singular")

    # greedy symplectic reduction: pair off basis vectors with unit pairing
    remaining = [tuple(field.one if i == j else field.zero for i in range(n))
                 for j in range(n)]
    pairs = []
    while remaining:
        u = remaining.pop(0)
        idx = next((s for s, w in enumerate(remaining)
                    if not _bil(gram, u, w, field).is_zero), None)
        if idx is None:
            raise DegenerateForm("vector pairs to zero with the rest")
        w = remaining.pop(idx)
        inv = _bil(gram, u, w, field).inverse()
        w = tuple(x * inv for x in w)
        cleaned = []
        for v in remaining:
            bvw = _bil(gram, v, w, field)
            bvu = _bil(gram, v, u, field)
            cleaned.append(tuple(a + bvw * b + bvu * c
                                 for a, b, c in zip(v, u, w)))
        remaining = cleaned
        pairs.append([u, w])

    # per-pair normalization: hyperbolic (q = x y), or q = x^2 + x y + g y^2
    blocks = []
    for u, w in pairs:
        alpha = q.evaluate(u)
        beta = q.evaluate(w)
        if alpha.is_zero and not beta.is_zero:
            w = tuple(a + beta * b for a, b in zip(w, u))
            beta = field.zero
        elif not alpha.is_zero and beta.is_zero:
            u, w = w, u
            alpha, beta = beta, alpha
            w = tuple(a + beta * b for a, b in zip(w, u))
            alpha = q.evaluate(u)
            beta = field.zero
        if alpha.is_zero:
            blocks.append((u, w, None))
            continue
        c = _sqrt_char2(alpha.inverse(), descriptor)
        u = tuple(c * x for x in u)
        w = tuple(x / c for x in w)
        blocks.append((u, w, q.evaluate(w)))

    # merge pairs of non-split blocks through an explicit isotropic vector
    while True:
        hot = [t for t, blk in enumerate(blocks) if blk[2] is not None]
        if len(hot) < 2:
            break
        t1, t2 = hot[0], hot[1]
        u1, w1, g1 = blocks[t1]
        u2, w2, g2 = blocks[t2]
        size = field.size()
        if size ** 4 > 65536:
            raise FieldTooLarge("isotropic search space exceeds 2^16")
        span = (u1, w1, u2, w2)
        iso = next((c for c in itertools.product(field.elements(), repeat=4)
                    if any(not x.is_zero for x in c)
                    and _block_value(g1, g2, c, field).is_zero), None)
        if iso is None:
            raise ConsistencyAlarm("no isotropic vector in a rank-4 block")
        g4 = [[field.zero] * 4 for _ in range(4)]
        g4[0][1] = g4[1][0] = g4[2][3] = g4[3][2] = field.one
        pair_row = [sum((iso[i] * g4[i][j] for i in range(4)), field.zero)
                    for j in range(4)]
        col = next(j for j in range(4) if not pair_row[j].is_zero)
        w0 = [field.zero] * 4
        w0[col] = pair_row[col].inverse()
        qv = _block_value(g1, g2, tuple(w0), field)
        mate = tuple(a + qv * b for a, b in zip(w0, iso))
        comp_rows = [pair_row,
                     [sum((mate[i] * g4[i][j] for i in range(4)), field.zero)
                      for j in range(4)]]
        comp = _nullspace(comp_rows, field, 4)
        if len(comp) != 2:
            raise ConsistencyAlarm("orthogonal complement has wrong rank")
        z1, z2 = comp
        b12 = sum((z1[i] * g4[i][j] * z2[j]
                   for i in range(4) for j in range(4)), field.zero)
        if b12.is_zero:
            raise ConsistencyAlarm("complement block pairs to zero")
        z2 = tuple(x * b12.inverse() for x in z2)

        def to_ambient(coeff):
            vec = [field.zero] * n
            for c, base_vec in zip(coeff, span):
                if c.is_zero:
                    continue
                vec = [a + c * b for a, b in zip(vec, base_vec)]
            return tuple(vec)

        hyp_u, hyp_w = to_ambient(iso), to_ambient(mate)
        zz1, zz2 = to_ambient(z1), to_ambient(z2)
        alpha = q.evaluate(zz1)
        beta = q.evaluate(zz2)
        if alpha.is_zero and not beta.is_zero:
            zz2 = tuple(a + beta * b for a, b in zip(zz2, zz1))
        elif not alpha.is_zero and beta.is_zero:
            zz1, zz2 = zz2, zz1
            alpha = q.evaluate(zz1)
            zz2 = tuple(a + alpha * b for a, b in zip(zz2, zz1))
            alpha = field.zero
        alpha = q.evaluate(zz1)
        if alpha.is_zero:
            new_block = (zz1, zz2, None)
        else:
            c = _sqrt_char2(alpha.inverse(), descriptor)
            zz1 = tuple(c * x for x in zz1)
            zz2 = tuple(x / c for x in zz2)
            new_block = (zz1, zz2, q.evaluate(zz2))
        blocks[t1] = (hyp_u, hyp_w, None)
        blocks[t2] = new_block

    # reduce the surviving parameter to its smallest coset representative
    hot = [t for t, blk in enumerate(blocks) if blk[2] is not None]
    if hot:
        t = hot[0]
        u, w, gamma = blocks[t]
        size = field.size()
        if size <= 256:
            best = None
            for c in field.elements():
                shifted = gamma + c * c + c
                key = shifted.payload
                if best is None or key < best[0]:
                    best = (key, c, shifted)
            _, c, gamma = best
            w = tuple(a + c * b for a, b in zip(w, u))
        blocks[t] = (u, w, gamma)
        blocks.insert(0, blocks.pop(t))
        arf = gamma
    else:
        u, w, _ = blocks[0]
        blocks[0] = (tuple(a + b for a, b in zip(u, w)), w, None)
        arf = field.zero

    final = []
    for u, w, _ in blocks:
        final.append(u)
        final.append(w)
    change = _columns_matrix(final, n)
    canonical = canonical_char2_form(descriptor, n, arf)
    if q.transform(change) != canonical:
        raise ConsistencyAlarm("normal-form verification failed")
    return ArfNormalForm(arf=arf, change_of_basis=change,
                         canonical_form=canonical)


def arf_invariant_class(a, a_prime, field: Field, max_size: int = 256) -> bool:
    """Whether two Arf parameters agree modulo the image of c -> c^2 - c."""
    if not _finite_char2(field.descriptor):
        raise WrongCharacteristic("Arf classes live over finite fields of "
                                  "characteristic 2")
    image = artin_schreier_image(field, max_size=max_size)
    return (field(a) - field(a_prime)) in image


def represents_zero_exhaustive(q: QuadraticForm,
                               cap: int = 65536) -> Optional[tuple]:
    """A nonzero vector with q = 0, or None; scans the whole space."""
    size = q.field.size()
    if size is None:
        raise FieldTooLarge("exhaustive search needs a finite field")
    if size ** q.dim > cap:
        raise FieldTooLarge(f"{size}^{q.dim} vectors exceed the cap {cap}")
    for vec in itertools.product(q.field.elements(), repeat=q.dim):
        if all(x.is_zero for x in vec):
            continue
        if q.evaluate(vec).is_zero:
            return vec
    return None


def enumerate_nondegenerate_forms(descriptor: FieldDescriptor, dim: int,
                                  cap: int = 65536) -> Iterator[QuadraticForm]:
    """All nondegenerate forms of the given dimension, fixed order."""
    field = Field(descriptor)
    size = field.size()
    if size is None:
        raise FieldTooLarge("enumeration needs a finite field")
    slots = [(i, j) for i in range(dim) for j in range(i, dim)]
    if size ** len(slots) > cap:
        raise FieldTooLarge("form space exceeds the cap")
    for values in itertools.product(field.elements(), repeat=len(slots)):
        q = QuadraticForm(descriptor, dim, dict(zip(slots, values)))
        if is_nondegenerate(q):
            yield q


def invertible_matrices(descriptor: FieldDescriptor, dim: int,
                        cap: int = 65536) -> Iterator[tuple]:
    """All invertible dim x dim matrices over a finite field, fixed order."""
    field = Field(descriptor)
    size = field.size()
    if size is None or size ** (dim * dim) > cap:
        raise FieldTooLarge("matrix space exceeds the cap")
    for values in itertools.product(field.elements(), repeat=dim * dim):
        rows = [values[r * dim:(r + 1) * dim] for r in range(dim)]
        m = fieldmatrix.mat_from_rows(rows)
        if not fieldmatrix.mat_det(m).is_zero:
            yield m


def forms_equivalent_bruteforce(q1: QuadraticForm, q2: QuadraticForm,
                                cap: int = 65536) -> bool:
    """Equivalence test by scanning every invertible change of basis."""
    if q1.descriptor != q2.descriptor or q1.dim != q2.dim:
        return False
    for m in invertible_matrices(q1.descriptor, q1.dim, cap):
        if q1.transform(m) == q2:
            return True
    return False


# ---------------------------------------------------------------------------
# isotropic vectors from isometries of order p = char

def extract_isotropic_from_order_p(g, q: QuadraticForm) -> tuple:
    """An isotropic vector fixed by an isometry of order p = char > 2.

    g - 1 is nilpotent; the top of any maximal Jordan chain is a fixed
    vector v1 that some v2 maps onto v1 + v2, which forces q(v1) = 0.
    """
    p = q.field.characteristic
    if p <= 2:
        raise WrongCharacteristic("needs odd positive characteristic")
    n = q.dim
    if len(g) != n or any(len(row) != n for row in g):
        raise NotIsometry("matrix shape does not match the form")
    if q.transform(g) != q:
        raise NotIsometry("the map does not preserve the form")
    ident = fieldmatrix.identity(q.field, n)
    if fieldmatrix.mat_eq(g, ident):
        raise NotOrderP("the identity has order 1")
    if not fieldmatrix.mat_eq(fieldmatrix.mat_pow(g, p), ident):
        raise NotOrderP(f"the map does not have order {p}")
    nil = fieldmatrix.mat_sub(g, ident)
    power = nil
    s = 1
    while not all(x.is_zero for row in power for x in row):
        power = fieldmatrix.mat_mul(power, nil)
        s += 1
    # power == nil^s == 0; take the last nonzero power
    top = nil
    for _ in range(s - 2):
        top = fieldmatrix.mat_mul(top, nil)
    col = next(j for j in range(n)
               if any(not top[i][j].is_zero for i in range(n)))
    v1 = tuple(top[i][col] for i in range(n))
    if not q.evaluate(v1).is_zero:
        raise ConsistencyAlarm("chain top is not isotropic")
    return v1


# ---------------------------------------------------------------------------
# finite-order checks for projective isometries

@dataclass(frozen=True)
class InvolutionReport:
    scaling: FieldElement
    projective_order: int
    lift_order: Optional[int]
    squares_to_identity: bool
    diagonalizable_over_base: Optional[bool]


def _similitude_factor(g, q: QuadraticForm) -> FieldElement:
    composed = q.transform(g)
    key = min(q.coeffs)
    base = q.coeffs[key]
    top = composed.coeffs.get(key)
    if top is None:
        raise NotIsometry("the map does not preserve the form up to scalar")
    lam = top / base
    if composed != q.scale(lam):
        raise NotIsometry("the map does not preserve the form up to scalar")
    return lam


def involution_check(g, q: QuadraticForm,
                     order_bound: int = 8) -> InvolutionReport:
    """Verify the order restrictions a pointless quadric forces.

    When the map is verifiably diagonalizable over the base field, a
    form-preserving map must square to the identity and a projective
    isometry must have order 1, 2, or 4; violations raise OrderExceedsBound
    since they refute the asserted anisotropy. Without enough roots of
    unity in the field, diagonalizability stays undecided and the report
    carries the observed orders without a verdict.
    """
    field = q.field
    if field.characteristic == 2:
        raise WrongCharacteristic("order analysis is for characteristic != 2")
    lam = _similitude_factor(g, q)
    n = q.dim
    ident = fieldmatrix.identity(field, n)

    proj_order = None
    power = g
    for k in range(1, order_bound + 1):
        if fieldmatrix.scalar_of(power) is not None:
            proj_order = k
            break
        power = fieldmatrix.mat_mul(power, g)
    if proj_order is None:
        raise OrderExceedsBound(f"no power up to {order_bound} is scalar")

    lift_order = None
    power = g
    for k in range(1, order_bound + 1):
        if fieldmatrix.mat_eq(power, ident):
            lift_order = k
            break
        power = fieldmatrix.mat_mul(power, g)
    squares = fieldmatrix.mat_eq(fieldmatrix.mat_pow(g, 2), ident)

    diagonalizable: Optional[bool] = None
    if lift_order is not None:
        p = field.characteristic
        if p and lift_order % p == 0:
            raise NotDiagonalizable(f"order divisible by the characteristic {p}")
        candidates = []
        for e in range(1, lift_order + 1):
            if lift_order % e:
                continue
            try:
                zeta = field.zeta(e)
            except AnisoError:
                continue
            mu = field.one
            for _ in range(e):
                mu = mu * zeta
                if mu not in candidates:
                    candidates.append(mu)
        acc = ident
        for mu in candidates:
            acc = fieldmatrix.mat_mul(
                acc, fieldmatrix.mat_sub(g, fieldmatrix.mat_scale(ident, mu)))
        if all(x.is_zero for row in acc for x in row):
            diagonalizable = True
    if diagonalizable:
        if lam.is_one and not squares:
            raise OrderExceedsBound("a diagonalizable form-preserving map "
                                    "fails g^2 = 1, contradicting the "
                                    "asserted anisotropy")
        if proj_order not in (1, 2, 4):
            raise OrderExceedsBound(f"projective order {proj_order} "
                                    "contradicts the asserted anisotropy")
    return InvolutionReport(scaling=lam, projective_order=proj_order,
                            lift_order=lift_order,
                            squares_to_identity=squares,
                            diagonalizable_over_base=diagonalizable)


# ---------------------------------------------------------------------------
# the 2^k-dimensional multiplier form and its projective isometries

def _subset_coefficient(avars, mask: int, field: Field) -> FieldElement:
    c = field.one
    for i, a in enumerate(avars):
        if mask & (1 << i):
            c = c * a
    return c


class PfisterData:
    """Diagonal form sum a_I x_I^2 on coordinates indexed by subset bitmask.

    Coordinate j corresponds to the subset with characteristic vector j in
    binary, so the order is the empty set, {1}, {2}, {1,2}, {3}, and so on.
    """

    def __init__(self, k: int):
        if not 1 <= k <= 5:
            raise KTooLarge("supported range is 1 <= k <= 5")
        self.k = k
        self.n = 2 ** k
        self.descriptor = function_field(
            rationals(), tuple(f"a{i}" for i in range(1, k + 1)))
        self.field = Field(self.descriptor)
        avars = self.field.vars()
        coeffs = {(j, j): _subset_coefficient(avars, j, self.field)
                  for j in range(self.n)}
        self.form = QuadraticForm(self.descriptor, self.n, coeffs)
        self.top_coefficient = _subset_coefficient(avars, self.n - 1,
                                                   self.field)

    @property
    def sigma(self):
        """Negates the two singleton coordinates x_{1} and x_{2}."""
        if self.k < 2:
            raise KTooLarge("the sign map needs two singleton coordinates")
        field = self.field
        rows = [[field.zero] * self.n for _ in range(self.n)]
        for j in range(self.n):
            rows[j][j] = -field.one if j in (1, 2) else field.one
        return fieldmatrix.mat_from_rows(rows)

    @property
    def tau(self):
        """Sends x_I to a_(complement I) x_(complement I)."""
        field = self.field
        avars = field.vars()
        full = self.n - 1
        rows = [[field.zero] * self.n for _ in range(self.n)]
        for j in range(self.n):
            rows[j][full ^ j] = _subset_coefficient(avars, full ^ j, field)
        return fieldmatrix.mat_from_rows(rows)

    @property
    def sigma_scaling(self) -> FieldElement:
        return self.field.one

    @property
    def tau_scaling(self) -> FieldElement:
        return self.top_coefficient


def pfister_build(k: int) -> PfisterData:
    """The multiplier form with its two projective isometries, verified."""
    data = PfisterData(k)
    if k >= 2:
        if data.form.transform(data.sigma) != data.form:
            raise ConsistencyAlarm("sign map fails to preserve the form")
        if data.form.transform(data.tau) != data.form.scale(data.tau_scaling):
            raise ConsistencyAlarm("complement map has the wrong multiplier")
    return data


@dataclass(frozen=True)
class PfisterGroup:
    k: int
    elements: tuple
    table: tuple
    order: int
    sigma_index: int
    tau_index: int
    iota_index: int
    nonabelian: bool
    projective_orders: tuple
    order_bound: int

    @property
    def order_divides_bound(self) -> bool:
        return self.order_bound % self.order == 0


def pfister_group_closure(k: int, cap: int = 4096) -> PfisterGroup:
    """Projective closure of the two isometries, with multiplication table.

    Elements are matrices normalized so the first nonzero entry is 1;
    the table indexes products, and element orders are read off the table.
    """
    if not 2 <= k <= 5:
        raise KTooLarge("closure needs 2 <= k <= 5")
    data = pfister_build(k)
    ident = fieldmatrix.identity(data.field, data.n)
    gens = [fieldmatrix.projective_normalize(data.sigma),
            fieldmatrix.projective_normalize(data.tau)]
    elements = [ident]
    index = {ident: 0}
    queue = [ident]
    while queue:
        current = queue.pop(0)
        for gen in gens:
            nxt = fieldmatrix.projective_normalize(
                fieldmatrix.mat_mul(current, gen))
            if nxt not in index:
                if len(elements) >= cap:
                    raise QuadFormError(f"closure exceeded the cap {cap}")
                index[nxt] = len(elements)
                elements.append(nxt)
                queue.append(nxt)
    size = len(elements)
    table = tuple(
        tuple(index[fieldmatrix.projective_normalize(
            fieldmatrix.mat_mul(a, b))] for b in elements)
        for a in elements)
    sigma_index = index[gens[0]]
    tau_index = index[gens[1]]
    iota_index = 0
    for step in (sigma_index, tau_index, sigma_index, tau_index):
        iota_index = table[iota_index][step]
    orders = []
    for i in range(size):
        j = i
        order = 1
        while j != 0:
            j = table[j][i]
            order += 1
        orders.append(order)
    return PfisterGroup(
        k=k, elements=tuple(elements), table=table, order=size,
        sigma_index=sigma_index, tau_index=tau_index, iota_index=iota_index,
        nonabelian=table[sigma_index][tau_index] != table[tau_index][sigma_index],
        projective_orders=tuple(orders),
        order_bound=8 ** (2 ** k - 1))


# ---------------------------------------------------------------------------
# refuting alleged points on the multiplier quadric

@dataclass(frozen=True)
class RefutationReport:
    k: int
    value: FieldElement
    candidate: tuple


def _polynomial_payload(elt: FieldElement) -> dict:
    """Numerator dict of a polynomial element; requires denominator 1."""
    num, den = elt.payload
    one = Field(elt.descriptor).one
    if den != one.payload[1]:
        raise QuadFormError("candidate entries must be polynomials")
    return dict(num)


def descent_step(k: int, candidate, data: Optional[PfisterData] = None):
    """One level of the degree-descent on an alleged zero candidate.

    Splits off the top power of the last variable and returns the index of
    the surviving half (0 for subsets without the last element, 1 with it)
    together with the leading-coefficient tuple over one fewer variable.
    """
    if data is None:
        data = PfisterData(k)
    field = data.field
    entries = [field(x) for x in candidate]
    dicts = [_polynomial_payload(x) for x in entries]
    top = max((max((exp[k - 1] for exp in d), default=0) for d in dicts),
              default=0)
    small = PfisterData(k - 1) if k >= 2 else None
    small_field = small.field if small else Field(rationals())

    def leading(mask: int) -> FieldElement:
        pieces = {exp[:k - 1]: coeff for exp, coeff in dicts[mask].items()
                  if exp[k - 1] == top}
        total = small_field.zero
        for exp, coeff in pieces.items():
            term = FieldElement(field.descriptor.base, coeff)
            if small is None:
                total = total + small_field(term)
            else:
                mono = small_field.lift(term)
                for i, e in enumerate(exp):
                    mono = mono * small_field.vars()[i] ** e
                total = total + mono
        return total

    half = 2 ** (k - 1)
    without = tuple(leading(j) for j in range(half))
    with_last = tuple(leading(j + half) for j in range(half))
    if any(not x.is_zero for x in without):
        return 0, without
    return 1, with_last


def pfister_refute_point(k: int, candidate,
                         data: Optional[PfisterData] = None) -> RefutationReport:
    """Evaluate the multiplier form on a candidate point and refute it.

    A nonzero value refutes the candidate. A zero value is impossible for
    the pointless form, so it trips a loud consistency alarm carrying the
    degree-descent chain down to the one-variable parity contradiction.
    """
    if data is None:
        data = PfisterData(k)
    field = data.field
    entries = tuple(field(x) for x in candidate)
    if len(entries) != data.n:
        raise QuadFormError(f"candidate needs {data.n} entries")
    if all(x.is_zero for x in entries):
        raise AllZeroCandidate("projective candidates cannot vanish entirely")
    value = data.form.evaluate(entries)
    if not value.is_zero:
        return RefutationReport(k=k, value=value, candidate=entries)
    trace = []
    level, current = k, entries
    while level > 1:
        which, current = descent_step(level, current)
        trace.append(f"level {level}: kept half {which}")
        level -= 1
    trace.append("level 1: x^2 + a1 y^2 = 0 forces an even degree to "
                 "match an odd one")
    raise ConsistencyAlarm(
        "candidate evaluates to zero on the pointless form; descent: "
        + "; ".join(trace))


def random_candidate(k: int, rng, degree: int = 3, terms: int = 2) -> tuple:
    """A seeded not-all-zero polynomial candidate tuple for refutation runs."""
    data = PfisterData(k)
    field = data.field
    avars = field.vars()
    while True:
        out = []
        for _ in range(data.n):
            total = field.zero
            for _ in range(rng.randint(1, terms)):
                coeff = field.from_int(rng.randint(-4, 4))
                mono = coeff
                for a in avars:
                    mono = mono * a ** rng.randint(0, degree)
                total = total + mono
            out.append(total)
        if any(not x.is_zero for x in out):
            return tuple(out)
