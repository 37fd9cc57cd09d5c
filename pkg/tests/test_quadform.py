import random
from fractions import Fraction

import pytest

from aniso import fieldmatrix
from aniso.quadform import (AllZeroCandidate, CharTwo, DegenerateForm,
                            KTooLarge, NotIsometry, NotOrderP,
                            OrderExceedsBound, PfisterData, QuadFormError,
                            QuadraticForm, WrongCharacteristic,
                            arf_invariant_class, arf_normal_form,
                            associated_bilinear, canonical_char2_form,
                            descent_step, diagonalize,
                            enumerate_nondegenerate_forms,
                            extract_isotropic_from_order_p,
                            forms_equivalent_bruteforce, involution_check,
                            is_nondegenerate, pfister_build,
                            pfister_group_closure, pfister_refute_point,
                            random_candidate, represents_zero_exhaustive)
from aniso.scalars import (Field, FieldTooLarge, cyclotomic, finite_field,
                           prime_field, rationals)


Q = rationals()
F2 = prime_field(2)
F3 = prime_field(3)
F4 = finite_field(2, 2)
F5 = prime_field(5)


def form(descriptor, dim, coeffs_ints):
    field = Field(descriptor)
    return QuadraticForm(descriptor, dim,
                         {k: field.from_int(v) for k, v in coeffs_ints.items()})


def test_form_canonicalization_and_eval():
    q = form(Q, 2, {(0, 0): 1, (0, 1): 0, (1, 1): -1})
    assert (0, 1) not in q.coeffs  # zeros dropped
    assert q == form(Q, 2, {(0, 0): 1, (1, 1): -1})
    assert hash(q) == hash(form(Q, 2, {(0, 0): 1, (1, 1): -1}))
    field = Field(Q)
    assert q.evaluate((field(3), field(2))) == field(5)
    with pytest.raises(QuadFormError):
        QuadraticForm(Q, 2, {(1, 0): Field(Q).one})  # lower index pair


def test_transform_is_substitution():
    q = form(Q, 2, {(0, 0): 1, (1, 1): 1})
    field = Field(Q)
    c = fieldmatrix.mat_from_rows([[field(1), field(2)],
                                   [field(0), field(1)]])
    moved = q.transform(c)
    # substitute x -> x + 2y: x^2 + 4xy + 5y^2
    assert moved == form(Q, 2, {(0, 0): 1, (0, 1): 4, (1, 1): 5})


def test_bilinear_gram_oracles():
    q1 = form(Q, 1, {(0, 0): 1})
    assert associated_bilinear(q1) == ((Field(Q).from_int(2),),)

    hyp = form(F2, 2, {(0, 1): 1})
    gram = associated_bilinear(hyp)
    f = Field(F2)
    assert gram == ((f.zero, f.one), (f.one, f.zero))  # alternating in char 2

    diag = form(Q, 2, {(0, 0): 3, (1, 1): -5})
    g = associated_bilinear(diag)
    field = Field(Q)
    assert g[0][0] == field(6) and g[1][1] == field(-10)
    assert g[0][1].is_zero


def test_nondegeneracy():
    assert is_nondegenerate(form(Q, 2, {(0, 0): 1, (1, 1): 1}))
    assert not is_nondegenerate(form(Q, 2, {(0, 0): 1}))
    # char 2: odd-dimensional diagonal forms have singular alternating gram
    assert not is_nondegenerate(form(F2, 1, {(0, 0): 1}))


def test_diagonalize_oracle_and_random():
    res = diagonalize(form(Q, 2, {(0, 1): 1}))
    field = Field(Q)
    assert res.diagonal == (field.one, field(Fraction(-1, 4)))

    rng = random.Random(31)
    for _ in range(25):
        dim = rng.randrange(1, 5)
        while True:
            coeffs = {(i, j): rng.randrange(-4, 5)
                      for i in range(dim) for j in range(i, dim)}
            q = form(Q, dim, coeffs)
            if is_nondegenerate(q):
                break
        res = diagonalize(q)
        target = QuadraticForm(Q, dim, {(i, i): a
                                        for i, a in enumerate(res.diagonal)})
        assert q.transform(res.change_of_basis) == target
        assert all(not a.is_zero for a in res.diagonal)


def test_diagonalize_rejects_char2_and_degenerate():
    with pytest.raises(CharTwo):
        diagonalize(form(F2, 2, {(0, 1): 1}))
    with pytest.raises(DegenerateForm):
        diagonalize(form(Q, 2, {(0, 0): 1}))


def test_arf_normal_form_oracles():
    hyp = form(F2, 2, {(0, 1): 1})
    assert arf_normal_form(hyp).arf.is_zero

    aniso = form(F2, 2, {(0, 0): 1, (0, 1): 1, (1, 1): 1})
    assert arf_normal_form(aniso).arf == Field(F2).one

    res = arf_normal_form(form(F2, 4, {(0, 1): 1, (2, 3): 1}))
    assert res.arf.is_zero
    assert res.canonical_form == canonical_char2_form(F2, 4, res.arf)


def test_arf_normal_form_verified_random():
    rng = random.Random(5)
    field = Field(F4)
    elems = list(field.elements())
    for _ in range(15):
        while True:
            coeffs = {(i, j): rng.choice(elems)
                      for i in range(4) for j in range(i, 4)}
            q = QuadraticForm(F4, 4, coeffs)
            if is_nondegenerate(q):
                break
        res = arf_normal_form(q)
        assert q.transform(res.change_of_basis) == res.canonical_form
        assert res.canonical_form == canonical_char2_form(F4, 4, res.arf)


def test_arf_guards():
    with pytest.raises(WrongCharacteristic):
        arf_normal_form(form(F3, 2, {(0, 1): 1}))
    with pytest.raises(DegenerateForm):
        arf_normal_form(form(F2, 3, {(0, 1): 1, (2, 2): 1}))  # odd dim
    with pytest.raises(WrongCharacteristic):
        arf_invariant_class(0, 1, Field(F3))


def test_arf_classes_f2():
    field = Field(F2)
    assert arf_invariant_class(field.zero, field.zero, field)
    assert not arf_invariant_class(field.zero, field.one, field)


def test_exhaustive_dim2_classification_f2():
    forms = list(enumerate_nondegenerate_forms(F2, 2))
    field = Field(F2)
    split = {True: [], False: []}
    for q in forms:
        invariant = arf_normal_form(q).arf
        split[invariant.is_zero].append(q)
    assert len(split[True]) > 0 and len(split[False]) > 0
    # brute-force equivalence agrees with the invariant on every pair
    for q1 in forms:
        for q2 in forms:
            same_class = arf_invariant_class(arf_normal_form(q1).arf,
                                             arf_normal_form(q2).arf, field)
            assert forms_equivalent_bruteforce(q1, q2) == same_class


def test_represents_zero():
    hyp = form(F2, 2, {(0, 1): 1})
    vec = represents_zero_exhaustive(hyp)
    assert vec is not None and hyp.evaluate(vec).is_zero

    aniso = form(F2, 2, {(0, 0): 1, (0, 1): 1, (1, 1): 1})
    assert represents_zero_exhaustive(aniso) is None

    with pytest.raises(FieldTooLarge):
        represents_zero_exhaustive(form(Q, 2, {(0, 1): 1}))


def test_extract_isotropic_char3():
    field = Field(F3)
    q = form(F3, 3, {(0, 0): 1, (1, 1): 1, (2, 2): 1})
    cyc = fieldmatrix.mat_from_rows([
        [field.zero, field.zero, field.one],
        [field.one, field.zero, field.zero],
        [field.zero, field.one, field.zero]])
    vec = extract_isotropic_from_order_p(cyc, q)
    assert q.evaluate(vec).is_zero
    assert any(not x.is_zero for x in vec)


def test_extract_isotropic_char5():
    field = Field(F5)
    n = 5
    q = form(F5, n, {(i, i): 1 for i in range(n)})
    rows = [[field.one if j == (i + 1) % n else field.zero for j in range(n)]
            for i in range(n)]
    cyc = fieldmatrix.mat_from_rows(rows)
    vec = extract_isotropic_from_order_p(cyc, q)
    assert q.evaluate(vec).is_zero


def test_extract_isotropic_guards():
    field = Field(F3)
    q = form(F3, 2, {(0, 0): 1, (1, 1): 1})
    ident = fieldmatrix.identity(field, 2)
    with pytest.raises(NotOrderP):
        extract_isotropic_from_order_p(ident, q)
    shear = fieldmatrix.mat_from_rows([[field.one, field.one],
                                       [field.zero, field.one]])
    with pytest.raises(NotIsometry):
        extract_isotropic_from_order_p(shear, q)
    q0 = form(Q, 2, {(0, 0): 1, (1, 1): 1})
    with pytest.raises(WrongCharacteristic):
        extract_isotropic_from_order_p(fieldmatrix.identity(Field(Q), 2), q0)


def test_involution_check_reflection():
    field = Field(Q)
    q = form(Q, 2, {(0, 0): 1, (1, 1): 1})
    refl = fieldmatrix.mat_from_rows([[field.one, field.zero],
                                      [field.zero, field(-1)]])
    report = involution_check(refl, q)
    assert report.scaling == field.one
    assert report.squares_to_identity
    assert report.projective_order == 2
    assert report.diagonalizable_over_base


def test_involution_check_rational_rotation_is_undecided():
    # 90-degree rotation preserves x^2 + y^2 but is not diagonalizable
    # over Q; lift order 4 is allowed and nothing is raised
    field = Field(Q)
    q = form(Q, 2, {(0, 0): 1, (1, 1): 1})
    rot = fieldmatrix.mat_from_rows([[field.zero, field(-1)],
                                     [field.one, field.zero]])
    report = involution_check(rot, q)
    assert report.projective_order == 2
    assert report.lift_order == 4
    assert report.diagonalizable_over_base is None


def test_involution_check_raises_over_cyclotomic():
    # over Q(zeta_4) the same rotation diagonalizes, so its survival
    # contradicts the asserted anisotropy (indeed x^2 + y^2 is isotropic)
    c4 = cyclotomic(4)
    field = Field(c4)
    q = form(c4, 2, {(0, 0): 1, (1, 1): 1})
    rot = fieldmatrix.mat_from_rows([[field.zero, field(-1)],
                                     [field.one, field.zero]])
    with pytest.raises(OrderExceedsBound):
        involution_check(rot, q)


def test_involution_check_rejects_nonsimilitude():
    field = Field(Q)
    q = form(Q, 2, {(0, 0): 1, (1, 1): 1})
    shear = fieldmatrix.mat_from_rows([[field.one, field.one],
                                       [field.zero, field.one]])
    with pytest.raises(NotIsometry):
        involution_check(shear, q)


def test_involution_check_similitude_scaling():
    field = Field(Q)
    q = form(Q, 2, {(0, 0): 1, (1, 1): 1})
    double = fieldmatrix.mat_from_rows([[field(2), field.zero],
                                        [field.zero, field(2)]])
    report = involution_check(double, q)
    assert report.scaling == field(4)
    assert report.projective_order == 1


def test_pfister_build_k2_and_k3():
    for k in (2, 3):
        data = pfister_build(k)
        assert data.n == 2 ** k
        assert data.form.transform(data.tau) == data.form.scale(
            data.top_coefficient)
        assert data.form.transform(data.sigma) == data.form
    # k = 1 still builds the form (descent needs it) but has no sign map
    with pytest.raises(KTooLarge):
        _ = pfister_build(1).sigma
    with pytest.raises(KTooLarge):
        pfister_build(6)


def test_pfister_closure_k3():
    group = pfister_group_closure(3)
    assert group.order == 8
    assert group.nonabelian
    assert group.order_divides_bound
    assert set(group.projective_orders) == {1, 2, 4}
    # iota = (sigma tau)^2 is a nontrivial central involution
    i = group.iota_index
    assert i != 0 and group.table[i][i] == 0
    for j in range(group.order):
        assert group.table[i][j] == group.table[j][i]


def test_pfister_closure_k2_is_abelian():
    group = pfister_group_closure(2)
    assert group.order == 4
    assert not group.nonabelian


def test_pfister_refutations():
    data = pfister_build(3)
    rng = random.Random(0)
    for _ in range(20):
        candidate = random_candidate(3, rng)
        report = pfister_refute_point(3, candidate, data=data)
        assert not report.value.is_zero

    with pytest.raises(AllZeroCandidate):
        pfister_refute_point(3, (0,) * 8, data=data)


def test_pfister_refutation_k1_parity():
    data = pfister_build(2)
    field = data.field
    a2 = field.vars()[1]
    report = pfister_refute_point(2, (a2, field.zero, field.one, field.zero),
                                  data=data)
    assert report.value == a2 * a2 + a2


def test_descent_step_keeps_leading_half():
    data = pfister_build(2)
    field = data.field
    a2 = field.vars()[1]
    # only the last-variable half carries the top power of a2
    which, leading = descent_step(
        2, (field.one, field.zero, a2, field.zero), data=data)
    assert which in (0, 1)
    assert any(not x.is_zero for x in leading)


def test_random_candidate_deterministic():
    a = random_candidate(3, random.Random(4))
    b = random_candidate(3, random.Random(4))
    assert a == b
    assert any(not Field(pfister_build(3).descriptor)(x).is_zero for x in a)


def test_form_json_roundtrip():
    q = form(Q, 3, {(0, 0): 2, (0, 2): -1, (1, 1): 7})
    assert QuadraticForm.from_json(q.to_json()) == q
    data = pfister_build(2)
    assert QuadraticForm.from_json(data.form.to_json()) == data.form
