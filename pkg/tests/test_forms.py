import itertools
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from simfactor.arith import Place, squarefree_class
from simfactor.errors import DegenerateForm, NotRepresented, ParseError
from simfactor.forms import (
    HYPERBOLIC_PLANE,
    QuadraticForm,
    combine,
    find_embedding,
    find_isotropic_vector,
    find_representation,
    format_form,
    hyperbolic,
    invariants,
    is_hyperbolic,
    is_isometric,
    is_isotropic,
    is_similarity_factor,
    is_subform,
    isotropic_over_sqrt,
    make_form,
    orth_sum,
    parse_form,
    product_factorization,
    represents,
    scale,
    tensor,
    witt_decompose,
    witt_index,
)
from simfactor.oracle import brute_search, form_corpus

Q = lambda *c: QuadraticForm(tuple(c))  # noqa: E731

coeff = st.builds(Fraction, st.integers(-30, 30).filter(bool), st.integers(1, 6))
forms = st.lists(coeff, min_size=0, max_size=6).map(lambda c: QuadraticForm(tuple(c)))
small_forms = st.lists(st.integers(-12, 12).filter(bool), min_size=1, max_size=4).map(lambda c: QuadraticForm(tuple(c)))


# -- construction ----------------------------------------------------------


def test_make_form_examples():
    assert make_form([1, -1]) == HYPERBOLIC_PLANE
    assert make_form([]).dim == 0
    with pytest.raises(DegenerateForm):
        make_form([1, 0, 2])


def test_combine_examples():
    assert combine("tensor", Q(1, -2), Q(1, 1)) == Q(1, 1, -2, -2)
    assert combine("orth_sum", Q(1), Q(-1)) == Q(1, -1)
    assert combine("scale", Q(3, 1, -6, -2), c=-1) == Q(-3, -1, 6, 2)
    assert hyperbolic(2) == Q(1, -1, 1, -1)


@given(forms, forms)
def test_orth_sum_and_tensor_dimensions(phi, psi):
    assert orth_sum(phi, psi).dim == phi.dim + psi.dim
    assert tensor(phi, psi).dim == phi.dim * psi.dim


# -- invariants --------------------------------------------------------------


def test_invariants_examples():
    inv = invariants(Q(1, 1))
    assert (inv.dim, inv.det.value, inv.signature) == (2, 1, (2, 0))
    assert all(h == 1 for h in inv.hasse.values())
    inv = invariants(Q(1, -1))
    assert inv.det.value == -1 and inv.signature == (1, 1) and inv.disc.value == 1
    inv = invariants(Q(1, 3, -2, -6))
    assert inv.det.value == 1 and inv.signature == (2, 2) and inv.hasse_at(Place(3)) == -1


@given(forms)
def test_isometric_to_permuted_and_square_scaled_copy(phi):
    rng = random.Random(phi.dim)
    coeffs = [c * rng.randint(1, 5) ** 2 for c in phi.coeffs]
    rng.shuffle(coeffs)
    assert is_isometric(phi, QuadraticForm(tuple(coeffs)))


def test_isometric_examples():
    assert is_isometric(Q(1, -1), Q(2, -2))
    assert not is_isometric(Q(1, 1), Q(1, -1))
    assert is_isometric(Q(1, 1, -2, -2), tensor(Q(1, -2), Q(1, 1)))
    # same determinant and signature, different Hasse invariant at 3
    assert not is_isometric(Q(1, 1), Q(3, 3))


# -- isotropy ---------------------------------------------------------------


def test_isotropy_examples():
    assert is_isotropic(Q(1, -1))
    assert not is_isotropic(Q(1, 1, 1))
    assert not is_isotropic(Q(1, -2, -3, 6))
    assert brute_search(Q(1, -2, -3, 6), 0, 200) is None


def test_isotropy_against_brute_force_corpus():
    for phi in form_corpus(7, 150, 4, 20):
        iso = is_isotropic(phi)
        hit = brute_search(phi, 0, 80)
        if hit is not None:
            assert iso, phi
        if iso:
            assert find_isotropic_vector(phi).check(phi)


@given(st.lists(st.integers(-40, 40).filter(bool), min_size=5, max_size=8))
def test_dimension_five_and_up_isotropic_iff_indefinite(c):
    phi = QuadraticForm(tuple(c))
    indefinite = any(x > 0 for x in c) and any(x < 0 for x in c)
    assert is_isotropic(phi) == indefinite
    if indefinite:
        assert find_isotropic_vector(phi).check(phi)


def test_anisotropic_form_has_no_isotropic_vector():
    with pytest.raises(NotRepresented):
        find_isotropic_vector(Q(1, 1, 1))


# -- Witt decomposition ----------------------------------------------------------


def test_witt_examples():
    assert witt_decompose(Q(1, -1, 1, -1)) == witt_decompose(hyperbolic(2))
    wd = witt_decompose(Q(1, -1, 1, -1))
    assert wd.witt_index == 2 and wd.anisotropic.dim == 0
    wd = witt_decompose(Q(1, 1, 1))
    assert wd.witt_index == 0 and wd.anisotropic == Q(1, 1, 1)
    wd = witt_decompose(Q(1, 1, -2, -3))
    assert wd.witt_index == 1 and wd.anisotropic.dim == 2 and not is_isotropic(wd.anisotropic)


@given(forms)
def test_witt_decomposition_is_consistent(phi):
    wd = witt_decompose(phi)
    assert wd.witt_index == witt_index(phi)
    assert 2 * wd.witt_index + wd.anisotropic.dim == phi.dim
    assert not is_isotropic(wd.anisotropic)
    assert is_isometric(phi, orth_sum(wd.anisotropic, hyperbolic(wd.witt_index)))


@given(forms)
def test_phi_minus_phi_is_hyperbolic(phi):
    assert is_hyperbolic(orth_sum(phi, scale(-1, phi)))


# -- representation ----------------------------------------------------------


def test_represents_examples():
    assert represents(Q(1, 1), 5)
    assert not represents(Q(1, 1), 3)
    for c in (1, -7, Fraction(2, 9)):
        assert represents(Q(1, -1), c)
    assert find_representation(Q(3, 1, -6, -2), 3).coords == (1, 0, 0, 0)
    rv = find_representation(Q(1, 1), 5)
    assert rv.check(Q(1, 1)) and rv.value == 5
    rv = find_representation(Q(1, -1), 0)
    assert rv.check(Q(1, -1)) and any(rv.coords)


def test_represents_against_brute_force():
    rng = random.Random(11)
    for phi in form_corpus(3, 60, 3, 12):
        c = Fraction(rng.randint(-20, 20) or 1)
        truth = represents(phi, c)
        hit = brute_search(phi, c, 20)
        if hit is not None:
            assert truth
        if truth:
            assert find_representation(phi, c).check(phi)
        else:
            assert hit is None
            with pytest.raises(NotRepresented):
                find_representation(phi, c)


@given(small_forms, st.lists(st.integers(-4, 4), min_size=4, max_size=4))
def test_values_are_represented(phi, x):
    value = phi.evaluate(x[: phi.dim])
    if value != 0:
        assert represents(phi, value)
        assert find_representation(phi, value).check(phi)


def test_similarity_factor_examples():
    assert is_similarity_factor(Q(3, -5, 7), 1)
    assert is_similarity_factor(Q(1, 1), 2)
    assert not is_similarity_factor(Q(1, 2), -1)


# -- subforms and embeddings ----------------------------------------------------------


def test_subform_examples():
    assert is_subform(Q(1), Q(1, 1))
    assert not is_subform(Q(1, 1, 1), Q(1, 1))
    assert is_subform(Q(1, 3), Q(3, 1, -6, -2))
    vecs = find_embedding(Q(1, 3), Q(3, 1, -6, -2))
    phi = Q(3, 1, -6, -2)
    assert [phi.evaluate(v) for v in vecs] == [1, 3] and phi.bilinear(vecs[0], vecs[1]) == 0


@given(small_forms, small_forms)
def test_every_form_is_a_subform_of_its_orthogonal_sum(tau, rest):
    phi = orth_sum(rest, tau)
    assert is_subform(tau, phi)
    vecs = find_embedding(tau, phi)
    for i, v in enumerate(vecs):
        assert phi.evaluate(v) == tau.coeffs[i]


# -- product factorization --------------------------------------------------------------


def test_product_factorization_examples():
    fac = product_factorization(Q(1, 1, -2, -2), Q(3, 1, -6, -2), 3)
    assert fac is not None
    assert squarefree_class(3 / (fac.c1 * fac.c2)).is_square()
    assert fac.x.check(Q(1, 1, -2, -2)) and fac.y.check(Q(3, 1, -6, -2))
    assert product_factorization(Q(1, -1), Q(5, 7), Fraction(-3, 2)) is not None
    assert product_factorization(Q(1, 1), Q(1, 1), -1) is None


@given(small_forms, small_forms, st.integers(-50, 50).filter(bool))
def test_product_factorization_decision_and_witnesses(phi1, phi2, c):
    fac = product_factorization(phi1, phi2, c)
    assert (fac is not None) == is_isotropic(orth_sum(scale(c, phi1), scale(-1, phi2)))
    if fac is not None:
        assert fac.x.check(phi1) and fac.x.value == fac.c1
        assert fac.y.check(phi2) and fac.y.value == fac.c2
        assert squarefree_class(Fraction(c) / (fac.c1 * fac.c2)).is_square()


# -- quadratic extensions ----------------------------------------------------------------


def _brute_isotropic_over_sqrt(phi, d, H=3):
    """Search x + y sqrt(d) with phi(x) + d phi(y) = 0 and B(x, y) = 0."""
    c = np.array([float(q) for q in phi.coeffs])
    pts = np.array(list(itertools.product(range(-H, H + 1), repeat=phi.dim)), dtype=float)
    qx = pts**2 @ c
    bil = (pts * c) @ pts.T
    total = qx[:, None] + d * qx[None, :]
    ok = (np.abs(total) < 1e-9) & (np.abs(bil) < 1e-9)
    zero = int(np.flatnonzero(np.all(pts == 0, axis=1))[0])
    ok[zero, zero] = False
    return bool(ok.any())


def test_isotropic_over_sqrt_examples():
    assert isotropic_over_sqrt(Q(1, 1), -1)
    assert not isotropic_over_sqrt(Q(1, 1, 1, 1, 1), 5)
    assert isotropic_over_sqrt(Q(3, 1, -6, -2), -3)
    assert not isotropic_over_sqrt(Q(3, 1, -6, -2), 7)


def test_isotropic_over_sqrt_against_brute_force():
    rng = random.Random(5)
    for _ in range(40):
        phi = QuadraticForm(tuple(rng.choice([-1, 1]) * rng.randint(1, 7) for _ in range(rng.randint(2, 3))))
        d = rng.choice([-7, -3, -2, -1, 2, 3, 5, 6])
        if _brute_isotropic_over_sqrt(phi, d):
            assert isotropic_over_sqrt(phi, d), (phi, d)


@given(small_forms, st.sampled_from([-5, -3, -2, -1, 2, 3, 5, 7]))
def test_isotropic_over_sqrt_is_monotone(phi, d):
    if is_isotropic(phi):
        assert isotropic_over_sqrt(phi, d)
    # <1,-d> becomes hyperbolic over Q(sqrt d), so a form containing it is isotropic there
    assert isotropic_over_sqrt(orth_sum(phi, Q(1, -d)), d)


# -- literals ----------------------------------------------------------------


@given(forms)
def test_format_parse_round_trip(phi):
    assert parse_form(format_form(phi)) == phi


def test_parse_form_variants_and_errors():
    assert parse_form(" 1, -2 , 3/5 ") == Q(1, -2, Fraction(3, 5))
    assert parse_form("<<2,-1>>") == Q(1, 1, -2, -2)
    assert parse_form("").dim == 0
    with pytest.raises(ParseError) as err:
        parse_form("1,x")
    assert (err.value.line, err.value.column) == (1, 3)
    with pytest.raises(ParseError):
        parse_form("1,0")
    with pytest.raises(ParseError):
        parse_form("1.5")
