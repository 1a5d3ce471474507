import math
import random
import warnings
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from dfa import (
    InvalidStateError,
    ModelContext,
    Polynomial,
    a,
    ad,
    build_field,
    canonical_words,
    conjugated,
    d,
    displaced,
    expect,
    gram_psd_check,
    mixture,
    moment,
    multiply,
    power,
    vacuum,
    vacuum_expect,
)
from dfa.states import NonHermitianWarning
from dfa.verify import random_model, random_polynomial


def test_vacuum_examples(two_fn):
    m = two_fn
    assert vacuum_expect(Polynomial.constant(m, 1)) == 1
    assert vacuum_expect(d(m)) == 0
    assert vacuum_expect(multiply(a(m, "f1"), ad(m, "f2"))) == m.gram[1][0]


@pytest.mark.parametrize("j", range(1, 7))
def test_vacuum_even_moments(exact2, j):
    m = exact2
    x = a(m, "f2") - ad(m, "f2")
    ff = m.gram[1][1]
    want = (-ff) ** j * Fraction(math.factorial(2 * j), 2 ** j * math.factorial(j))
    assert vacuum_expect(power(x, 2 * j)) == want
    assert vacuum_expect(power(x, 2 * j - 1)) == 0


def test_displaced_examples():
    m = ModelContext(("f1",), [[1.0]], ("z1",), [[0.7]])
    s = displaced(m)
    assert expect(s, Polynomial.constant(m, 1)) == pytest.approx(1)
    assert complex(expect(s, a(m, "f1") + ad(m, "f1"))) == pytest.approx(1.4)


def test_mixture_example():
    m = ModelContext(("f1",), [[1.0]], ("z1",), [[0.5]])
    xi = (d(m) + d(m, k=2)) * (1 / math.sqrt(2))
    s = conjugated(xi)
    assert complex(s.norm) == pytest.approx(1)
    assert complex(expect(s, a(m, "f1") + ad(m, "f1"))) == pytest.approx(1.5)
    assert complex(expect(mixture(m, {1: 1, 2: 1}), a(m, "f1") + ad(m, "f1"))) == pytest.approx(1.5)


def test_invalid_states(one_fn):
    with pytest.raises(InvalidStateError):
        conjugated(a(one_fn, "f1"))
    with pytest.raises(InvalidStateError):
        conjugated(Polynomial.zero(one_fn))


def test_moment_examples(one_fn):
    m = one_fn
    assert complex(moment(vacuum(), build_field("free", "f1", m), 2)) == pytest.approx(1)
    assert complex(moment(vacuum(), build_field("defII_power", "f1", m, k=1), 2)) == pytest.approx(2)
    assert complex(moment(vacuum(), build_field("defII_power", "f1", m, k=2), 2)) == pytest.approx(6)


def test_moment_warns_for_non_hermitian(one_fn):
    with pytest.warns(NonHermitianWarning):
        moment(vacuum(), a(one_fn, "f1"), 2)


def test_defI_power_complex_alpha_is_not_hermitian():
    m = ModelContext(("f",), [[1.0]], ("z",), [[0.5]], alpha={"f": 0.3 + 0.2j})
    fld = build_field("defI_power", "f", m, k=1)
    assert not fld.is_hermitian()
    assert build_field("defI", "f", m).is_hermitian()


def test_psd_small_examples(one_fn):
    m = one_fn
    ok, lo = gram_psd_check(vacuum(), [Polynomial.constant(m, 1)])
    assert ok and lo == pytest.approx(1)
    basis = [Polynomial.constant(m, 1), d(m), multiply(ad(m, "f1"), d(m))]
    ok, lo = gram_psd_check(vacuum(), basis)
    assert ok and lo >= -1e-12


def test_psd_full_degree2_basis():
    rng = random.Random(3)
    m = random_model(rng, 2, 1, exact=False)
    basis = canonical_words(m, 2)
    for s in (vacuum(), displaced(m), mixture(m, [1, 1j, 0.5])):
        ok, lo = gram_psd_check(s, basis)
        assert ok, lo


def test_psd_rejects_non_state(one_fn):
    # A "state" with a negative weight is not positive
    m = one_fn
    from dfa.states import StateFunctional

    bad = StateFunctional(xi=Polynomial.constant(m, 1), norm=-1)
    ok, lo = gram_psd_check(bad, [Polynomial.constant(m, 1), ad(m, "f1")])
    assert not ok and lo < 0


def test_canonical_words_count(two_fn):
    # degree <= 1 with one functional: 1, d, d^-1, ad1, ad2, a1, a2
    assert len(canonical_words(two_fn, 1)) == 7


@given(st.integers(0, 2**32 - 1))
def test_nonzero_displacement_sector_vanishes(seed):
    rng = random.Random(seed)
    m = random_model(rng, 2, 2, exact=True)
    p = random_polynomial(rng, m, 3, 3)
    for s in (vacuum(), displaced(m, k=Fraction(1, 2)), displaced(m, zeta="z2", k=-2)):
        for key, c in p.terms.items():
            if any(key[1]):
                assert expect(s, Polynomial._wrap(m, {key: c})) == 0


@given(st.integers(0, 2**32 - 1))
def test_mixture_sector_is_exponent_difference(seed):
    # cross terms of a mixture pick up words whose exponent is K_m - K_n
    rng = random.Random(seed)
    m = random_model(rng, 2, 2, exact=True)
    p = random_polynomial(rng, m, 3, 3)
    s = mixture(m, [1, 2], zeta="z2")
    allowed = {(0, 0), (0, 1), (0, -1)}
    for key, c in p.terms.items():
        if key[1] not in allowed:
            assert expect(s, Polynomial._wrap(m, {key: c})) == 0


@given(st.integers(0, 2**32 - 1))
def test_displaced_state_equals_shifted_vacuum(seed):
    rng = random.Random(seed)
    m = random_model(rng, 2, 1, exact=True)
    p = random_polynomial(rng, m, 3, 2)
    z = m.zeta_values[0]
    # substitute a_f -> a_f + zeta(f), ad_f -> ad_f + zeta(f) word by word
    shifted = Polynomial.zero(m)
    for (cr, k, an), c in p.terms.items():
        term = Polynomial.constant(m, c)
        for i in cr:
            term = multiply(term, ad(m, i) + z[i])
        term = multiply(term, d(m, k))
        for i in an:
            term = multiply(term, a(m, i) + z[i])
        shifted = shifted + term
    assert expect(displaced(m), p) == vacuum_expect(shifted)


def test_float_moment_imaginary_guard(one_fn):
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        val = moment(vacuum(), build_field("defI", "f1", one_fn), 4)
    assert abs(complex(val).imag) < 1e-12
    assert np.isfinite(complex(val).real)
