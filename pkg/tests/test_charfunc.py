import cmath
import math
import warnings

import numpy as np
import pytest
from hypothesis import given, strategies as st

from dfa import build_field, moment, vacuum
from dfa import charfunc as cf
from dfa.errors import DomainError, NoiseFloorError
from dfa.specfun import bessel_i0, bessel_j0
from dfa.verify import _single_model, char_moment_cases, moment_residual

LAM = np.linspace(-4, 4, 81)


# -- closed forms -------------------------------------------------------------

def test_char_free_values():
    assert cf.char_free(0, 1) == 1
    assert cf.char_free(1, 1) == pytest.approx(math.exp(-0.5), abs=1e-15)


def test_char_displaced_values():
    assert np.allclose(cf.char_displaced(LAM, 1.3, 0), cf.char_free(LAM, 1.3))
    assert cf.char_displaced(1, 1, 0.7) == pytest.approx(cmath.exp(-0.5 + 1.4j))
    m = cf.moments_from_char(lambda l: cf.char_displaced(l, 1, 0.7), 1)
    assert m[1] == pytest.approx(1.4, rel=1e-8)


def test_char_mixture_reductions():
    assert np.allclose(cf.char_mixture(LAM, 1, 0.5, [2.0]), cf.char_free(LAM, 1))
    assert np.allclose(cf.char_mixture(LAM, 1, 0.5, [0, 1j]), cf.char_displaced(LAM, 1, 0.5))
    with pytest.raises(ValueError):
        cf.char_mixture(LAM, 1, 0.5, [0, 0])


def test_dens_mixture_is_weighted_gaussians():
    x = np.linspace(-5, 7, 31)
    want = (4 * cf.dens_displaced(x, 1, 0) + 1 * cf.dens_displaced(x, 1, 1.0)) / 5
    assert np.allclose(cf.dens_mixture(x, 1, 0.5, [2, 0, 1j]), want, rtol=1e-14)


def test_char_multi_displaced_examples():
    lam = np.array([[0.3, -0.8], [1.1, 0.4]])
    got = cf.char_multi_displaced(lam, np.eye(2), [[0.5, 0.5]], [1])
    want = np.exp(-0.5 * (lam ** 2).sum(-1) + 1j * lam.sum(-1))
    assert np.allclose(got, want, rtol=1e-14)
    l1 = np.linspace(-3, 3, 13)
    one = cf.char_multi_displaced(l1[:, None], [[1.7]], [[0.0], [0.4]], [1, 0.5])
    assert np.allclose(one, cf.char_mixture(l1, 1.7, 0.4, [1, 0.5]), rtol=1e-14)
    with pytest.raises(ValueError):
        cf.char_multi_displaced(lam, np.eye(3), [[0.5, 0.5, 0.5]], [1])


def test_dens_multi_displaced_normalized_2d():
    F = np.array([[1.0, 0.3], [0.3, 0.7]])
    Z = [[0.0, 0.0], [0.5, -0.25]]
    g = np.linspace(-12, 12, 481)
    X, Y = np.meshgrid(g, g, indexing="ij")
    rho = cf.dens_multi_displaced(np.stack([X, Y], -1), F, Z, [1, 1j])
    h = g[1] - g[0]
    assert abs(rho.sum() * h * h - 1) < 1e-6


def test_complex_gram_warns():
    F = [[1, 0.2 + 0.1j], [0.2 - 0.1j, 1]]
    with pytest.warns(cf.ComplexGramWarning):
        cf.char_multi_displaced(np.zeros(2), F, [[0, 0]], [1])


def test_char_defI_values():
    assert np.allclose(cf.char_defI(LAM, 1, 0), cf.char_free(LAM, 1))
    assert cf.char_defI(1, 1, 1) == pytest.approx(math.exp(-0.5) * bessel_j0(2))


def test_defI_power_k0_is_constant_shift():
    # (d + d^dagger)^0 = 1, so the field is i(a - a^dagger) + alpha
    lam = np.linspace(-3, 3, 25)
    assert np.allclose(cf.char_defI_power(lam, 1.2, 0.4, 0), np.exp(1j * lam * 0.4 - 0.6 * lam ** 2), rtol=1e-14)


def test_defI_power_k2_is_displaced_k1():
    lam = np.linspace(-3, 3, 25)
    al = 0.4
    want = bessel_j0(2 * lam * al) * np.exp(2j * lam * al) * cf.char_free(lam, 1.2)
    assert np.max(np.abs(cf.char_defI_power(lam, 1.2, al, 2) - want)) <= 1e-10


def test_defII_k1_bessel_identity():
    lam = np.linspace(0, 3, 31)
    want = bessel_i0(lam ** 2 * 1.3) * np.exp(-lam ** 2 * 1.3)
    assert np.max(np.abs(cf.char_defII_power(lam, 1.3, 1) - want)) <= 1e-10


def test_table_pattern_matches_literal_entries(frozen):
    for row in frozen["defI_power"]:
        got = cf.char_defI_power(row["lam"], row["ff"], row["alpha"], row["k"])
        assert abs(got - complex(*row["value"])) <= 1e-13, row
    for row in frozen["defII_power"]:
        if row["lam"] > cf.lambda_cap(row["ff"], row["k"]):
            with pytest.raises(DomainError):
                cf.char_defII_power(row["lam"], row["ff"], row["k"])
            continue
        got = cf.char_defII_power(row["lam"], row["ff"], row["k"])
        assert abs(got - complex(*row["value"])) <= 1e-13, row


@pytest.mark.parametrize("k", [-1, 7, 1.5])
def test_power_range(k):
    with pytest.raises(ValueError):
        cf.char_defI_power(0.5, 1, 0.3, k)
    with pytest.raises(ValueError):
        cf.char_defII_power(0.5, 1, k)
    with pytest.raises(ValueError):
        cf.char_defII_power(0.5, 1, 0)


def test_lambda_cap_respected():
    lam = cf.lambda_cap(1.0, 3)
    assert np.isfinite(cf.char_defII_power(0.999 * lam, 1.0, 3))


# -- symbolic bridge ---------------------------------------------------------------

@pytest.fixture(scope="module")
def bridge_cases():
    m = _single_model(1.0, 0.5, 0.5)
    return char_moment_cases(m)


def test_taylor_coefficients_match_symbolic_moments(bridge_cases):
    for name, chi, state, fld in bridge_cases:
        sym = [complex(moment(state, fld, j)) for j in range(9)]
        num = cf.moments_from_char(chi, 8, method="contour")
        assert np.max(moment_residual(num, sym)) <= 1e-9, name


def test_defI_power_k4_moments():
    m = _single_model(1.0, 0.5, 0.5)
    fld = build_field("defI_power", "f", m, k=4)
    sym = [complex(moment(vacuum(), fld, j)) for j in range(9)]
    num = cf.moments_from_char(lambda l: cf.char_defI_power(l, 1.0, 0.5, 4), 8, method="contour")
    assert np.max(moment_residual(num, sym)) <= 1e-9


def test_fd_moments():
    assert cf.moments_from_char(lambda l: cf.char_free(l, 1.7), 2)[2] == pytest.approx(1.7, rel=1e-9)
    m = _single_model(1.0, 0.5, 0.5)
    sym4 = complex(moment(vacuum(), build_field("defII_power", "f", m, k=1), 4)).real
    fd = cf.moments_from_char(lambda l: cf.char_defII_power(l, 1.0, 1), 4)
    assert fd[4] == pytest.approx(sym4, rel=1e-6)
    assert fd[1] == pytest.approx(0, abs=1e-8)


def test_fd_noise_floor():
    with pytest.raises(NoiseFloorError):
        cf.moments_from_char(lambda l: cf.char_free(l, 1.0) + 1e-6 * np.sin(1e3 * np.asarray(l)), 6, step=1e-3)


def test_moments_order_bounds():
    with pytest.raises(ValueError):
        cf.moments_from_char(lambda l: cf.char_free(l, 1), 13)
    with pytest.raises(ValueError):
        cf.moments_from_char(lambda l: cf.char_free(l, 1), 2, method="simpson")


# -- pairs and densities ---------------------------------------------------------

PAIRS = [
    cf.make_pair("free", 1.0),
    cf.make_pair("displaced", 1.0, zf=0.7),
    cf.make_pair("mixture", 1.0, zf=0.5, xi=[1, 0.5j, -0.25]),
    cf.make_pair("defI", 1.0, abs_alpha=1.0),
    cf.make_pair("defII", 1.0, k=1),
    cf.make_pair("defII", 1.0, k=2),
]


@pytest.mark.parametrize("pair", PAIRS, ids=lambda p: f"{p.name}{p.params.get('k', '')}")
def test_pair_invariants(pair):
    res = cf.check_pair(pair, LAM)
    assert res["chi0"] <= 1e-14
    assert res["hermitian_symmetry"] <= 1e-13
    assert res["bounded"] <= 1e-13
    assert res["nonnegative"] == 0
    assert res["normalization"] <= 1e-8


@pytest.mark.parametrize("pair", PAIRS, ids=lambda p: f"{p.name}{p.params.get('k', '')}")
def test_pair_fourier_and_variance(pair):
    err = cf.verify_fourier(pair.char_fn, pair.density_fn, LAM, singular_points=pair.singular_points)
    assert err <= 1e-6
    mean = cf.integrate_density(pair.density_fn, moment=1, singular_points=pair.singular_points)
    m2 = cf.integrate_density(pair.density_fn, moment=2, singular_points=pair.singular_points)
    assert m2 - mean ** 2 == pytest.approx(pair.variance, rel=1e-6)


def test_free_fourier_tight():
    assert cf.verify_fourier(lambda l: cf.char_free(l, 1), lambda x: cf.dens_free(x, 1), LAM) <= 1e-10


def test_defII_variances():
    for k, var in ((1, 2.0), (2, 6.0)):
        coeffs = cf.moments_from_char(lambda l: cf.char_defII_power(l, 1.0, k), 2, method="contour")
        assert coeffs[2] == pytest.approx(var, rel=1e-12)


def test_figure1_ordering_at_zero():
    vals = [cf.dens_defI(0.0, 1.0, a) for a in (0, 1 / 3, 1, 3)]
    assert vals[0] > vals[1] > vals[2] > vals[3]


def test_dens_defI_symmetric_and_normalized():
    x = np.linspace(-8, 8, 161)
    rho = cf.dens_defI(x, 1.0, 1 / 3)
    assert np.allclose(rho, rho[::-1], atol=1e-15)
    assert abs(cf.integrate_density(lambda x: cf.dens_defI(x, 1.0, 3.0)) - 1) <= 1e-8


def test_dens_defII_singularity_and_symmetry():
    assert cf.dens_defII(0.0, 1) == math.inf
    assert cf.dens_defII_k2(0.0, 1) == math.inf
    x = np.linspace(0.01, 20, 200)
    assert np.allclose(cf.dens_defII(x, 1.3), cf.dens_defII(-x, 1.3), rtol=0, atol=0)
    assert np.all(np.diff(cf.dens_defII(x, 1.3)) < 0)


@given(st.floats(0.5, 6.0), st.floats(0.0, 1.0))
def test_tail_monotone(t, dt):
    p1 = cf.tail_probability(lambda x: cf.dens_defII(x, 1.0), t, 40.0)
    p2 = cf.tail_probability(lambda x: cf.dens_defII(x, 1.0), t + dt, 40.0)
    assert p2 <= p1 + 1e-16


@pytest.mark.parametrize("t,target", [(3.66, 10), (4.84, 100), (5.76, 1000)])
def test_tail_ratios(t, target):
    assert cf.tail_ratio(t) == pytest.approx(target, rel=0.15)


# -- several measurements ---------------------------------------------------------

F2 = np.array([[1.0, 0.4], [0.4, 0.8]])


def test_multi_density_one_measurement_reduces():
    x = np.linspace(0.05, 12, 40)
    got = cf.dens_defII_multi(x[:, None], [[1.3]])
    assert np.allclose(got, cf.dens_defII(x, 1.3), rtol=1e-7, atol=0)


def test_multi_density_two_measurements_closed_form():
    rng = np.random.default_rng(0)
    x = rng.normal(size=(30, 2)) * 3
    assert np.allclose(cf.dens_defII_multi(x, F2), cf.dens_defII_2d(x, F2), rtol=1e-7, atol=0)


def test_multi_density_radial_fourier():
    err = cf.verify_fourier_radial(lambda l: cf.char_defII_multi(l, F2), lambda x: cf.dens_defII_multi(x, F2),
                                   F2, np.linspace(0, 4, 21))
    assert err <= 1e-5


def test_multi_density_singular_gram():
    with pytest.raises(np.linalg.LinAlgError):
        cf.dens_defII_multi(np.ones(2), [[1, 1], [1, 1]])


def test_dens_defII_2d_rejects_other_n():
    with pytest.raises(ValueError):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            cf.dens_defII_2d(np.ones(3), np.eye(3))
