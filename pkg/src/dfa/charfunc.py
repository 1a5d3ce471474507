"""Closed-form characteristic functions and densities, and the numerics that cross-check them.

Characteristic functions accept real or complex ``lam`` (scalars or arrays);
complex arguments are used by :func:`moments_from_char` to read off Taylor
coefficients on a circle.  All ``ff`` arguments are ``(f, f) > 0``.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .errors import NonConvergenceError, NoiseFloorError
from .quadrature import line_nodes
from .specfun import PFQ_ARG_CAP, bessel_j0, bessel_ke, hyper, whittaker_w

__all__ = [
    "CharDensityPair",
    "ComplexGramWarning",
    "char_free",
    "char_displaced",
    "char_mixture",
    "char_multi_displaced",
    "char_defI",
    "char_defI_power",
    "char_defII_power",
    "char_defII_multi",
    "defI_power_params",
    "defII_power_params",
    "dens_free",
    "dens_displaced",
    "dens_mixture",
    "dens_multi_displaced",
    "dens_defI",
    "dens_defII",
    "dens_defII_k2",
    "dens_defII_multi",
    "dens_defII_2d",
    "moments_from_char",
    "verify_fourier",
    "radial_fourier",
    "verify_fourier_radial",
    "integrate_density",
    "tail_probability",
    "tail_ratio",
    "lambda_cap",
    "make_pair",
    "check_pair",
]


MAX_POWER = 6

# -- characteristic functions --------------------------------------------

def char_free(lam, ff: float):
    """``exp(-lam^2 ff / 2)``."""
    lam = np.asarray(lam)
    return np.exp(-0.5 * lam * lam * ff)


def char_displaced(lam, ff: float, zf: float):
    """Gaussian displaced to mean ``2 zeta(f)``."""
    lam = np.asarray(lam)
    return np.exp(-0.5 * lam * lam * ff + 2j * lam * zf)


def _weights(xi) -> np.ndarray:
    w = np.abs(np.asarray(xi, dtype=complex)) ** 2
    if w.size == 0 or not w.sum() > 0:
        raise ValueError("xi must contain a nonzero entry")
    return w / w.sum()


def char_mixture(lam, ff: float, zf: float, xi: Sequence):
    """``(1/N) sum_k |xi_k|^2 exp(-lam^2 ff/2 + 2 i k lam zf)``, ``xi`` indexed by ``k = 0, 1, ...``."""
    lam = np.asarray(lam)
    w = _weights(xi)
    out = np.zeros(lam.shape, dtype=complex)
    for k, wk in enumerate(w):
        if wk:
            out = out + wk * np.exp(2j * k * lam * zf)
    return out * np.exp(-0.5 * lam * lam * ff)


class ComplexGramWarning(UserWarning):
    """A Gram matrix with non-real entries entered a quadratic form through its real part."""


def _quad_form_matrix(F) -> np.ndarray:
    F = np.atleast_2d(np.asarray(F, dtype=complex))
    if F.shape[0] != F.shape[1]:
        raise ValueError("Gram matrix must be square")
    if np.any(F.imag != 0):
        # lam^T F lam only sees the real symmetric part of a Hermitian F
        warnings.warn("Gram matrix has non-real entries; using its real part", ComplexGramWarning, stacklevel=3)
    return F.real


def char_multi_displaced(lam, F, zeta_table, xi: Sequence):
    """Multi-measurement characteristic function of a state conjugated by ``sum_m xi_m d_{zeta_m}``.

    Parameters
    ----------
    lam : array, shape (..., n)
    F : (n, n) Gram matrix; its real symmetric part enters the quadratic form.
    zeta_table : (M, n) array, ``zeta_table[m, j] = zeta_m(f_j)``.
    xi : length-M coefficients.
    """
    Fr = _quad_form_matrix(F)
    n = Fr.shape[0]
    lam = np.asarray(lam)
    if lam.shape[-1] != n:
        raise ValueError(f"lam has last dimension {lam.shape[-1]}, expected {n}")
    Z = np.atleast_2d(np.asarray(zeta_table, dtype=float))
    w = _weights(xi)
    if Z.shape != (len(w), n):
        raise ValueError("zeta_table must be (len(xi), n)")
    quad = np.einsum("...i,ij,...j->...", lam, Fr, lam)
    out = np.zeros(quad.shape, dtype=complex)
    for m, wm in enumerate(w):
        out = out + wm * np.exp(2j * (lam @ Z[m]))
    return out * np.exp(-0.5 * quad)


def char_defI(lam, ff: float, abs_alpha: float):
    """``exp(-lam^2 ff / 2) J_0(2 lam |alpha|)``."""
    lam = np.asarray(lam)
    return np.exp(-0.5 * lam * lam * ff) * bessel_j0(2.0 * abs_alpha * lam)


def _odd_fracs(k: int, den: int):
    return [Fraction(s, den) for s in range(1, 2 * k, 2)]


def defI_power_params(k: int) -> tuple[list, list, complex, str]:
    """Parameters of ``i(a - a^dagger) + alpha (d + d^dagger)^k``.

    Returns ``(numerator, denominator, c, form)``: the pFq argument is
    ``c * (lam alpha)^2`` when ``form == "square"`` (odd ``k``) and
    ``c * lam alpha`` when ``form == "linear"`` (even ``k``).
    """
    if not isinstance(k, int) or not 0 <= k <= MAX_POWER:
        raise ValueError(f"k must be an integer in 0..{MAX_POWER}")
    if k % 2:
        num = [x for x in _odd_fracs(k, 2 * k) if x != Fraction(1, 2)]
        den = [Fraction(s, k) for s in range(1, k)] + [Fraction(1)]
        return num, den, -(4.0 ** (k - 1)), "square"
    if k == 0:
        return [], [], 1j, "linear"
    r = k // 2
    num = _odd_fracs(r, k)
    den = [Fraction(s, r) for s in range(1, r)] + [Fraction(1)]
    return num, den, 1j * 2.0 ** k, "linear"


def char_defI_power(lam, ff: float, alpha: complex, k: int):
    """Vacuum characteristic function of ``i(a_f - a_f^dagger) + alpha (d + d^dagger)^k``."""
    num, den, c, form = defI_power_params(k)
    lam = np.asarray(lam)
    z = c * (lam * alpha) ** 2 if form == "square" else c * lam * alpha
    return hyper(num, den, z) * np.exp(-0.5 * lam * lam * ff)


def defII_power_params(k: int) -> tuple[list, list, float]:
    """Parameters of ``i(a - a^dagger)(d + d^dagger)^k``: argument is ``c * lam^2 ff``."""
    if not isinstance(k, int) or not 1 <= k <= MAX_POWER:
        raise ValueError(f"k must be an integer in 1..{MAX_POWER}")
    num = _odd_fracs(k, 2 * k)
    den = [Fraction(s, k) for s in range(1, k)] + [Fraction(1)]
    return num, den, -2.0 * 4.0 ** (k - 1)


def char_defII_power(lam, ff: float, k: int = 1):
    """Vacuum characteristic function of ``i(a_f - a_f^dagger)(d + d^dagger)^k``."""
    num, den, c = defII_power_params(k)
    lam = np.asarray(lam)
    return hyper(num, den, c * lam * lam * ff)


def char_defII_multi(lam, F):
    """``1F1(1/2; 1; -2 lam^T F lam)`` for ``lam`` of shape ``(..., n)``."""
    Fr = _quad_form_matrix(F)
    lam = np.asarray(lam)
    quad = np.einsum("...i,ij,...j->...", lam, Fr, lam)
    return hyper([Fraction(1, 2)], [1], -2.0 * quad)


def lambda_cap(ff: float, k: int = 1) -> float:
    """Largest ``|lam|`` for which ``char_defII_power`` stays inside the pFq argument cap."""
    _, _, c = defII_power_params(k)
    return math.sqrt(PFQ_ARG_CAP / (abs(c) * ff))


# -- densities ---------------------------------------------------------------

def dens_free(x, ff: float):
    x = np.asarray(x, dtype=float)
    return np.exp(-0.5 * x * x / ff) / math.sqrt(2 * math.pi * ff)


def dens_displaced(x, ff: float, zf: float):
    return dens_free(np.asarray(x, dtype=float) - 2.0 * zf, ff)


def dens_mixture(x, ff: float, zf: float, xi: Sequence):
    x = np.asarray(x, dtype=float)
    w = _weights(xi)
    return sum(wk * dens_free(x - 2.0 * k * zf, ff) for k, wk in enumerate(w) if wk)


def dens_multi_displaced(x, F, zeta_table, xi: Sequence):
    """Mixture of Gaussians with covariance ``Re F`` centred at ``2 zeta_m(f_j)``.

    Normalized by ``(2 pi)^{n/2} sqrt(det F)``.
    """
    Fr = _quad_form_matrix(F)
    n = Fr.shape[0]
    x = np.asarray(x, dtype=float)
    Z = np.atleast_2d(np.asarray(zeta_table, dtype=float))
    w = _weights(xi)
    Finv = np.linalg.inv(Fr)
    norm = (2 * math.pi) ** (n / 2) * math.sqrt(np.linalg.det(Fr))
    out = 0.0
    for m, wm in enumerate(w):
        y = x - 2.0 * Z[m]
        out = out + wm * np.exp(-0.5 * np.einsum("...i,ij,...j->...", y, Finv, y))
    return out / norm


def dens_defI(x, ff: float, abs_alpha: float, tol: float = 1e-13, max_nodes: int = 1 << 14):
    """Gaussian of variance ``ff`` convolved with the arcsine law on ``(-2|alpha|, 2|alpha|)``.

    With ``u = 2|alpha| cos t`` the convolution is a periodic integral in ``t``,
    evaluated with the trapezoid rule, doubling nodes until two successive
    estimates agree to ``tol``.

    Raises
    ------
    NonConvergenceError
        If ``max_nodes`` nodes do not reach ``tol``.
    """
    x = np.asarray(x, dtype=float)
    if abs_alpha == 0:
        return dens_free(x, ff)
    amp = 2.0 * abs(abs_alpha)
    n = 16
    prev = None
    while n <= max_nodes:
        u = amp * np.cos(2 * np.pi * (np.arange(n) + 0.5) / n)
        cur = dens_free(np.subtract.outer(x, u), ff).mean(axis=-1)
        if prev is not None and np.max(np.abs(cur - prev)) <= tol:
            return cur
        prev = cur
        n *= 2
    raise NonConvergenceError("arcsine convolution did not converge")


def dens_defII(x, ff: float):
    """``exp(-x^2/16ff) K_0(x^2/16ff) / sqrt(8 pi^3 ff)``; ``+inf`` at the integrable singularity ``x = 0``."""
    x = np.asarray(x, dtype=float)
    u = x * x / (16.0 * ff)
    out = np.full(x.shape, np.inf)
    nz = u > 0
    out[nz] = np.exp(-2.0 * u[nz]) * bessel_ke(0.0, u[nz]) / math.sqrt(8 * math.pi ** 3 * ff)
    return out if out.ndim else float(out)


def dens_defII_k2(x, ff: float):
    """``exp(-x^2/64ff) K_{1/4}(x^2/64ff) / sqrt(64 pi^3 ff)``; ``+inf`` at ``x = 0``."""
    x = np.asarray(x, dtype=float)
    u = x * x / (64.0 * ff)
    out = np.full(x.shape, np.inf)
    nz = u > 0
    out[nz] = np.exp(-2.0 * u[nz]) * bessel_ke(0.25, u[nz]) / math.sqrt(64 * math.pi ** 3 * ff)
    return out if out.ndim else float(out)


def _quad_values(x, F):
    Fr = _quad_form_matrix(F)
    det = np.linalg.det(Fr)
    if not det > 0:
        raise np.linalg.LinAlgError("Gram matrix is singular or not positive definite")
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != Fr.shape[0]:
        raise ValueError("dimension mismatch between x and F")
    q = np.einsum("...i,ij,...j->...", x, np.linalg.inv(Fr), x)
    return q, det, Fr.shape[0]


def dens_defII_multi(x, F):
    """n-measurement density written with Whittaker's ``W_{(n-1)/4, (n-1)/4}``.

    ``x`` has shape ``(..., n)``; the zero vector is the singular point.
    """
    q, det, n = _quad_values(x, F)
    kappa = (n - 1) / 4.0
    q = np.asarray(q, dtype=float)
    out = np.full(q.shape, np.inf)
    nz = q > 0
    qn = q[nz]
    W = whittaker_w(kappa, kappa, qn / 8.0)
    out[nz] = np.exp(-qn / 16.0) * W / (2.0 ** (0.75 * n - 0.75) * qn ** (n / 4 + 0.25) * math.sqrt(math.pi ** (n + 1) * det))
    return out if out.ndim else float(out)


def dens_defII_2d(x, F):
    """Two-measurement density ``exp(-q/8) / sqrt(8 pi^3 q det F)``, ``q = x^T F^{-1} x``."""
    q, det, n = _quad_values(x, F)
    if n != 2:
        raise ValueError("closed form applies to two measurements")
    q = np.asarray(q, dtype=float)
    with np.errstate(divide="ignore"):
        out = np.exp(-q / 8.0) / np.sqrt(8 * math.pi ** 3 * q * det)
    return out if out.ndim else float(out)


# -- numerical cross-checks -----------------------------------------------------

def integrate_density(density_fn: Callable, x_domain=(-40.0, 40.0), moment: int = 0,
                      singular_points=(), width: float = 0.5) -> float:
    """``int x^moment rho(x) dx`` over ``x_domain`` with singularity-aware panels."""
    x, w = line_nodes(x_domain[0], x_domain[1], singular_points, width=width)
    return float(np.sum(w * x ** moment * density_fn(x)))


def verify_fourier(char_fn: Callable, density_fn: Callable, lam_grid, x_domain=(-40.0, 40.0),
                   tol: float | None = None, singular_points=(), width: float | None = None) -> float:
    """Max over ``lam_grid`` of ``|int e^{i lam x} rho(x) dx - chi(lam)|``.

    If ``tol`` is given and exceeded, :class:`NonConvergenceError` is raised.
    """
    lam = np.asarray(lam_grid, dtype=float)
    if width is None:
        width = min(0.5, math.pi / (2 * max(1.0, float(np.max(np.abs(lam))))))
    x, w = line_nodes(x_domain[0], x_domain[1], singular_points, width=width)
    rho = w * density_fn(x)
    ft = np.exp(1j * np.outer(lam, x)) @ rho
    err = float(np.max(np.abs(ft - np.asarray(char_fn(lam)))))
    if tol is not None and err > tol:
        raise NonConvergenceError(f"Fourier mismatch {err:.3g} exceeds {tol:.3g}")
    return err


def _radial_kernel(n: int, z):
    if n == 1:
        return np.cos(z)
    if n == 2:
        return bessel_j0(z)
    if n == 3:
        return np.sinc(z / math.pi)
    raise ValueError("radial transforms are implemented for n = 1, 2, 3")


def radial_fourier(profile: Callable, s, n: int, r_max: float = 40.0, singular_at_zero: bool = True):
    """Fourier transform of an n-dimensional radial function ``h(|y|)``.

    ``H(s) = (2 pi)^{n/2} s^{1-n/2} int_0^inf h(r) r^{n/2} J_{n/2-1}(s r) dr``,
    written with ``omega_n`` times the angular average of ``exp(i s r cos)``.
    """
    s = np.atleast_1d(np.asarray(s, dtype=float))
    r, w = line_nodes(0.0, r_max, (0.0,) if singular_at_zero else (), width=min(0.5, math.pi / (2 * max(1.0, float(np.max(s))))))
    area = 2 * math.pi ** (n / 2) / math.gamma(n / 2)
    base = w * profile(r) * r ** (n - 1) * area
    return np.array([np.sum(base * _radial_kernel(n, si * r)) for si in s])


def verify_fourier_radial(char_fn: Callable, density_fn: Callable, F, lam_norms, r_max: float = 40.0) -> float:
    """Check a density depending on ``x^T F^{-1} x`` against ``chi(lam) = psi(lam^T F lam)``.

    ``char_fn`` takes lam vectors of shape ``(..., n)``; it is evaluated along
    ``lam = F^{-1/2} e_1 s`` so that ``lam^T F lam = s^2``.
    """
    Fr = _quad_form_matrix(F)
    n = Fr.shape[0]
    evals, evecs = np.linalg.eigh(Fr)
    root = evecs @ np.diag(np.sqrt(evals)) @ evecs.T
    e1 = np.zeros(n)
    e1[0] = 1.0
    xdir = root @ e1
    sqrt_det = math.sqrt(float(np.prod(evals)))

    def profile(r):
        return density_fn(np.multiply.outer(r, xdir)) * sqrt_det

    s = np.asarray(lam_norms, dtype=float)
    lam_vecs = np.multiply.outer(s, np.linalg.solve(root, e1))
    got = radial_fourier(profile, s, n, r_max=r_max)
    return float(np.max(np.abs(got - np.asarray(char_fn(lam_vecs)))))


def tail_probability(density_fn: Callable, t: float, x_max: float, width: float = 0.25) -> float:
    """``P(X > t) = int_t^{x_max} rho``."""
    x, w = line_nodes(t, x_max, (), width=width)
    return float(np.sum(w * density_fn(x)))


def tail_ratio(t_sigma: float, ff: float = 1.0) -> float:
    """Upper-tail probability of the ``i(a-a^dagger)(d+d^dagger)`` density beyond ``t_sigma``
    standard deviations, divided by that of the Gaussian with the same variance ``2 ff``."""
    sigma = math.sqrt(2.0 * ff)
    t = t_sigma * sigma
    p = tail_probability(lambda x: dens_defII(x, ff), t, t + 30.0 * math.sqrt(ff))
    g = 0.5 * math.erfc(t_sigma / math.sqrt(2.0))
    return p / g


def moments_from_char(char_fn: Callable, order: int, step: float = 0.25, method: str = "fd",
                      atol: float = 1e-8) -> np.ndarray:
    """Moments ``m_j = chi^{(j)}(0) / i^j`` for ``j = 0..order``.

    ``method="fd"`` uses central finite differences with three Richardson
    steps (``step``, ``step/2``, ...).  ``method="contour"`` reads the Taylor
    coefficients off ``chi`` sampled on circles in the complex plane, which is
    accurate to near machine precision for entire ``chi``.

    Raises
    ------
    NoiseFloorError
        (``fd``) if the Richardson error estimate exceeds both ``|m_j|`` and ``atol``.
    """
    if not 0 <= order <= 12:
        raise ValueError("order must be between 0 and 12")
    if method == "contour":
        coeffs = _taylor_contour(char_fn, order)
        out = np.array([math.factorial(j) * coeffs[j] / 1j ** j for j in range(order + 1)])
    elif method == "fd":
        out = np.empty(order + 1, dtype=complex)
        for j in range(order + 1):
            val, err = _richardson_derivative(char_fn, j, step)
            m = val / 1j ** j
            if err > max(abs(m), atol):
                raise NoiseFloorError(f"derivative {j}: error estimate {err:.3g} exceeds value {abs(m):.3g}")
            out[j] = m
    else:
        raise ValueError(f"unknown method {method!r}")
    if np.all(np.abs(out.imag) <= 1e-9 * np.maximum(np.abs(out.real), 1.0)):
        return out.real
    return out


def _central_difference(char_fn, j: int, h: float) -> complex:
    ks = np.arange(j + 1)
    pts = (j / 2.0 - ks) * h
    signs = (-1.0) ** ks
    binom = np.array([math.comb(j, k) for k in ks], dtype=float)
    vals = np.asarray(char_fn(pts), dtype=complex)
    return complex(np.sum(signs * binom * vals) / h ** j)


def _richardson_derivative(char_fn, j: int, h: float, levels: int = 4) -> tuple[complex, float]:
    if j == 0:
        v = complex(np.asarray(char_fn(np.array([0.0])))[0])
        return v, 0.0
    table = [[_central_difference(char_fn, j, h / 2 ** i)] for i in range(levels)]
    for col in range(1, levels):
        fac = 4.0 ** col
        for row in range(col, levels):
            table[row].append((fac * table[row][col - 1] - table[row - 1][col - 1]) / (fac - 1))
    best = table[-1][-1]
    err = abs(best - table[-2][-1])
    return best, err


def _taylor_contour(char_fn, order: int, nodes: int = 128) -> np.ndarray:
    theta = 2 * np.pi * np.arange(nodes) / nodes
    best = np.zeros(order + 1, dtype=complex)
    noise = np.full(order + 1, np.inf)
    for r in (1.0, 0.5, 0.25, 0.125, 0.0625):
        vals = np.asarray(char_fn(r * np.exp(1j * theta)), dtype=complex)
        c = np.fft.fft(vals) / nodes
        big = float(np.max(np.abs(vals)))
        for j in range(order + 1):
            est = 1e-15 * big / r ** j
            if est < noise[j]:
                noise[j] = est
                best[j] = c[j] / r ** j
    return best


# -- pairs ------------------------------------------------------------------

@dataclass(frozen=True)
class CharDensityPair:
    """A characteristic function with its density and metadata."""

    name: str
    char_fn: Callable
    density_fn: Callable | None = None
    variance: float | None = None
    support: str = "real line"
    singular_points: tuple = ()
    params: dict = field(default_factory=dict)


def make_pair(name: str, ff: float = 1.0, **p) -> CharDensityPair:
    """Build a named 1-measurement pair.

    ``name`` is one of ``free``, ``displaced`` (``zf``), ``mixture`` (``zf``,
    ``xi``), ``defI`` (``abs_alpha``), ``defII`` (``k`` in 1, 2).
    """
    if name == "free":
        return CharDensityPair(name, lambda l: char_free(l, ff), lambda x: dens_free(x, ff), ff, params={"ff": ff})
    if name == "displaced":
        zf = p["zf"]
        return CharDensityPair(name, lambda l: char_displaced(l, ff, zf), lambda x: dens_displaced(x, ff, zf), ff,
                               params={"ff": ff, "zf": zf})
    if name == "mixture":
        zf, xi = p["zf"], list(p["xi"])
        w = _weights(xi)
        ks = np.arange(len(w))
        mean = float(np.sum(w * 2 * ks * zf))
        var = ff + float(np.sum(w * (2 * ks * zf) ** 2)) - mean ** 2
        return CharDensityPair(name, lambda l: char_mixture(l, ff, zf, xi), lambda x: dens_mixture(x, ff, zf, xi), var,
                               params={"ff": ff, "zf": zf, "xi": xi})
    if name == "defI":
        aa = abs(p["abs_alpha"])
        dens = (lambda x: dens_defI(x, ff, aa))
        return CharDensityPair(name, lambda l: char_defI(l, ff, aa), dens, ff + 2 * aa * aa,
                               support="real line (Gaussian convolved with arcsine)", params={"ff": ff, "abs_alpha": aa})
    if name == "defII":
        k = p.get("k", 1)
        if k == 1:
            return CharDensityPair(name, lambda l: char_defII_power(l, ff, 1), lambda x: dens_defII(x, ff), 2 * ff,
                                   support="real line, log singularity at 0", singular_points=(0.0,), params={"ff": ff, "k": 1})
        if k == 2:
            return CharDensityPair(name, lambda l: char_defII_power(l, ff, 2), lambda x: dens_defII_k2(x, ff), 6 * ff,
                                   support="real line, |x|^-1/2 singularity at 0", singular_points=(0.0,), params={"ff": ff, "k": 2})
        return CharDensityPair(name, lambda l: char_defII_power(l, ff, k), None, ff * math.comb(2 * k, k),
                               params={"ff": ff, "k": k})
    raise ValueError(f"unknown pair {name!r}")


def check_pair(pair: CharDensityPair, lam_grid, x_domain=(-40.0, 40.0), tol: float = 1e-8) -> dict:
    """Evaluate the structural invariants of a pair; returns residuals by name."""
    lam = np.asarray(lam_grid, dtype=float)
    chi = np.asarray(pair.char_fn(lam), dtype=complex)
    chi_neg = np.asarray(pair.char_fn(-lam), dtype=complex)
    out = {
        "chi0": abs(complex(np.asarray(pair.char_fn(np.array([0.0])))[0]) - 1.0),
        "hermitian_symmetry": float(np.max(np.abs(chi_neg - chi.conj()))),
        "bounded": float(max(0.0, np.max(np.abs(chi)) - 1.0)),
    }
    if pair.density_fn is not None:
        x, w = line_nodes(x_domain[0], x_domain[1], pair.singular_points)
        rho = pair.density_fn(x)
        out["nonnegative"] = float(max(0.0, -np.min(rho)))
        out["normalization"] = abs(float(np.sum(w * rho)) - 1.0)
    return out
