"""Special functions needed by the closed-form characteristic functions and densities.

Only the functions, parameter ranges and accuracies those formulas need are
provided:

* :func:`pfq` -- entire generalized hypergeometric series (``p <= q``),
  summed in adaptive multiprecision so that strongly alternating series with
  arguments like ``-128 lambda^2`` keep full double accuracy.
* :func:`bessel_j0`, :func:`bessel_i0`, :func:`bessel_i0e` -- periodic
  trapezoid rule on the integral representations, exponentially convergent.
* :func:`bessel_k`, :func:`bessel_ke` -- Temme's series for ``x <= 2`` and
  Steed's continued fraction above, for ``|nu| <= 1/2``.
* :func:`whittaker_w` -- adaptive quadrature of the Laplace-type integral.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence

import gmpy2
import numpy as np
from scipy import integrate

from .coeffs import to_fraction
from .errors import DomainError, NonConvergenceError

__all__ = [
    "PFQParams",
    "PFQResult",
    "pfq",
    "hyper",
    "bessel_j0",
    "bessel_i0",
    "bessel_i0e",
    "bessel_k",
    "bessel_ke",
    "whittaker_w",
    "PFQ_MAX_TERMS",
    "PFQ_ARG_CAP",
]

PFQ_MAX_TERMS = 100_000
PFQ_ARG_CAP = 400.0


# -- generalized hypergeometric series ------------------------------------

@dataclass(frozen=True)
class PFQParams:
    numerator: tuple = ()
    denominator: tuple = ()
    argument: complex = 0j

    def __post_init__(self):
        object.__setattr__(self, "numerator", tuple(to_fraction(x) for x in self.numerator))
        object.__setattr__(self, "denominator", tuple(to_fraction(x) for x in self.denominator))
        object.__setattr__(self, "argument", complex(self.argument))
        if len(self.numerator) > len(self.denominator):
            raise DomainError("only entire series (p <= q) are supported")
        for b in self.denominator:
            if b <= 0 and b.denominator == 1:
                raise DomainError(f"denominator parameter {b} is a non-positive integer")


class PFQResult(NamedTuple):
    value: complex
    error: float
    terms: int


def _ratio(a, b, j) -> Fraction:
    """Rational part of ``t_{j+1} / t_j``."""
    num = Fraction(1)
    for x in a:
        num *= x + j
    den = Fraction(j + 1)
    for x in b:
        den *= x + j
    return num / den


def _log2_peak(a, b, absz: float, rel_tol: float, max_terms: int) -> tuple[float, int]:
    """Float pass over term magnitudes: (log2 of the largest term, terms needed)."""
    if absz == 0.0:
        return 0.0, 1
    lz = math.log2(absz)
    logt, peak = 0.0, 0.0
    stop = math.log2(rel_tol) - 8
    for j in range(max_terms):
        r = _ratio(a, b, j)
        if r == 0:
            return peak, j + 1
        logt += math.log2(abs(float(r))) + lz
        peak = max(peak, logt)
        # past the peak the ratios decrease monotonically once j exceeds every |param|
        if logt < peak + stop and logt < stop and abs(float(r)) * absz < 0.5:
            return peak, j + 2
    raise NonConvergenceError(f"pFq needs more than {max_terms} terms (|z| = {absz:g})")


def pfq(params: PFQParams, rel_tol: float = 1e-16, max_terms: int = PFQ_MAX_TERMS) -> PFQResult:
    """Sum ``sum_j [prod (a)_j / prod (b)_j] z^j / j!``.

    The working precision is chosen from the size of the largest term so that
    cancellation between terms cannot eat into the double-precision result.

    Raises
    ------
    DomainError
        If ``|z|`` exceeds :data:`PFQ_ARG_CAP`.
    NonConvergenceError
        If more than ``max_terms`` terms would be needed.
    """
    a, b, z = params.numerator, params.denominator, params.argument
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise DomainError("pFq argument must be finite")
    if abs(z) > PFQ_ARG_CAP:
        raise DomainError(f"|z| = {abs(z):g} exceeds the cancellation-safe cap {PFQ_ARG_CAP:g}")
    peak, nterms = _log2_peak(a, b, abs(z), rel_tol, max_terms)
    prec = 64 + int(math.ceil(max(peak, 0.0))) + 32
    for _ in range(4):
        with gmpy2.context(gmpy2.get_context(), precision=prec):
            zz = gmpy2.mpc(z)
            t = gmpy2.mpc(1)
            s = gmpy2.mpc(1)
            j = 0
            # the float pass bounds terms against the peak; small sums need terms below rel_tol * |sum|
            while j < nterms - 1 or (abs(t) > rel_tol * abs(s) * 2.0 ** -8 and j < max_terms):
                r = _ratio(a, b, j)
                if r == 0:
                    break
                t = t * gmpy2.mpfr(gmpy2.mpq(r.numerator, r.denominator)) * zz
                s = s + t
                j += 1
            else:
                if j >= max_terms:
                    raise NonConvergenceError(f"pFq needs more than {max_terms} terms (|z| = {abs(z):g})")
            nterms = max(nterms, j + 1)
            value = complex(s)
            last = abs(complex(t))
        mag = abs(value)
        lost = peak - (math.log2(mag) if mag > 0 else -1e9)
        if mag == 0 or prec - 64 >= lost + 8:
            break
        prec = 64 + int(math.ceil(lost)) + 64
    err = last + abs(value) * 2.0 ** -52 + 2.0 ** (peak - prec + 8)
    return PFQResult(value, err, nterms)


def hyper(a: Sequence, b: Sequence, z, rel_tol: float = 1e-16) -> np.ndarray | complex:
    """Vectorized ``pFq(a; b; z)`` returning complex values."""
    a = tuple(to_fraction(x) for x in a)
    b = tuple(to_fraction(x) for x in b)
    zs = np.asarray(z, dtype=complex)
    out = np.empty(zs.shape, dtype=complex)
    cache: dict = {}
    for idx, zi in np.ndenumerate(zs):
        v = cache.get(zi)
        if v is None:
            v = pfq(PFQParams(a, b, zi), rel_tol).value
            cache[zi] = v
        out[idx] = v
    return out if out.ndim else complex(out)


# -- Bessel functions of integer order zero --------------------------------

def _trap_nodes(zmax: float) -> np.ndarray:
    # aliasing error ~ |J_N(z)| or I_N(z)/I_0(z); N > 1.5|z| + 40 keeps it below 1e-17
    n = 4 * int(math.ceil((1.5 * zmax + 40) / 4))
    return np.cos(2 * np.pi * np.arange(n) / n)


def bessel_j0(x):
    """``J_0(x) = (1/2pi) int_0^{2pi} cos(x cos t) dt``; accepts real or complex arrays."""
    xs = np.asarray(x)
    if xs.size == 0:
        return xs.astype(float)
    c = _trap_nodes(float(np.max(np.abs(xs))))
    vals = np.cos(np.multiply.outer(xs, c)).mean(axis=-1)
    if np.isrealobj(xs):
        vals = vals.real.astype(float)
    return vals if vals.ndim else vals[()]


def bessel_i0e(x):
    """``exp(-|Re x|) I_0(x)``."""
    xs = np.asarray(x)
    if xs.size == 0:
        return xs.astype(float)
    c = _trap_nodes(float(np.max(np.abs(xs))))
    shift = np.abs(np.real(xs))
    vals = np.exp(np.multiply.outer(xs, c) - shift[..., None]).mean(axis=-1)
    if np.isrealobj(xs):
        vals = vals.real.astype(float)
    return vals if vals.ndim else vals[()]


def bessel_i0(x):
    """``I_0(x) = (1/2pi) int_0^{2pi} exp(x cos t) dt``."""
    xs = np.asarray(x)
    return np.exp(np.abs(np.real(xs))) * bessel_i0e(xs)


# -- modified Bessel function of the second kind ---------------------------

# Taylor coefficients of 1/Gamma(1+x): 1 + g1 x + g2 x^2 + ...
_RGAMMA = (1.0, 0.5772156649015329, -0.6558780715202538, -0.0420026350340952,
           0.1665386113822915, -0.0421977345555443)


def _gam12(nu: float) -> tuple[float, float]:
    """Temme's ``(1/G(1-nu) - 1/G(1+nu)) / (2nu)`` and ``(1/G(1-nu) + 1/G(1+nu)) / 2``."""
    if abs(nu) < 1e-3:
        n2 = nu * nu
        gam1 = -(_RGAMMA[1] + _RGAMMA[3] * n2 + _RGAMMA[5] * n2 * n2)
        gam2 = _RGAMMA[0] + _RGAMMA[2] * n2 + _RGAMMA[4] * n2 * n2
        return gam1, gam2
    gm, gp = 1.0 / math.gamma(1.0 - nu), 1.0 / math.gamma(1.0 + nu)
    return (gm - gp) / (2.0 * nu), (gm + gp) / 2.0


def _k_temme(nu: float, x: float) -> float:
    eps = 1e-17
    x2 = 0.5 * x
    pimu = math.pi * nu
    fact = 1.0 if abs(pimu) < 1e-15 else pimu / math.sin(pimu)
    dl = -math.log(x2)
    e = nu * dl
    fact2 = 1.0 if abs(e) < 1e-15 else math.sinh(e) / e
    gam1, gam2 = _gam12(nu)
    ff = fact * (gam1 * math.cosh(e) + gam2 * fact2 * dl)
    total = ff
    ee = math.exp(e)
    p = 0.5 * ee * math.gamma(1.0 + nu)
    q = 0.5 / ee * math.gamma(1.0 - nu)
    c = 1.0
    dd = x2 * x2
    nu2 = nu * nu
    for i in range(1, 500):
        ff = (i * ff + p + q) / (i * i - nu2)
        c *= dd / i
        p /= i - nu
        q /= i + nu
        delta = c * ff
        total += delta
        if abs(delta) < abs(total) * eps:
            return total
    raise NonConvergenceError("Temme series for K_nu did not converge")


def _ke_steed(nu: float, x: float) -> float:
    eps = 1e-17
    nu2 = nu * nu
    b = 2.0 * (1.0 + x)
    dd = 1.0 / b
    h = delh = dd
    q1, q2 = 0.0, 1.0
    a1 = 0.25 - nu2
    q = c = a1
    a = -a1
    s = 1.0 + q * delh
    for i in range(2, 100_000):
        a -= 2 * (i - 1)
        c = -a * c / i
        qnew = (q1 - b * q2) / a
        q1, q2 = q2, qnew
        q += c * qnew
        b += 2.0
        dd = 1.0 / (b + a * dd)
        delh = (b * dd - 1.0) * delh
        h += delh
        dels = q * delh
        s += dels
        if abs(dels / s) < eps:
            return math.sqrt(math.pi / (2.0 * x)) / s
    raise NonConvergenceError("continued fraction for K_nu did not converge")


def _ke_scalar(nu: float, x: float) -> float:
    if not x > 0:
        raise DomainError(f"K_nu needs x > 0, got {x!r}")
    if not math.isfinite(x):
        return 0.0 if x > 0 else math.nan
    if x <= 2.0:
        return math.exp(x) * _k_temme(nu, x)
    return _ke_steed(nu, x)


def bessel_ke(nu: float, x):
    """Exponentially scaled ``exp(x) K_nu(x)`` for ``|nu| <= 1/2``, ``x > 0``."""
    nu = float(nu)
    if abs(nu) > 0.5:
        raise DomainError("bessel_k supports |nu| <= 1/2 only")
    xs = np.asarray(x, dtype=float)
    if np.any(~(xs > 0)):
        raise DomainError("K_nu needs x > 0")
    out = np.array([_ke_scalar(nu, float(v)) for v in xs.ravel()]).reshape(xs.shape)
    return out if out.ndim else float(out)


def bessel_k(nu: float, x):
    """Modified Bessel function of the second kind ``K_nu(x)`` for ``|nu| <= 1/2``.

    Raises
    ------
    DomainError
        For ``x <= 0`` or ``|nu| > 1/2``.
    """
    xs = np.asarray(x, dtype=float)
    out = np.exp(-xs) * bessel_ke(nu, xs)
    return out if np.ndim(out) else float(out)


# -- Whittaker W -------------------------------------------------------------

def _whittaker_scalar(kappa: float, mu: float, z: float, rel_tol: float) -> float:
    if not z > 0:
        raise DomainError(f"whittaker_w needs z > 0, got {z!r}")
    s = mu - kappa + 0.5
    if not s > 0:
        raise DomainError("integral representation needs mu - kappa + 1/2 > 0")
    p = 2.0 * (mu - kappa)
    e = mu + kappa - 0.5
    rz = math.sqrt(z)

    def integrand(u):
        return math.exp(-u * u) * u ** p * (1.0 + u * u / z) ** e

    # panels resolve the scale change of (1 + u^2/z)^e near u ~ sqrt(z)
    cuts = sorted({rz * f for f in (0.1, 1.0, 10.0) if rz * f < 7.0} | {1.0, 3.0, 7.0})
    edges = [0.0] + cuts + [math.inf]
    total = 0.0
    for lo, hi in zip(edges, edges[1:]):
        val, _ = integrate.quad(integrand, lo, hi, epsabs=0.0, epsrel=rel_tol, limit=400)
        total += val
    return 2.0 * z ** kappa * math.exp(-0.5 * z) / math.gamma(s) * total


def whittaker_w(kappa: float, mu: float, z, rel_tol: float = 1e-12):
    """Whittaker's confluent hypergeometric function ``W_{kappa,mu}(z)`` for real ``z > 0``.

    Evaluated by quadrature of

        W = z^{mu+1/2} e^{-z/2} / Gamma(mu-kappa+1/2)
            * int_0^inf e^{-zt} t^{mu-kappa-1/2} (1+t)^{mu+kappa-1/2} dt

    after substituting ``t = u^2 / z``, which removes the endpoint singularity
    on the line ``kappa = mu``.
    """
    zs = np.asarray(z, dtype=float)
    out = np.array([_whittaker_scalar(float(kappa), float(mu), float(v), rel_tol) for v in zs.ravel()])
    out = out.reshape(zs.shape)
    return out if out.ndim else float(out)
