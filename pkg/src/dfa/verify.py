"""Verification suites: algebraic laws, positivity, exponential identities and numerics.

Every suite returns a :class:`SuiteReport`; :meth:`SuiteReport.to_dict` gives
the JSON report schema::

    {"suite": str, "passed": bool,
     "checks": [{"name": str, "passed": bool, "residual": float,
                 "tolerance": float, "detail": str}, ...]}

Suites are deterministic: all randomness is drawn from seeded generators.
"""
from __future__ import annotations

import math
import random
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from . import charfunc as cf
from .algebra import (
    Polynomial,
    a,
    ad,
    adjoint,
    build_field,
    d,
    exp_graded,
    multiply,
    normal_form,
    number_op_discrepancy,
    rewrite_normal_form,
)
from .coeffs import GaussianRational
from .model import ModelContext
from .specfun import bessel_i0, bessel_j0, bessel_k, hyper, whittaker_w
from .states import canonical_words, displaced, gram_psd_check, mixture, moment, vacuum

__all__ = [
    "Check",
    "SuiteReport",
    "SUITES",
    "run_suite",
    "random_word",
    "random_polynomial",
    "algebra_suite",
    "positivity_suite",
    "bch_suite",
    "charfunc_suite",
    "fourier_suite",
    "tails_suite",
    "whittaker_suite",
]


@dataclass
class Check:
    name: str
    passed: bool
    residual: float
    tolerance: float
    detail: str = ""


@dataclass
class SuiteReport:
    suite: str
    checks: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name: str, residual: float, tolerance: float, detail: str = "", passed: bool | None = None):
        residual = float(residual)
        ok = bool(residual <= tolerance) if passed is None else bool(passed)
        self.checks.append(Check(name, ok, residual, float(tolerance), detail))

    def extend(self, other: "SuiteReport"):
        self.checks.extend(other.checks)

    def to_dict(self) -> dict:
        return {"suite": self.suite, "passed": self.passed, "checks": [asdict(c) for c in self.checks]}

    def summary(self) -> str:
        n_ok = sum(c.passed for c in self.checks)
        lines = [f"{self.suite}: {n_ok}/{len(self.checks)} checks passed"]
        lines += [f"  FAIL {c.name}: residual {c.residual:.3g} > {c.tolerance:.3g} {c.detail}".rstrip()
                  for c in self.checks if not c.passed]
        return "\n".join(lines)


# -- random instances ---------------------------------------------------------

def _rand_rational(rng: random.Random, num: int = 3, den: int = 3) -> Fraction:
    return Fraction(rng.randint(-num, num), rng.randint(1, den))


def _rand_coeff(rng: random.Random, model: ModelContext):
    re_, im = _rand_rational(rng), _rand_rational(rng)
    if model.exact:
        return GaussianRational(re_, im)
    return complex(float(re_), float(im))


def random_word(rng: random.Random, model: ModelContext, max_degree: int = 4) -> list:
    """Random generator tokens with at most ``max_degree`` creators and annihilators."""
    n = rng.randint(0, max_degree)
    toks = []
    for _ in range(n):
        kind = rng.choice(("a", "ad"))
        toks.append((kind, rng.randrange(model.n_functions)))
    for _ in range(rng.randint(0, 2)):
        if model.n_zeta:
            expo = [Fraction(0)] * model.n_zeta
            expo[rng.randrange(model.n_zeta)] = Fraction(rng.choice((-2, -1, 1, 2)), rng.choice((1, 1, 2)))
            toks.insert(rng.randint(0, len(toks)), ("d", tuple(expo)))
    return toks


def random_polynomial(rng: random.Random, model: ModelContext, max_degree: int = 4, max_terms: int = 2) -> Polynomial:
    out = Polynomial.zero(model)
    for _ in range(rng.randint(1, max_terms)):
        out = out + normal_form(random_word(rng, model, max_degree), model, _rand_coeff(rng, model))
    return out


def random_model(rng: random.Random, n_functions: int, n_zeta: int, exact: bool = True) -> ModelContext:
    """Model with a random Hermitian positive definite rational Gram matrix."""
    names = [f"f{i + 1}" for i in range(n_functions)]
    B = [[GaussianRational(_rand_rational(rng, 2, 2), _rand_rational(rng, 2, 2)) for _ in range(n_functions)]
         for _ in range(n_functions)]
    gram = [[sum((B[k][i].conjugate() * B[k][j] for k in range(n_functions)), GaussianRational(0, 0))
             for j in range(n_functions)] for i in range(n_functions)]
    for i in range(n_functions):
        gram[i][i] = gram[i][i] + 1
    if not exact:
        gram = [[complex(v) for v in r] for r in gram]
    zetas = [f"z{m + 1}" for m in range(n_zeta)]
    zvals = [[_rand_rational(rng, 3, 4) for _ in names] for _ in zetas]
    return ModelContext(tuple(names), gram, tuple(zetas), zvals, exact=exact)


# -- algebra -----------------------------------------------------------------

def algebra_suite(model: ModelContext | None = None, instances: int = 250, seed: int = 20240611) -> SuiteReport:
    """Associativity, confluence, adjoint antihomomorphism and the displacement group law.

    Each instance draws a random exact model (2 or 3 test functions, 1 or 2
    functionals) unless ``model`` is given, in which case an exact copy of it
    is used throughout.
    """
    rng = random.Random(seed)
    rep = SuiteReport("algebra")
    fails = {"associativity": 0, "confluence": 0, "adjoint": 0, "group_law": 0}
    for _ in range(instances):
        if model is None:
            m = random_model(rng, rng.choice((2, 3)), rng.choice((1, 2)))
        else:
            m = model if model.exact else model.with_options(exact=True)
        p, q, r = (random_polynomial(rng, m, 4) for _ in range(3))
        if not multiply(multiply(p, q), r).equals(multiply(p, multiply(q, r))):
            fails["associativity"] += 1
        word = random_word(rng, m, 4)
        c = _rand_coeff(rng, m)
        if not rewrite_normal_form(word, m, c, rng=random.Random(rng.random())).equals(normal_form(word, m, c)):
            fails["confluence"] += 1
        if not adjoint(multiply(p, q)).equals(multiply(adjoint(q), adjoint(p))):
            fails["adjoint"] += 1
        K = tuple(_rand_rational(rng) for _ in range(m.n_zeta))
        L = tuple(_rand_rational(rng) for _ in range(m.n_zeta))
        lhs = multiply(d(m, K), d(m, L))
        rhs = d(m, tuple(x + y for x, y in zip(K, L)))
        inv = multiply(d(m, K), adjoint(d(m, K)))
        if not (lhs.equals(rhs) and inv.equals(Polynomial.constant(m, 1))):
            fails["group_law"] += 1
    for name, n in fails.items():
        rep.add(name, n, 0, f"{n} failures in {instances} instances")
    rep.extend(relations_suite(model))
    rep.extend(number_operator_suite(seed=seed + 1))
    return rep


def relations_suite(model: ModelContext | None = None) -> SuiteReport:
    """Defining commutation relations on the declared generators."""
    rep = SuiteReport("relations")
    m = model if model is not None else random_model(random.Random(7), 2, 1)
    if not m.exact:
        m = m.with_options(exact=True)
    worst = 0
    for i in range(m.n_functions):
        for j in range(m.n_functions):
            ccr = multiply(a(m, i), ad(m, j)) - multiply(ad(m, j), a(m, i))
            worst += not ccr.equals(Polynomial.constant(m, m.gram[j][i]))
            worst += not (multiply(a(m, i), a(m, j)) - multiply(a(m, j), a(m, i))).is_zero
        for z in range(m.n_zeta):
            dz = d(m, zeta=z)
            for gen in (a(m, i), ad(m, i)):
                comm = multiply(dz, gen) - multiply(gen, dz)
                worst += not comm.equals(dz * m.zeta_values[z][i])
    rep.add("commutation_relations", worst, 0)
    return rep


def number_operator_suite(pairs: int = 100, seed: int = 5) -> SuiteReport:
    """``number_op_discrepancy`` vanishes exactly when ``zeta(f) = zeta(g)``."""
    rng = random.Random(seed)
    rep = SuiteReport("number_operator")
    wrong = 0
    for n in range(pairs):
        zf = _rand_rational(rng, 4, 4)
        zg = zf if n % 2 == 0 else _rand_rational(rng, 4, 4)
        g = GaussianRational(_rand_rational(rng, 2, 3), _rand_rational(rng, 2, 3))
        if g == 0:
            g = GaussianRational(1, 0)
        m = ModelContext(("f", "g"), [[1, g], [g.conjugate(), 2]], ("z",), [[zf, zg]], exact=True)
        vanishes = number_op_discrepancy("f", "g", m).is_zero
        wrong += vanishes != (zf == zg)
    rep.add("number_op_discrepancy_iff_equal_zeta", wrong, 0, f"{pairs} random pairs")
    return rep


# -- positivity ---------------------------------------------------------------

def positivity_suite(model: ModelContext, tol: float = 1e-9) -> SuiteReport:
    """Gram matrices of the degree <= 2 canonical word basis are positive semidefinite."""
    rep = SuiteReport("positivity")
    basis = canonical_words(model, 2)
    states = {"vacuum": vacuum()}
    if model.n_zeta:
        states["displaced"] = displaced(model)
        states["mixture"] = mixture(model, [1, 0.5j, -0.25])
    for name, s in states.items():
        ok, lo = gram_psd_check(s, basis, model, tol)
        rep.add(f"gram_psd[{name}]", max(0.0, -lo), tol, f"min eigenvalue {lo:.3g}, {len(basis)} words", passed=ok)
    return rep


# -- exponential identities -----------------------------------------------------------

def _exact(model: ModelContext) -> ModelContext:
    return model if model.exact else model.with_options(exact=True)


def bch_suite(model: ModelContext, max_order: int = 6) -> SuiteReport:
    """Exponential identities compared degree by degree in exact arithmetic.

    Both sides are graded by total degree in the exponent parameter, so each
    identity holds exactly component by component:

    * ``d_{k zeta} e^{i lam a^dagger} = e^{i lam (a^dagger + k zeta(f))} d_{k zeta}``
    * ``d_{k zeta} e^{i lam a} = e^{i lam (a + k zeta(f))} d_{k zeta}``
    * ``e^X a = (a + Y) e^X`` with ``X = alpha d - alpha^* d^dagger`` and
      ``Y = zeta(f)(alpha d + alpha^* d^dagger)``
    * ``e^{X/2} (a + a^dagger) e^{-X/2} = a + a^dagger + Y``
    """
    m = _exact(model)
    rep = SuiteReport("bch")
    I = GaussianRational(0, 1)
    lam = Fraction(2, 3)
    alpha = GaussianRational(Fraction(1, 2), Fraction(-1, 3))
    for fi in range(m.n_functions):
        f = m.test_functions[fi]
        for z in range(m.n_zeta):
            zf = m.zeta_values[z][fi]
            for k in (1, -2):
                dk = d(m, zeta=z, k=k)
                for gen_name, gen in (("ad", ad(m, f)), ("a", a(m, f))):
                    lhs = exp_graded(gen * (I * lam), max_order)
                    rhs = exp_graded((gen + k * zf) * (I * lam), max_order)
                    bad = sum(not multiply(dk, L).equals(multiply(R, dk)) for L, R in zip(lhs, rhs))
                    rep.add(f"d^k exp(i lam {gen_name}) [{f},{m.zeta_basis[z]},k={k}]", bad, 0,
                            f"orders 0..{max_order}")
            dz = d(m, zeta=z)
            X = dz * alpha - adjoint(dz) * alpha.conjugate()
            Y = (dz * alpha + adjoint(dz) * alpha.conjugate()) * zf
            af = a(m, f)
            ex = exp_graded(X, max_order)
            bad = 0
            for j in range(max_order + 1):
                lhs = multiply(ex[j], af)
                rhs = multiply(af, ex[j]) + (multiply(Y, ex[j - 1]) if j else Polynomial.zero(m))
                bad += not lhs.equals(rhs)
            rep.add(f"exp(X) a = (a + Y) exp(X) [{f},{m.zeta_basis[z]}]", bad, 0, f"orders 0..{max_order}")
            half_p = exp_graded(X * Fraction(1, 2), max_order)
            half_m = exp_graded(X * Fraction(-1, 2), max_order)
            phi = a(m, f) + ad(m, f)
            bad = 0
            for n in range(max_order + 1):
                comp = Polynomial.zero(m)
                for j in range(n + 1):
                    comp = comp + multiply(multiply(half_p[j], phi), half_m[n - j])
                want = phi if n == 0 else (Y if n == 1 else Polynomial.zero(m))
                bad += not comp.equals(want)
            rep.add(f"unitary equivalence of a + a^dagger + Y [{f},{m.zeta_basis[z]}]", bad, 0,
                    f"orders 0..{max_order}")
    return rep


# -- characteristic functions against symbolic moments ----------------------------

def _single_model(ff, zf, alpha) -> ModelContext:
    return ModelContext(("f",), [[ff]], ("z",), [[zf]], alpha={"f": alpha})


def char_moment_cases(model: ModelContext) -> list:
    """``(name, char_fn, state, field)`` for the one-measurement families."""
    ff = float(complex(model.gram[0][0]).real)
    zf = float(model.zeta_values[0][0]) if model.n_zeta else 0.5
    al = model.alpha.get(model.test_functions[0], 0.5)
    al = float(complex(al).real) or 0.5
    m = _single_model(ff, zf, al)
    xi = [1.0, 0.5j, -0.25]
    cases = [
        ("chi_0", lambda l: cf.char_free(l, ff), vacuum(), build_field("free", "f", m)),
        ("chi_d", lambda l: cf.char_displaced(l, ff, zf), displaced(m), build_field("free", "f", m)),
        ("chi_c", lambda l: cf.char_mixture(l, ff, zf, xi), mixture(m, xi), build_field("free", "f", m)),
        ("chi_J", lambda l: cf.char_defI(l, ff, abs(al)), vacuum(), build_field("defI", "f", m)),
    ]
    for k in range(0, 4):
        cases.append((f"defI_power[k={k}]", (lambda k: lambda l: cf.char_defI_power(l, ff, al, k))(k), vacuum(),
                      build_field("defI_power", "f", m, k=k)))
    for k in range(1, 4):
        name = "chi_P" if k == 1 else f"defII_power[k={k}]"
        cases.append((name, (lambda k: lambda l: cf.char_defII_power(l, ff, k))(k), vacuum(),
                      build_field("defII_power", "f", m, k=k)))
    return cases


def moment_residual(numeric, symbolic) -> np.ndarray:
    """Per-order relative residual; odd moments that vanish are scaled by ``sigma^j``."""
    numeric = np.asarray(numeric, dtype=complex)
    symbolic = np.asarray(symbolic, dtype=complex)
    var = abs(symbolic[2] - symbolic[1] ** 2) if len(symbolic) > 2 else 1.0
    scale = np.array([max(abs(s), (max(var, 1e-300)) ** (j / 2)) for j, s in enumerate(symbolic)])
    return np.abs(numeric - symbolic) / scale


def charfunc_suite(model: ModelContext, order: int = 8, tol: float = 1e-9) -> SuiteReport:
    """Taylor coefficients of each characteristic function against symbolic moments,
    plus the closed-form hypergeometric identities on ``lam in [0, 3]``."""
    rep = SuiteReport("charfunc")
    for name, chi, state, fld in char_moment_cases(model):
        sym = [complex(moment(state, fld, j)) for j in range(order + 1)]
        num = cf.moments_from_char(chi, order, method="contour")
        res = moment_residual(num, sym)
        rep.add(f"taylor_vs_symbolic[{name}]", float(res.max()), tol, f"orders 0..{order}")
    lam = np.linspace(0.0, 3.0, 61)
    lhs = hyper([Fraction(1, 2)], [1], -2 * lam ** 2)
    rhs = bessel_i0(lam ** 2) * np.exp(-lam ** 2)
    rep.add("1F1(1/2;1;-2 lam^2) = I0(lam^2) exp(-lam^2)", np.max(np.abs(lhs - rhs)), 1e-10)
    worst = 0.0
    for al in (0.25, 1.0):
        lhs = hyper([Fraction(1, 2)], [1], 4j * lam * al)
        rhs = bessel_j0(2 * lam * al) * np.exp(2j * lam * al)
        worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    rep.add("1F1(1/2;1;4i lam alpha) = J0(2 lam alpha) exp(2i lam alpha)", worst, 1e-10)
    return rep


# -- Fourier pairs, variances, tails -------------------------------------------------

FOURIER_GRID = np.linspace(-4.0, 4.0, 81)
RADIAL_GRID = np.linspace(0.0, 4.0, 41)


def fourier_suite(ff: float = 1.0, tol: float = 1e-5) -> SuiteReport:
    """Closed-form densities transform to their characteristic functions."""
    rep = SuiteReport("fourier")
    lam = FOURIER_GRID
    pairs = [
        ("free", cf.make_pair("free", ff)),
        ("chi_P / rho_P", cf.make_pair("defII", ff, k=1)),
        ("k=2 / rho_P2", cf.make_pair("defII", ff, k=2)),
        ("chi_J / Gaussian*arcsine [|alpha|=1]", cf.make_pair("defI", ff, abs_alpha=1.0)),
    ]
    for name, pair in pairs:
        err = cf.verify_fourier(pair.char_fn, pair.density_fn, lam, singular_points=pair.singular_points)
        rep.add(f"fourier[{name}]", err, tol, "lam in [-4, 4], 81 points")
    F = np.array([[ff, 0.3 * ff], [0.3 * ff, 1.5 * ff]])
    err = cf.verify_fourier_radial(lambda L: cf.char_defII_multi(L, F), lambda X: cf.dens_defII_2d(X, F), F, RADIAL_GRID)
    rep.add("fourier[n=2 chi_P / closed form]", err, tol, "|lam| in [0, 4], radial transform")
    for name, k, var in (("rho_P", 1, 2.0), ("rho_P2", 2, 6.0)):
        pair = cf.make_pair("defII", ff, k=k)
        got = cf.integrate_density(pair.density_fn, moment=2, singular_points=(0.0,), x_domain=(-80 * math.sqrt(ff), 80 * math.sqrt(ff)))
        rep.add(f"variance[{name}] = {var:g} (f,f)", abs(got / (var * ff) - 1), 1e-4)
        norm = cf.integrate_density(pair.density_fn, singular_points=(0.0,), x_domain=(-80 * math.sqrt(ff), 80 * math.sqrt(ff)))
        rep.add(f"normalization[{name}]", abs(norm - 1), 1e-6)
    return rep


TAIL_TARGETS = ((3.66, 10.0), (4.84, 100.0), (5.76, 1000.0))


def tails_suite(tol: float = 0.15) -> SuiteReport:
    """Tail probability of ``rho_P`` over the equal-variance Gaussian tail."""
    rep = SuiteReport("tails")
    for t, target in TAIL_TARGETS:
        r = cf.tail_ratio(t)
        rep.add(f"tail_ratio[{t} sigma] ~ {target:g}", abs(r / target - 1), tol, f"ratio {r:.4g}")
    return rep


def whittaker_suite(tol: float = 1e-7) -> SuiteReport:
    """Whittaker-form densities against their Bessel and elementary reductions."""
    rep = SuiteReport("whittaker")
    z = np.array([0.1, 1.0, 5.0])
    ref = np.sqrt(z / math.pi) * np.array([bessel_k(0.0, v / 2) for v in z])
    rep.add("W_{0,0}(z) = sqrt(z/pi) K0(z/2)", np.max(np.abs(whittaker_w(0.0, 0.0, z) / ref - 1)), tol)
    x = np.linspace(0.05, 12.0, 60)
    one = cf.dens_defII_multi(x[:, None], [[1.0]]) / cf.dens_defII(x, 1.0) - 1
    rep.add("n=1 Whittaker density = rho_P", np.max(np.abs(one)), tol)
    F = np.array([[1.0, 0.3], [0.3, 1.5]])
    g = np.linspace(-6.0, 6.0, 13)
    X = np.array([(u, v) for u in g for v in g if u or v])
    two = cf.dens_defII_multi(X, F) / cf.dens_defII_2d(X, F) - 1
    rep.add("n=2 Whittaker density = closed form", np.max(np.abs(two)), tol)
    return rep


# -- dispatch -----------------------------------------------------------------

SUITES = ("algebra", "positivity", "bch", "charfunc", "fourier", "tails", "all")


def run_suite(name: str, model: ModelContext, tol: float | None = None, order: int | None = None) -> SuiteReport:
    """Run one named suite (or ``all``) against ``model``.

    ``tol`` replaces the default tolerance of every suite that has one;
    ``order`` sets the BCH truncation order and the moment order.
    """
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    t = {"tol": tol} if tol else {}
    runners: dict[str, Callable[[], SuiteReport]] = {
        "algebra": lambda: algebra_suite(model),
        "positivity": lambda: positivity_suite(model, **t),
        "bch": lambda: bch_suite(model, **({"max_order": order} if order is not None else {})),
        "charfunc": lambda: charfunc_suite(model, **({"order": order} if order is not None else {}), **t),
        "fourier": lambda: fourier_suite(float(complex(model.gram[0][0]).real), **t),
        "tails": lambda: tails_suite(**t),
    }
    if name != "all":
        return runners[name]()
    rep = SuiteReport("all")
    for key in SUITES[:-1]:
        rep.extend(runners[key]())
    rep.extend(whittaker_suite(**t))
    return rep
