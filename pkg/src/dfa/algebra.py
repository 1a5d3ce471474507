"""The operator algebra generated by ``a_f``, ``a_f^dagger`` and displacements ``d_K``.

Elements are stored in the canonical basis

    a_{g_1}^dagger ... a_{g_m}^dagger  d_K  a_{f_1} ... a_{f_n}

with creators and annihilators sorted by test-function index and a single
displacement factor whose exponent ``K`` is an exact rational vector over
the model's functional basis (``d_K = d_{k_1 zeta_1 + ... + k_L zeta_L}``).
The relations used are

    a_f a_g^dagger = a_g^dagger a_f + (g, f)
    d_K a_g^dagger = (a_g^dagger + K(g)) d_K
    a_f d_K        = d_K (a_f - K(f))
    d_K d_L        = d_{K+L},    d_0 = 1

with ``K(f) = sum_m k_m zeta_m(f)``.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

from .coeffs import GaussianRational, is_zero, to_fraction
from .errors import (
    DeclarationError,
    MissingParameterError,
    ModelError,
    ModelMismatchError,
    TermCountError,
)
from .model import ModelContext

__all__ = [
    "DisplacementExponent",
    "Word",
    "Polynomial",
    "a",
    "ad",
    "d",
    "scalar",
    "normal_form",
    "rewrite_normal_form",
    "multiply",
    "adjoint",
    "commutator",
    "power",
    "exp_truncated",
    "exp_graded",
    "build_field",
    "number_op_discrepancy",
]

_SCALAR_TYPES = (int, float, complex, Fraction, GaussianRational)


class DisplacementExponent(tuple):
    """Rational coefficient vector of a displacement exponent.

    Addition is element-wise (the group law of the displacement operators),
    not tuple concatenation.
    """

    def __new__(cls, coeffs: Iterable = ()):
        return super().__new__(cls, (to_fraction(c) for c in coeffs))

    @classmethod
    def zero(cls, length: int) -> "DisplacementExponent":
        return cls((0,) * length)

    @classmethod
    def unit(cls, length: int, m: int, k=1) -> "DisplacementExponent":
        v = [0] * length
        v[m] = k
        return cls(v)

    def __add__(self, other):
        if len(self) != len(other):
            raise ValueError("exponent length mismatch")
        return DisplacementExponent(x + y for x, y in zip(self, other))

    def __sub__(self, other):
        return self + (-DisplacementExponent(other))

    def __neg__(self):
        return DisplacementExponent(-x for x in self)

    def __mul__(self, k):
        k = to_fraction(k)
        return DisplacementExponent(x * k for x in self)

    __rmul__ = __mul__

    @property
    def is_zero(self) -> bool:
        return not any(self)

    def __repr__(self):
        return f"DisplacementExponent({', '.join(str(x) for x in self)})"


def _add_exp(k1: tuple, k2: tuple) -> tuple:
    return tuple(x + y for x, y in zip(k1, k2))


@dataclass(frozen=True)
class Word:
    """One canonical basis element with its coefficient."""

    coeff: object
    creators: tuple
    displacement: DisplacementExponent
    annihilators: tuple

    @property
    def key(self) -> tuple:
        return (self.creators, tuple(self.displacement), self.annihilators)

    @property
    def degree(self) -> int:
        return len(self.creators) + len(self.annihilators) + int(sum(abs(k) for k in self.displacement))


class Polynomial:
    """A finite linear combination of canonical words over a fixed model.

    Instances are immutable.  Arithmetic operators are available: ``+``,
    ``-``, ``*`` (algebra product or scalar multiple) and ``**``.
    """

    __slots__ = ("model", "_terms")

    def __init__(self, model: ModelContext, terms: Mapping | None = None):
        self.model = model
        clean = {}
        L = model.n_zeta
        N = model.n_functions
        for key, c in (terms or {}).items():
            cr, k, an = key
            cr = tuple(sorted(cr))
            an = tuple(sorted(an))
            k = tuple(to_fraction(x) for x in k)
            if len(k) != L or any(not (0 <= i < N) for i in cr + an):
                raise ModelError(f"word key {key!r} does not fit the model")
            nk = (cr, k, an)
            clean[nk] = clean.get(nk, model.zero) + model.coerce(c)
        self._terms = _pruned(clean, model)

    @classmethod
    def _wrap(cls, model: ModelContext, terms: dict) -> "Polynomial":
        obj = object.__new__(cls)
        obj.model = model
        obj._terms = terms
        return obj

    # -- constructors -------------------------------------------------
    @classmethod
    def constant(cls, model: ModelContext, c=1) -> "Polynomial":
        return cls._wrap(model, _pruned({_identity_key(model): model.coerce(c)}, model))

    @classmethod
    def zero(cls, model: ModelContext) -> "Polynomial":
        return cls._wrap(model, {})

    # -- views --------------------------------------------------------
    @property
    def terms(self) -> Mapping:
        return MappingProxyType(self._terms)

    def words(self) -> list[Word]:
        return [
            Word(c, cr, DisplacementExponent(k), an)
            for (cr, k, an), c in sorted(self._terms.items(), key=lambda kv: _sort_key(kv[0]))
        ]

    def __len__(self):
        return len(self._terms)

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def constant_term(self):
        return self._terms.get(_identity_key(self.model), self.model.zero)

    @property
    def degree(self) -> int:
        return max((w.degree for w in self.words()), default=0)

    @property
    def is_displacement_only(self) -> bool:
        return all(not cr and not an for cr, _, an in self._terms)

    def is_hermitian(self, tol: float | None = None) -> bool:
        return adjoint(self).equals(self, tol)

    def equals(self, other, tol: float | None = None) -> bool:
        other = _lift(other, self.model)
        _check_same_model(self.model, other.model)
        tol = self.model.tol if tol is None else tol
        keys = set(self._terms) | set(other._terms)
        z = self.model.zero
        for k in keys:
            diff = self._terms.get(k, z) - other._terms.get(k, z)
            if not is_zero(diff, self.model.exact, tol):
                return False
        return True

    def to_complex(self) -> "Polynomial":
        """Same element with float coefficients over the float twin of the model."""
        fm = self.model.with_options(exact=False) if self.model.exact else self.model
        return Polynomial(fm, {k: complex(c) for k, c in self._terms.items()})

    # -- arithmetic ---------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, (Polynomial,) + _SCALAR_TYPES):
            return NotImplemented
        other = _lift(other, self.model)
        _check_same_model(self.model, other.model)
        acc = dict(self._terms)
        z = self.model.zero
        for k, c in other._terms.items():
            acc[k] = acc.get(k, z) + c
        return Polynomial._wrap(self.model, _pruned(acc, self.model))

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._wrap(self.model, {k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        if not isinstance(other, (Polynomial,) + _SCALAR_TYPES):
            return NotImplemented
        return self + (-_lift(other, self.model))

    def __rsub__(self, other):
        if not isinstance(other, _SCALAR_TYPES):
            return NotImplemented
        return _lift(other, self.model) - self

    def __mul__(self, other):
        if isinstance(other, Polynomial):
            return multiply(self, other)
        if isinstance(other, _SCALAR_TYPES):
            c = self.model.coerce(other)
            return Polynomial._wrap(self.model, _pruned({k: v * c for k, v in self._terms.items()}, self.model))
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, _SCALAR_TYPES):
            return self * other
        return NotImplemented

    def __truediv__(self, other):
        if not isinstance(other, _SCALAR_TYPES):
            return NotImplemented
        c = self.model.coerce(other)
        return Polynomial._wrap(self.model, _pruned({k: v / c for k, v in self._terms.items()}, self.model))

    def __pow__(self, n):
        return power(self, n)

    def dag(self) -> "Polynomial":
        return adjoint(self)

    def __eq__(self, other):
        if isinstance(other, (Polynomial,) + _SCALAR_TYPES):
            try:
                return self.equals(other)
            except ModelMismatchError:
                return False
        return NotImplemented

    __hash__ = None

    def __str__(self):
        from .parser import format_canonical

        return format_canonical(self)

    def __repr__(self):
        return f"Polynomial({self})"


def _identity_key(model: ModelContext) -> tuple:
    return ((), (Fraction(0),) * model.n_zeta, ())


def _sort_key(key):
    cr, k, an = key
    return (len(cr) + len(an), cr, k, an)


def _pruned(terms: dict, model: ModelContext) -> dict:
    exact, tol = model.exact, model.tol
    return {k: c for k, c in terms.items() if not is_zero(c, exact, tol)}


def _lift(x, model: ModelContext) -> Polynomial:
    if isinstance(x, Polynomial):
        return x
    return Polynomial.constant(model, x)


def _check_same_model(m1: ModelContext, m2: ModelContext):
    if m1 is not m2 and m1 != m2:
        raise ModelMismatchError("operands belong to different models")


# -- generators -------------------------------------------------------

def _fn_index(model: ModelContext, f) -> int:
    if isinstance(f, int):
        if not 0 <= f < model.n_functions:
            raise DeclarationError(f"test function index {f} out of range")
        return f
    return model.index(f)


def _exponent(model: ModelContext, exponent=None, zeta=None, k=1) -> tuple:
    """Resolve several ways of naming a displacement exponent."""
    L = model.n_zeta
    if exponent is None:
        if L == 0:
            raise DeclarationError("model declares no displacement functional")
        m = 0 if zeta is None else (zeta if isinstance(zeta, int) else model.zeta_index(zeta))
        if not 0 <= m < L:
            raise DeclarationError(f"functional index {m} out of range")
        v = [Fraction(0)] * L
        v[m] = to_fraction(k)
        return tuple(v)
    if isinstance(exponent, Mapping):
        v = [Fraction(0)] * L
        for name, c in exponent.items():
            m = name if isinstance(name, int) else model.zeta_index(name)
            v[m] += to_fraction(c)
        return tuple(v)
    v = tuple(to_fraction(c) for c in exponent)
    if len(v) != L:
        raise DeclarationError(f"exponent has {len(v)} components, model has {L} functionals")
    return v


def a(model: ModelContext, f) -> Polynomial:
    """Annihilation operator ``a_f``."""
    i = _fn_index(model, f)
    return Polynomial._wrap(model, {((), (Fraction(0),) * model.n_zeta, (i,)): model.one})


def ad(model: ModelContext, f) -> Polynomial:
    """Creation operator ``a_f^dagger``."""
    i = _fn_index(model, f)
    return Polynomial._wrap(model, {((i,), (Fraction(0),) * model.n_zeta, ()): model.one})


def d(model: ModelContext, exponent=None, *, zeta=None, k=1) -> Polynomial:
    """Displacement operator.

    ``d(model)`` is ``d_{zeta_1}``; ``d(model, k=-2)`` is ``d_{-2 zeta_1}``;
    ``d(model, {"z1": 1, "z2": Fraction(1, 2)})`` is ``d_{zeta_1 + zeta_2/2}``.
    """
    kv = _exponent(model, exponent, zeta, k)
    return Polynomial._wrap(model, {((), kv, ()): model.one})


def scalar(model: ModelContext, c) -> Polynomial:
    return Polynomial.constant(model, c)


# -- products -----------------------------------------------------------

def _contract(ann: tuple, cre: tuple, model: ModelContext) -> dict:
    """Normal order ``a_{ann} a^dagger_{cre}``: sum over partial contractions."""
    states = {(cre, ()): model.one}
    gram = model.gram
    for f in ann:
        nxt = {}
        for (crem, kept), c in states.items():
            key = (crem, kept + (f,))
            nxt[key] = nxt.get(key, model.zero) + c
            for j, g in enumerate(crem):
                key = (crem[:j] + crem[j + 1:], kept)
                nxt[key] = nxt.get(key, model.zero) + c * gram[g][f]
        states = nxt
    return states


def _shift_expand(ops: tuple, exponent: tuple, sign: int, model: ModelContext) -> dict:
    """Expand ``prod_{g in ops} (x_g + sign*K(g))`` into kept-operator tuples."""
    states = {(): model.one}
    if not any(exponent):
        return {ops: model.one}
    for g in ops:
        s = model.shift(exponent, g)
        if sign < 0:
            s = -s
        nxt = {}
        for kept, c in states.items():
            key = kept + (g,)
            nxt[key] = nxt.get(key, model.zero) + c
            if not is_zero(s, model.exact, 0.0):
                nxt[kept] = nxt.get(kept, model.zero) + c * s
        states = nxt
    return states


def _word_product(k1: tuple, k2: tuple, model: ModelContext) -> dict:
    cache = _cache(model)
    hit = cache.get((k1, k2))
    if hit is not None:
        return hit
    c1, e1, a1 = k1
    c2, e2, a2 = k2
    out = {}
    e = _add_exp(e1, e2)
    for (crem, akept), cc in _contract(a1, c2, model).items():
        left = _shift_expand(crem, e1, +1, model)
        right = _shift_expand(akept, e2, -1, model)
        for lk, lc in left.items():
            cr = tuple(sorted(c1 + lk))
            for rk, rc in right.items():
                an = tuple(sorted(rk + a2))
                key = (cr, an)
                out[key] = out.get(key, model.zero) + cc * lc * rc
    # the exponent is common to every term, so it joins the key only at the end
    out = _pruned({(cr, e, an): c for (cr, an), c in out.items()}, model)
    if len(cache) < 200_000:
        cache[(k1, k2)] = out
    return out




def _cache(model: ModelContext) -> dict:
    c = model.__dict__.get("_product_cache")
    if c is None:
        c = {}
        object.__setattr__(model, "_product_cache", c)
    return c


def multiply(p: Polynomial, q: Polynomial, model: ModelContext | None = None) -> Polynomial:
    """Canonical product ``p q``.

    Raises
    ------
    ModelMismatchError
        If ``p`` and ``q`` (or ``model``) disagree.
    TermCountError
        If the accumulated expansion exceeds ``model.max_terms``.
    """
    m = p.model
    _check_same_model(m, q.model)
    if model is not None:
        _check_same_model(m, model)
    acc: dict = {}
    z = m.zero
    cap = m.max_terms
    for k1, v1 in p._terms.items():
        for k2, v2 in q._terms.items():
            v = v1 * v2
            for key, c in _word_product(k1, k2, m).items():
                acc[key] = acc.get(key, z) + v * c
            if len(acc) > cap:
                raise TermCountError(f"product expansion exceeded {cap} terms")
    return Polynomial._wrap(m, _pruned(acc, m))


def adjoint(p: Polynomial) -> Polynomial:
    """Antilinear involution: ``(C d_K A)^dagger = A^dagger d_{-K} C^dagger``."""
    out = {}
    for (cr, k, an), c in p._terms.items():
        out[(an, tuple(-x for x in k), cr)] = c.conjugate()
    return Polynomial._wrap(p.model, out)


def commutator(p: Polynomial, q: Polynomial, model: ModelContext | None = None) -> Polynomial:
    return multiply(p, q, model) - multiply(q, p, model)


def power(p: Polynomial, n: int, model: ModelContext | None = None) -> Polynomial:
    if not isinstance(n, int) or n < 0:
        raise ValueError("power exponent must be a non-negative integer")
    if model is not None:
        _check_same_model(p.model, model)
    result = Polynomial.constant(p.model, 1)
    for _ in range(n):
        result = multiply(result, p)
    return result


def exp_graded(p: Polynomial, order: int, model: ModelContext | None = None) -> list[Polynomial]:
    """Homogeneous components ``[p^j / j! for j in 0..order]``."""
    if order < 0:
        raise ValueError("order must be non-negative")
    m = p.model
    comps = [Polynomial.constant(m, 1)]
    cur = comps[0]
    for j in range(1, order + 1):
        cur = multiply(cur, p) / (Fraction(1, 1) * j if m.exact else float(j))
        comps.append(cur)
    return comps


def exp_truncated(p: Polynomial, order: int, model: ModelContext | None = None) -> Polynomial:
    """``sum_{j <= order} p^j / j!`` in canonical form."""
    total = Polynomial.zero(p.model)
    for comp in exp_graded(p, order, model):
        total = total + comp
    return total


# -- normal ordering of raw words ------------------------------------------

def _tokens(tokens: Sequence, model: ModelContext) -> list:
    """Validate generator tokens into ``('a', i)``, ``('c', i)``, ``('d', K)``."""
    out = []
    for tok in tokens:
        if isinstance(tok, tuple) and len(tok) == 2:
            kind, arg = tok
        else:
            raise DeclarationError(f"malformed generator token {tok!r}")
        if kind == "a":
            out.append(("a", _fn_index(model, arg)))
        elif kind in ("ad", "c"):
            out.append(("c", _fn_index(model, arg)))
        elif kind == "d":
            if isinstance(arg, (int, Fraction, str)) and model.n_zeta == 1:
                arg = (arg,)
            out.append(("d", _exponent(model, arg)))
        else:
            raise DeclarationError(f"unknown generator kind {kind!r}")
    return out


def normal_form(raw_word: Sequence, model: ModelContext, coeff=1, *, strategy: str = "fold",
                rng: random.Random | None = None) -> Polynomial:
    """Canonical polynomial equal to ``coeff * g_1 g_2 ... g_n``.

    ``raw_word`` is a sequence of tokens ``("a", f)``, ``("ad", f)`` or
    ``("d", exponent)``.  ``strategy="fold"`` multiplies the generators one at
    a time; ``strategy="rewrite"`` runs the local rewrite system with redexes
    chosen by ``rng`` (leftmost when ``rng`` is None).
    """
    toks = _tokens(raw_word, model)
    if strategy == "rewrite":
        return rewrite_normal_form(toks, model, coeff, rng=rng, _validated=True)
    if strategy != "fold":
        raise ValueError(f"unknown strategy {strategy!r}")
    result = Polynomial.constant(model, coeff)
    zero = (Fraction(0),) * model.n_zeta
    for kind, arg in toks:
        if kind == "a":
            key = ((), zero, (arg,))
        elif kind == "c":
            key = ((arg,), zero, ())
        else:
            key = ((), arg, ())
        result = multiply(result, Polynomial._wrap(model, {key: model.one}))
    return result


def _redexes(word: tuple, model: ModelContext) -> list[int]:
    """Positions ``i`` where ``word[i]`` (or the pair at ``i, i+1``) can be rewritten."""
    out = []
    for i, (kind, arg) in enumerate(word):
        if kind == "d" and not any(arg):
            out.append(i)
            continue
        if i + 1 == len(word):
            break
        nk, narg = word[i + 1]
        if (kind == "a" and nk in ("c", "d")) or (kind == "d" and nk in ("c", "d")):
            out.append(i)
        elif kind == nk and kind in ("a", "c") and arg > narg:
            out.append(i)
    return out


def _rewrite_at(word: tuple, i: int, model: ModelContext) -> list[tuple]:
    """Apply one rule at position ``i``; returns ``[(coeff, word), ...]``."""
    kind, arg = word[i]
    one = model.one
    if kind == "d" and not any(arg):
        return [(one, word[:i] + word[i + 1:])]
    nk, narg = word[i + 1]
    pre, post = word[:i], word[i + 2:]
    if kind == "a" and nk == "c":
        return [(one, pre + (word[i + 1], word[i]) + post), (model.gram[narg][arg], pre + post)]
    if kind == "d" and nk == "c":
        return [(one, pre + (word[i + 1], word[i]) + post), (model.shift(arg, narg), pre + (word[i],) + post)]
    if kind == "a" and nk == "d":
        return [(one, pre + (word[i + 1], word[i]) + post), (-model.shift(narg, arg), pre + (word[i + 1],) + post)]
    if kind == "d" and nk == "d":
        return [(one, pre + (("d", _add_exp(arg, narg)),) + post)]
    return [(one, pre + (word[i + 1], word[i]) + post)]


def _canonical_key(word: tuple, model: ModelContext) -> tuple:
    cr, an = [], []
    k = (Fraction(0),) * model.n_zeta
    for kind, arg in word:
        if kind == "c":
            cr.append(arg)
        elif kind == "a":
            an.append(arg)
        else:
            k = arg
    return (tuple(cr), k, tuple(an))


def rewrite_normal_form(raw_word: Sequence, model: ModelContext, coeff=1, *,
                        rng: random.Random | None = None, _validated: bool = False) -> Polynomial:
    """Normal form by exhaustive local rewriting.

    Independent of :func:`multiply`; used to check confluence of the rules.
    """
    toks = raw_word if _validated else _tokens(raw_word, model)
    pending = {tuple(toks): model.coerce(coeff)}
    done: dict = {}
    z = model.zero
    steps = 0
    while pending:
        word, c = pending.popitem()
        if is_zero(c, model.exact, 0.0):
            continue
        reds = _redexes(word, model)
        if not reds:
            key = _canonical_key(word, model)
            done[key] = done.get(key, z) + c
            continue
        i = reds[0] if rng is None else rng.choice(reds)
        for cc, w in _rewrite_at(word, i, model):
            pending[w] = pending.get(w, z) + c * cc
        steps += 1
        if len(pending) + len(done) > model.max_terms:
            raise TermCountError(f"rewrite expansion exceeded {model.max_terms} terms")
    return Polynomial._wrap(model, _pruned(done, model))


# -- fields -------------------------------------------------------------

FIELD_KINDS = ("free", "defI", "defI_power", "defII_power", "general")


def _i(model):
    return model.coerce(1j) if not model.exact else GaussianRational(0, 1)


def build_field(kind: str, f, model: ModelContext, *, k: int = 1, zeta=None,
                beta=None, multiplier: Polynomial | None = None,
                offset: Polynomial | None = None) -> Polynomial:
    """Hermitian field polynomial for test function ``f``.

    Parameters
    ----------
    kind : {"free", "defI", "defI_power", "defII_power", "general"}
        ``free``: ``a_f + a_f^dagger``.
        ``defI``: ``i(a_f - a_f^dagger) + alpha d + alpha^* d^dagger``.
        ``defI_power``: ``i(a_f - a_f^dagger) + alpha (d + d^dagger)^k``.
        ``defII_power``: ``i(a_f - a_f^dagger)(d + d^dagger)^k``.
        ``general``: ``i(a_f - a_f^dagger) * multiplier + offset`` for
        caller-supplied displacement-only polynomials.
    k : int
        Power for the ``*_power`` kinds.
    zeta : str or int, optional
        Which displacement functional to use (default: the first).
    beta : rational, optional
        Scale the displacement exponent to ``beta * zeta``; defaults to
        ``model.beta[f]`` when declared, else 1.

    Raises
    ------
    MissingParameterError
        If ``alpha(f)`` or a functional is required but absent.
    """
    if kind not in FIELD_KINDS:
        raise ValueError(f"unknown field kind {kind!r}")
    name = model.test_functions[_fn_index(model, f)]
    af, adf = a(model, name), ad(model, name)
    if kind == "free":
        return af + adf
    im = _i(model) * (af - adf)
    if kind == "general":
        if multiplier is None and offset is None:
            raise MissingParameterError("general field needs a multiplier and/or offset")
        out = Polynomial.zero(model)
        out = out + (im if multiplier is None else multiply(im, _disp_only(multiplier)))
        if offset is not None:
            out = out + _disp_only(offset)
        return out
    if model.n_zeta == 0:
        raise MissingParameterError("field deformation needs a displacement functional")
    if beta is None:
        beta = model.beta.get(name, 1)
    dz = d(model, zeta=zeta, k=beta)
    dzd = adjoint(dz)
    if kind == "defII_power":
        return multiply(im, power(dz + dzd, _nonneg(k)))
    if name not in model.alpha:
        raise MissingParameterError(f"alpha({name}) is not declared in the model")
    al = model.alpha[name]
    if kind == "defI":
        return im + dz * al + dzd * al.conjugate()
    return im + power(dz + dzd, _nonneg(k)) * al


def _nonneg(k) -> int:
    if not isinstance(k, int) or k < 0:
        raise ValueError("k must be a non-negative integer")
    return k


def _disp_only(p: Polynomial) -> Polynomial:
    if not p.is_displacement_only:
        raise ValueError("general field parts must contain displacement operators only")
    return p


# -- number operator ------------------------------------------------------

def number_op_discrepancy(f, g, model: ModelContext, zeta=None) -> Polynomial:
    """Difference of the two reductions of ``n_zeta a_f a_g^dagger``.

    ``n_zeta`` is a formal symbol obeying ``[n, a_h^dagger] = zeta(h) a_h^dagger``
    and ``[n, a_h] = -zeta(h) a_h``; it is kept to the right of every word.
    The first reduction moves ``n`` through ``a_f a_g^dagger`` before normal
    ordering, the second normal orders first.  Both give ``P n + Q``; the
    returned polynomial is ``Q_first - Q_second``, which vanishes exactly when
    ``zeta(f) = zeta(g)`` (or ``(g, f) = 0``).
    """
    if model.n_zeta == 0:
        raise MissingParameterError("number operator needs a displacement functional")
    m = 0 if zeta is None else (zeta if isinstance(zeta, int) else model.zeta_index(zeta))
    fi, gi = _fn_index(model, f), _fn_index(model, g)
    zrow = model.zeta_values[m]

    def weight(creators, annihilators):
        return model.coerce(sum(zrow[h] for h in creators) - sum(zrow[h] for h in annihilators))

    prod = multiply(a(model, fi), ad(model, gi))
    # first: n a_f a_g^dagger = a_f a_g^dagger (n + zeta(g) - zeta(f)), then normal order
    first_n, first_0 = prod, prod * weight((gi,), (fi,))
    # second: normal order, then move n through each canonical word
    second_n = prod
    second_0 = Polynomial._wrap(model, _pruned(
        {key: c * weight(key[0], key[2]) for key, c in prod._terms.items()}, model))
    if not first_n.equals(second_n):
        raise ArithmeticError("number-operator parts disagree")
    return first_0 - second_0
