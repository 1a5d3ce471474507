"""Linear states on the algebra: the vacuum and its displacement conjugates."""
from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .algebra import Polynomial, adjoint, d, multiply, power
from .errors import InvalidStateError
from .model import ModelContext

__all__ = [
    "StateFunctional",
    "NonHermitianWarning",
    "vacuum",
    "conjugated",
    "displaced",
    "mixture",
    "vacuum_expect",
    "expect",
    "moment",
    "gram_psd_check",
    "canonical_words",
]


class NonHermitianWarning(UserWarning):
    """A moment was requested for a field that is not self-adjoint."""


@dataclass(frozen=True)
class StateFunctional:
    """``A -> phi_0(Xi A Xi^dagger) / N``; ``xi=None`` is the vacuum itself."""

    xi: Polynomial | None = None
    norm: object = 1

    @property
    def kind(self) -> str:
        return "vacuum" if self.xi is None else "conjugated"


def vacuum() -> StateFunctional:
    return StateFunctional()


def conjugated(xi: Polynomial) -> StateFunctional:
    """State conjugated by a combination of displacement operators.

    The normalization ``N = phi_0(Xi Xi^dagger)`` is computed here.

    Raises
    ------
    InvalidStateError
        If ``xi`` contains creation or annihilation operators, or ``N = 0``.
    """
    if not xi.is_displacement_only:
        raise InvalidStateError("conjugating element must contain displacement operators only")
    n = vacuum_expect(multiply(xi, adjoint(xi)))
    if abs(complex(n)) == 0:
        raise InvalidStateError("conjugating element has zero norm")
    return StateFunctional(xi=xi, norm=n)


def displaced(model: ModelContext, k=1, zeta=None) -> StateFunctional:
    """``phi_d(A) = phi_0(d_{k zeta} A d_{k zeta}^dagger)``."""
    return conjugated(d(model, zeta=zeta, k=k))


def mixture(model: ModelContext, xi: Mapping | Sequence, zeta=None) -> StateFunctional:
    """``Xi = sum_k xi_k d_zeta^k``; a sequence is indexed by ``k = 0, 1, ...``."""
    items = xi.items() if isinstance(xi, Mapping) else enumerate(xi)
    total = Polynomial.zero(model)
    for k, c in items:
        total = total + d(model, zeta=zeta, k=k) * c
    return conjugated(total)


def vacuum_expect(p: Polynomial):
    """Coefficient of the identity word."""
    return p.constant_term()


def expect(s: StateFunctional, p: Polynomial, model: ModelContext | None = None):
    if s.xi is None:
        return vacuum_expect(p)
    val = vacuum_expect(multiply(multiply(s.xi, p, model), adjoint(s.xi)))
    return val / p.model.coerce(s.norm)


def moment(s: StateFunctional, field: Polynomial, order: int, model: ModelContext | None = None):
    """``expect(s, field**order)``.

    Emits :class:`NonHermitianWarning` for a non-self-adjoint field.  For a
    self-adjoint field a non-negligible imaginary part raises ArithmeticError.
    """
    herm = field.is_hermitian()
    if not herm:
        warnings.warn("moment of a non-Hermitian field", NonHermitianWarning, stacklevel=2)
    val = expect(s, power(field, order, model), model)
    if herm:
        z = complex(val)
        if abs(z.imag) > 1e-9 * abs(z.real) + 1e-12:
            raise ArithmeticError(f"Hermitian moment has imaginary part {z.imag!r}")
    return val


def gram_psd_check(s: StateFunctional, basis: Sequence[Polynomial], model: ModelContext | None = None,
                   tol: float = 1e-9) -> tuple[bool, float]:
    """Check that ``M[i, j] = s(b_i^dagger b_j)`` is Hermitian positive semidefinite.

    Returns ``(ok, min_eigenvalue)``; eigenvalues down to
    ``-tol * max(1, spectral_radius)`` are accepted.
    """
    if not basis:
        raise ValueError("basis must be non-empty")
    n = len(basis)
    adj = [adjoint(b) for b in basis]
    M = np.empty((n, n), dtype=complex)
    for i in range(n):
        for j in range(n):
            M[i, j] = complex(expect(s, multiply(adj[i], basis[j]), model))
    scale = max(1.0, float(np.max(np.abs(M))))
    if not np.allclose(M, M.conj().T, rtol=0, atol=tol * scale):
        return False, float("nan")
    w = np.linalg.eigvalsh((M + M.conj().T) / 2)
    radius = max(1.0, float(np.max(np.abs(w))))
    lo = float(w[0])
    return bool(lo >= -tol * radius), lo


def canonical_words(model: ModelContext, max_degree: int, zeta_indices: Sequence[int] | None = None) -> list[Polynomial]:
    """All canonical words of degree ``<= max_degree`` with integer displacement powers.

    Degree counts creators, annihilators and ``sum |k_m|``.
    """
    N, L = model.n_functions, model.n_zeta
    zs = list(range(L)) if zeta_indices is None else list(zeta_indices)
    out = []
    for deg_k in range(max_degree + 1):
        for kvec in _int_vectors(len(zs), deg_k):
            expo = [Fraction(0)] * L
            for m, k in zip(zs, kvec):
                expo[m] = Fraction(k)
            rest = max_degree - deg_k
            for nc in range(rest + 1):
                for na in range(rest - nc + 1):
                    for cr in itertools.combinations_with_replacement(range(N), nc):
                        for an in itertools.combinations_with_replacement(range(N), na):
                            out.append(Polynomial._wrap(model, {(cr, tuple(expo), an): model.one}))
    return out


def _int_vectors(n: int, total: int):
    """Integer vectors of length ``n`` with ``sum |v_i| == total``."""
    if n == 0:
        if total == 0:
            yield ()
        return
    for first in range(-total, total + 1):
        for rest in _int_vectors(n - 1, total - abs(first)):
            yield (first,) + rest
