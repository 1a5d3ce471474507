"""Finite model declarations: test functions, Gram matrix and displacement functionals."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .coeffs import coerce, to_fraction
from .errors import DeclarationError, ModelError

__all__ = ["ModelContext"]

DEFAULT_TOL = 1e-12
DEFAULT_MAX_TERMS = 10**6


@dataclass(frozen=True, eq=False)
class ModelContext:
    """A finite roster of test functions and displacement functionals.

    Parameters
    ----------
    test_functions : sequence of str
        Names ``f_1 .. f_N``.
    gram : N x N array-like
        ``gram[i][j]`` is the inner product ``(f_i, f_j)``.  Must be Hermitian
        with a strictly positive diagonal.
    zeta_basis : sequence of str
        Names of the displacement functionals ``zeta_1 .. zeta_L``.
    zeta_values : L x N array-like of reals
        ``zeta_values[m][i]`` is ``zeta_m(f_i)``.
    alpha : mapping name -> complex, optional
        Amplitudes used by the additive field deformations.
    beta : mapping name -> rational, optional
        Exponent multipliers, so a field may use ``d_{beta(f) zeta}``.
    exact : bool
        Use exact Gaussian-rational coefficients instead of complex floats.
    tol : float
        Absolute pruning tolerance for float coefficients.
    max_terms : int
        Cap on intermediate term counts in products.
    """

    test_functions: tuple
    gram: tuple
    zeta_basis: tuple = ()
    zeta_values: tuple = ()
    alpha: Mapping = field(default_factory=dict)
    beta: Mapping = field(default_factory=dict)
    exact: bool = False
    tol: float = DEFAULT_TOL
    max_terms: int = DEFAULT_MAX_TERMS

    def __post_init__(self):
        names = tuple(self.test_functions)
        zetas = tuple(self.zeta_basis)
        _check_names(names, "test function")
        _check_names(zetas, "displacement functional")
        if set(names) & set(zetas):
            raise ModelError("test function and functional names must be distinct")
        n = len(names)
        rows = [list(r) for r in self.gram]
        if len(rows) != n or any(len(r) != n for r in rows):
            raise ModelError(f"gram must be {n}x{n}")
        gram = tuple(tuple(coerce(v, self.exact) for v in r) for r in rows)
        for i in range(n):
            d = complex(gram[i][i])
            if d.imag != 0 or not d.real > 0:
                raise ModelError(f"gram diagonal ({names[i]},{names[i]}) must be real and positive")
            for j in range(i):
                if gram[i][j] != gram[j][i].conjugate():
                    if self.exact or abs(complex(gram[i][j]) - complex(gram[j][i]).conjugate()) > self.tol:
                        raise ModelError(f"gram is not Hermitian at ({names[i]},{names[j]})")
        zrows = [list(r) for r in self.zeta_values]
        if len(zrows) != len(zetas) or any(len(r) != n for r in zrows):
            raise ModelError(f"zeta_values must be {len(zetas)}x{n}")
        if self.exact:
            zvals = tuple(tuple(to_fraction(v) for v in r) for r in zrows)
        else:
            zvals = tuple(tuple(float(v) for v in r) for r in zrows)
            if not all(np.isfinite(v) for r in zvals for v in r):
                raise ModelError("zeta values must be finite")
        alpha = {}
        for k, v in dict(self.alpha).items():
            if k not in names:
                raise ModelError(f"alpha given for undeclared test function {k!r}")
            alpha[k] = coerce(v, self.exact)
        beta = {}
        for k, v in dict(self.beta).items():
            if k not in names:
                raise ModelError(f"beta given for undeclared test function {k!r}")
            beta[k] = to_fraction(v)
        object.__setattr__(self, "test_functions", names)
        object.__setattr__(self, "zeta_basis", zetas)
        object.__setattr__(self, "gram", gram)
        object.__setattr__(self, "zeta_values", zvals)
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "_one", coerce(1, self.exact))
        object.__setattr__(self, "_zero", coerce(0, self.exact))
        object.__setattr__(self, "_index", {name: i for i, name in enumerate(names)})
        object.__setattr__(self, "_zindex", {name: i for i, name in enumerate(zetas)})

    @property
    def n_functions(self) -> int:
        return len(self.test_functions)

    @property
    def n_zeta(self) -> int:
        return len(self.zeta_basis)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise DeclarationError(f"undeclared test function {name!r}") from None

    def zeta_index(self, name: str) -> int:
        try:
            return self._zindex[name]
        except KeyError:
            raise DeclarationError(f"undeclared displacement functional {name!r}") from None

    def inner(self, i: int, j: int):
        """``(f_i, f_j)`` as a ring element."""
        return self.gram[i][j]

    def shift(self, exponent: Sequence, i: int):
        """``K(f_i) = sum_m k_m zeta_m(f_i)`` as a ring element."""
        total = Fraction(0) if self.exact else 0.0
        for k, row in zip(exponent, self.zeta_values):
            if k:
                total += (k if self.exact else float(k)) * row[i]
        return coerce(total, self.exact)

    def coerce(self, x):
        return coerce(x, self.exact)

    @property
    def one(self):
        return self._one

    @property
    def zero(self):
        return self._zero

    def gram_array(self) -> np.ndarray:
        return np.array([[complex(v) for v in r] for r in self.gram], dtype=complex)

    def zeta_array(self) -> np.ndarray:
        return np.array([[float(v) for v in r] for r in self.zeta_values], dtype=float).reshape(self.n_zeta, self.n_functions)

    def with_options(self, **changes) -> "ModelContext":
        """Copy of the model with some constructor fields replaced."""
        kw = dict(
            test_functions=self.test_functions,
            gram=self.gram,
            zeta_basis=self.zeta_basis,
            zeta_values=self.zeta_values,
            alpha=self.alpha,
            beta=self.beta,
            exact=self.exact,
            tol=self.tol,
            max_terms=self.max_terms,
        )
        kw.update(changes)
        return ModelContext(**kw)

    def _signature(self):
        return (
            self.test_functions,
            self.zeta_basis,
            self.gram,
            self.zeta_values,
            tuple(sorted(self.alpha.items())),
            tuple(sorted(self.beta.items())),
            self.exact,
        )

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, ModelContext):
            return NotImplemented
        return self._signature() == other._signature()

    def __hash__(self):
        return hash((self.test_functions, self.zeta_basis, self.exact))


def _check_names(names, what):
    seen = set()
    for name in names:
        if not isinstance(name, str) or not name.isidentifier():
            raise ModelError(f"invalid {what} name {name!r}")
        if name in ("a", "ad", "d", "dag", "i"):
            raise ModelError(f"{what} name {name!r} is reserved")
        if name in seen:
            raise ModelError(f"duplicate {what} name {name!r}")
        seen.add(name)
