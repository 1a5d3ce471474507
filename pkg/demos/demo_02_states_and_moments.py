"""
Vacuum, displaced and mixed states
==================================

States are linear functionals on the algebra.  The vacuum keeps only the
words with no net displacement; displaced and mixed states are obtained by
conjugating with sums of displacement operators.
"""
# %%
import math

from dfa import (ModelContext, Polynomial, a, ad, build_field, canonical_words, conjugated, d, displaced,
                 expect, gram_psd_check, mixture, moment, vacuum, vacuum_expect)
from dfa.states import StateFunctional

m = ModelContext(("f1", "f2"), [[1.0, 0.3 + 0.1j], [0.3 - 0.1j, 1.0]], ("z",), [[0.7, 0.2]],
                 alpha={"f1": 0.5})

# %%
# Vacuum values: the two-point function is the Gram entry ``(f2, f1)`` and a
# bare displacement has expectation zero.
print(vacuum_expect(a(m, "f1") * ad(m, "f2")))
print(vacuum_expect(d(m)))

# %%
# The displaced state moves the mean of ``a_f + a_f^dagger`` to ``2 zeta(f)``.
field = a(m, "f1") + ad(m, "f1")
print(complex(expect(displaced(m), field)))

# %%
# A mixture conjugated by ``(d + d^2)/sqrt(2)`` averages the means 1.4 and 2.8.
xi = (d(m) + d(m, k=2)) * (1 / math.sqrt(2))
print(complex(expect(conjugated(xi), field)))
print(complex(expect(mixture(m, {1: 1, 2: 1}), field)))

# %%
# Field moments.  The free field has variance ``(f, f)``; multiplying it by
# ``d + d^dagger`` doubles the variance, and by its square gives six times.
for kind, k in (("free", None), ("defII_power", 1), ("defII_power", 2)):
    fld = build_field(kind, "f1", m, **({"k": k} if k else {}))
    print(kind, k, complex(moment(vacuum(), fld, 2)).real)

# %%
# Positivity at finite scale: the Gram matrix ``omega(b_i^dagger b_j)`` over all
# canonical words of degree at most two is positive semidefinite.
basis = canonical_words(m, 2)
for name, s in (("vacuum", vacuum()), ("displaced", displaced(m)), ("mixture", mixture(m, [1, 0.5j, -0.25]))):
    ok, lo = gram_psd_check(s, basis)
    print(f"{name:9s} {len(basis)} words  psd={ok}  min eigenvalue {lo:.2e}")

# %%
# A functional with a negative weight is caught immediately.
print(gram_psd_check(StateFunctional(xi=Polynomial.constant(m, 1), norm=-1), basis[:4]))
