"""
Characteristic functions against symbolic moments
=================================================

Each field deformation has a closed-form vacuum characteristic function,
written with generalized hypergeometric series.  The Taylor coefficients of
the closed form must agree with moments computed purely symbolically by the
normal-ordering engine.
"""
# %%
import numpy as np

from dfa import build_field, moment, vacuum
from dfa import charfunc as cf
from dfa.verify import _single_model, moment_residual

m = _single_model(1.0, 0.5, 0.5)

# %%
# Hypergeometric parameters for ``i(a - a^dagger)(d + d^dagger)^k``.
for k in range(1, 4):
    num, den, c = cf.defII_power_params(k)
    print(k, [str(x) for x in num], [str(x) for x in den], f"z = {c:g} lam^2 (f,f)")

# %%
# Moments from the closed form, read off a circle in the complex plane, next to
# the symbolic moments of the same field.
for k in (1, 2, 3):
    fld = build_field("defII_power", "f", m, k=k)
    sym = [complex(moment(vacuum(), fld, j)).real for j in range(9)]
    num = cf.moments_from_char(lambda l: cf.char_defII_power(l, 1.0, k), 8, method="contour")
    print(f"k={k}", np.round(sym, 6).tolist(), f"worst residual {np.max(moment_residual(num, sym)):.1e}")

# %%
# The first deformation mixes the free field with ``alpha (d + d^dagger)``;
# its characteristic function carries a Bessel factor.
fld = build_field("defI", "f", m)
sym = [complex(moment(vacuum(), fld, j)).real for j in range(9)]
num = cf.moments_from_char(lambda l: cf.char_defI(l, 1.0, 0.5), 8, method="contour")
print(np.round(sym, 6).tolist(), f"worst residual {np.max(moment_residual(num, sym)):.1e}")

# %%
# Finite differences are also available, but lose accuracy with the order.
fd = cf.moments_from_char(lambda l: cf.char_defII_power(l, 1.0, 1), 4)
print("finite differences", np.round(fd, 9).tolist())
