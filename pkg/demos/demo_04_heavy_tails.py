"""
Heavy tails of the deformed field
=================================

The field ``i(a - a^dagger)(d + d^dagger)`` has variance ``2 (f, f)`` in the
vacuum, and its density has a logarithmic peak at zero and tails much heavier
than the Gaussian with the same variance.
"""
# %%
import math

import numpy as np

from dfa import charfunc as cf
from dfa.cli import FIGURES, RunConfig, cmd_table, table_columns

# %%
# Normalization and variances by singularity-aware quadrature.
for k, var in ((1, 2.0), (2, 6.0)):
    p = cf.make_pair("defII", 1.0, k=k)
    norm = cf.integrate_density(p.density_fn, singular_points=(0.0,), x_domain=(-80, 80))
    m2 = cf.integrate_density(p.density_fn, moment=2, singular_points=(0.0,), x_domain=(-80, 80))
    print(f"k={k}: total {norm:.12f}, variance {m2:.10f} (expected {var:g})")

# %%
# The density transforms back to the hypergeometric characteristic function.
p = cf.make_pair("defII", 1.0, k=1)
lam = np.linspace(-4, 4, 81)
print("max |FT(rho) - chi|:", cf.verify_fourier(p.char_fn, p.density_fn, lam, singular_points=(0.0,)))

# %%
# Upper-tail probability relative to the equal-variance Gaussian.
for t in (2.0, 3.0, 3.66, 4.84, 5.76):
    print(f"{t:5.2f} sigma: {cf.tail_ratio(t):9.2f} times the Gaussian tail")

# %%
# Figure data as CSV: Gaussian, ``k = 1`` and ``k = 2`` densities on a grid.
spec = dict(FIGURES["2"])
family = spec.pop("family")
cols = table_columns(family, spec.pop("deformation"), 1.0, **spec)
csv_text = cmd_table(RunConfig(command="table", grid=(-4.0, 4.0, 9)), family, cols)
print(csv_text.replace("\r\n", "\n"))

# %%
# Near zero the ``k = 1`` density grows like ``-log|x| / sqrt(2 pi^3)``; the
# ratio approaches that constant slowly because of the next-order term.
x = np.array([1e-2, 1e-4, 1e-6])
print(cf.dens_defII(x, 1.0) / -np.log(x), 1 / math.sqrt(2 * math.pi ** 3))
