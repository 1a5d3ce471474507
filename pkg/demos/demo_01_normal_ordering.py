"""
Normal ordering with displacement operators
===========================================

Polynomials are kept in the canonical order ``creators * d_K * annihilators``.
This walk-through multiplies a few generators, shows how a displacement
operator moves past creation and annihilation operators, and prints the
canonical text that the parser reads back.
"""
# %%
# A one-function model: ``(f, f) = 1`` and one displacement functional with
# ``zeta(f) = 1/2``.  Exact mode keeps every coefficient rational.
from fractions import Fraction

from dfa import ModelContext, a, ad, adjoint, commutator, d, format_canonical, multiply, parse

m = ModelContext(("f",), [[1]], ("z",), [[Fraction(1, 2)]], exact=True)

# %%
# The commutation relation: ``a_f a_f^dagger`` becomes ``a_f^dagger a_f + (f, f)``.
print(format_canonical(multiply(a(m, "f"), ad(m, "f"))))

# %%
# A displacement operator passes a creator by shifting it with ``zeta(f)``,
# and an annihilator on its left sees the opposite shift.
print(format_canonical(multiply(d(m), ad(m, "f"))))
print(format_canonical(multiply(a(m, "f"), d(m))))

# %%
# Displacements form a group under multiplication, and ``d^dagger = d^(-1)``.
print(format_canonical(multiply(d(m, k=Fraction(1, 2)), d(m, k=Fraction(3, 2)))))
print(format_canonical(multiply(d(m), adjoint(d(m)))))

# %%
# The commutator of ``d`` with ``a_f`` is proportional to ``d`` itself.
print(format_canonical(commutator(d(m), a(m, "f"))))

# %%
# Text in, text out: the canonical string parses back to the same polynomial.
p = parse("(a(f) - ad(f))^3 * d(1/2) + dag(d(1))", m)
text = format_canonical(p)
print(text)
assert parse(text, m) == p
