"""
Exact arithmetic with roots of unity
====================================

Roots of k-residues live in cyclotomic fields.  Everything below is exact.
"""

# %%
from kdiff import parse_cycnum, root_of_unity
from kdiff.grc import p_nk_evaluate, p_nk_vanishes

z6 = root_of_unity(6)
print((1 + z6) * (1 - z6))
print(z6 ** 6 == 1, root_of_unity(6, 2) == root_of_unity(3))

# %%
# Values compare across orders; parsing accepts the same notation as the CLI.
a = parse_cycnum("1/2+z4")
print(a, a.inverse(), a * a.inverse())
print(a.to_complex())

# %%
# The symmetric polynomial vanishes when some twist of the roots sums to zero.
print(p_nk_vanishes([parse_cycnum("1"), parse_cycnum("1")], 2))
print(p_nk_evaluate([parse_cycnum("2"), parse_cycnum("1")], 2))  # (4 - 1)^2

# %%
# It only sees k-th powers: rotating a root by zeta_k changes nothing.
roots = [parse_cycnum("1"), parse_cycnum("2-z5"), parse_cycnum("z3")]
rotated = [roots[0], roots[1] * root_of_unity(3), roots[2]]
print(p_nk_evaluate(roots, 3) == p_nk_evaluate(rotated, 3))
