"""
Census of support double cosets
================================

Enumerates the double-coset families supporting the fixed-vector
computation at a given level, with their closed-form cardinalities and
per-coset dimension contributions, then folds them into a total.
"""

from klingen.chartab import family_from_name
from klingen.cosets import enumerate_supp
from klingen.dims import DimRequest, dim_klingen

q, n = 3, 6

print(f"support census at q={q}, n={n}")
print(f"{'family':<16} {'count':>6}   per-coset dim")
for fam in enumerate_supp(q, n):
    print(f"{fam.family:<16} {fam.count:>6}   {fam.per_coset_dim}")

total = sum(f.count for f in enumerate_supp(q, n))
print(f"{'total cosets':<16} {total:>6}")

# Each family's per-coset dimension is a polynomial tag in q; weighting
# the counts by its value and summing gives the fixed-space dimension.
for name in ("typeI", "typeII"):
    report = dim_klingen(DimRequest(q, n, family_from_name(name)), mode="sum")
    print(f"dim for {name}: {report.total}")
