"""
Fixed-vector dimensions across levels
======================================

Computes dim of the Klingen-fixed space for the two generic depth-zero
families at small q, comparing the closed form against the support-sum
route at every point.
"""

from klingen.chartab import family_from_name
from klingen.dims import DimRequest, corollary_value, dim_klingen

type_i = family_from_name("typeI")
type_ii = family_from_name("typeII")

# A small grid: every call runs both routes and checks they agree.
print("level   q=2 typeI   q=2 typeII   q=3 typeI   q=3 typeII")
for n in range(1, 13):
    row = [n]
    for q in (2, 3):
        for fam in (type_i, type_ii):
            report = dim_klingen(DimRequest(q, n, fam), mode="both")
            assert report.agree
            row.append(report.total)
    print("{:>5}   {:>9}   {:>10}   {:>9}   {:>10}".format(*row))

# The q=2 typeI column is also available through the specialized
# piecewise-polynomial evaluator; the first values grow slowly.
print()
print("q=2 typeI via corollary:", [corollary_value(2, n) for n in range(1, 9)])
print("q=3 typeI via corollary:", [corollary_value(3, n) for n in range(1, 9)])
