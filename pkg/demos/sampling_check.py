"""
Sampling the stabilizer subgroup of a coset representative
===========================================================

For a support representative g, the reductions of level elements that
conjugate into the level generate a subgroup R_g of the finite
similitude group.  This script estimates R_g by random sampling and
compares it against the predicted named subgroup for g's row.
"""

from klingen import groupfq
from klingen.cosets import enumerate_small_reps, row_of
from klingen.padic import estimate_Rg

q, n = 2, 5

print(f"sampled R_g versus predicted row subgroup at q={q}, n={n}")
print(f"{'representative':<28} {'row':>3} {'sampled':>8} {'predicted':>9} match")
for rep in enumerate_small_reps(n):
    row = row_of(rep, n)
    predicted = groupfq.named_subgroup(f"Row{row}", q)
    sampled = estimate_Rg(rep, n, q, budget=500, seed=11)
    ok = sampled.is_subset_of(predicted) and sampled.order == predicted.order
    print(
        f"{str(rep):<28} {row:>3} {sampled.order:>8} {predicted.order:>9} "
        f"{'yes' if ok else 'NO'}"
    )
