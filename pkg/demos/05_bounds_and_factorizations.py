"""
Bounds from explicit factorizations
===================================

Upper bounds come from constructions: a nonnegative factorization of F_n
with C(n,2) terms, and the rank-(n+1) signed root A_n of B_n.
"""

from quadrank.gen import cor_slack, lowrank_A
from quadrank.oracle import bounds_report, nonneg_factorization_F, rank_one_psd_from_sqrt, verify_nonneg_factorization

for n in range(2, 7):
    f = nonneg_factorization_F(n)
    print(f"F_{n}: {f.size} nonnegative rank-one terms, exact: {verify_nonneg_factorization(f, cor_slack('F', n))}")

print()
print(bounds_report(cor_slack("F", 5), factorization=nonneg_factorization_F(5)).to_text())

A = lowrank_A(4)
psd = rank_one_psd_from_sqrt(A)
print(f"\nB_4 = A_4 o A_4 has a rank-one PSD factorization of size {psd.r}")
assert psd.target() == cor_slack("B", 4)
