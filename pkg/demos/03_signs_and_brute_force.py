"""
Sampling signs and exhaustive search
====================================

The certificate quantifies over all 2^(N^2) sign patterns at once. Here we
sample a few patterns on P_8, then settle tiny cases by brute force.
"""

from quadrank.certify import sample_crosscheck, structural_certificate
from quadrank.exactla import rank
from quadrank.gen import fawzi_Q, matrix_P
from quadrank.oracle import sqrt_rank_bruteforce

W, p = matrix_P(8)
bound = structural_certificate(W).bound
ranks = sample_crosscheck(W, p, samples=5, seed=0)
print(f"P_8: 70x70 over Q(sqrt2, sqrt3), sampled ranks {ranks}, certified bound {bound}")

# Q(i, j) = n_i + n_j - 1 has rank 2, yet every signed square root is invertible
Q = fawzi_Q([2, 3, 4])
res = sqrt_rank_bruteforce(Q)
print(f"\nfawziQ(2,3,4): rank {rank(Q)}, square root rank {res.min_rank}"
      f" over {res.classes_enumerated} sign classes")
print(res.witness.to_text(Q))
