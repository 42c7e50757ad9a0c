"""
A sign-independent square root rank certificate
===============================================

P_n is the slice of the correlation slack matrix at Hamming weight p+1,
with p the prime nearest n/2. Its diagonal is p(p-1) and every off-diagonal
entry only needs square roots of primes below p. That alone forces the
rank of every signed square root to be at least ceil(N/2).
"""

from quadrank.certify import structural_certificate
from quadrank.errors import CertificateRefused
from quadrank.gen import cor_slack, matrix_P, size_bound_check

for n in (4, 6, 8, 10):
    W, p = matrix_P(n)
    cert = structural_certificate(W)
    b = size_bound_check(n)
    print(f"n={n:2d}  N={cert.N:3d}  p={p}  subfield={cert.subfield}  bound={cert.bound}"
          f"  (>= 3^(n/3-1): {b.exp_holds})")

print()
print(structural_certificate(matrix_P(6)[0]).to_text())

# the full slack matrix B_n has a varying diagonal, so no certificate is issued
try:
    structural_certificate(cor_slack("B", 3))
except CertificateRefused as exc:
    print("\ncorB(3) refused:", type(exc).__name__, "-", exc)
