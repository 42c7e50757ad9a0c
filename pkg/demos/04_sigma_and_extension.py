"""
Anticommuting matrices and the extension bound
==============================================

Tensor words in real 4x4 Pauli-type matrices give ell pairwise anticommuting
involutions. Stacking B_j o sqrt(W) against them gives a matrix C whose
diagonal blocks, after scaling, are sqrt(p) I, so the certificate machinery
applies to C and bounds max_j rank(B_j o sqrt(W)).
"""

import numpy as np

from quadrank.certify import build_sigma, canonical_decomposition, extension_certify
from quadrank.gen import matrix_P

fam = build_sigma(3)
a = fam.combination([1, 2, 3])
print("sizes:", [s.shape for s in fam.matrices])
print("(s1 + 2 s2 + 3 s3)^2 == 14 I:", bool((a @ a == 14 * np.eye(fam.size, dtype=int)).all()))

W, _ = matrix_P(6)
rep = extension_certify(canonical_decomposition(W, 2), W)
print()
print(rep.to_text())
