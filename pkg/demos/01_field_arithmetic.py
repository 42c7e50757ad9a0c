"""
Exact arithmetic in Q(sqrt 2, sqrt 3, ...)
==========================================

Elements are sums of rational multiples of square roots of squarefree
integers. Everything below is exact; decimals only appear when asked for.
"""

from quadrank.numfield import FieldPolynomial, approximate, field_make, parse_element, sqrt_of_integer, sqrt_root_multiplicity

K = field_make([2, 3])
r2, r3 = sqrt_of_integer(K, 2), sqrt_of_integer(K, 3)

# sqrt6 * sqrt2 collapses to 2 sqrt3
print("sqrt6 * sqrt2 =", sqrt_of_integer(K, 6) * r2)

a = 1 + r2 + r3
inv = a.invert()
print("1/(1+sqrt2+sqrt3) =", inv)
print("check:", a * inv)
print("to 15 digits:", approximate(inv, 15))

# the text form parses back to the same bytes
text = inv.to_text()
assert parse_element(text, K).to_text() == text

# x^2 - 3 divides q exactly twice, and +sqrt3 and -sqrt3 are hit equally often
Q2 = field_make([2])
x = FieldPolynomial.x(Q2)
q = (x ** 2 - 3) ** 2 * (x + sqrt_of_integer(Q2, 2))
print("multiplicity of +-sqrt3 in q:", sqrt_root_multiplicity(q, 3))
