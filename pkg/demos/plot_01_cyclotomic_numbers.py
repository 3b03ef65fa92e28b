"""
Exact arithmetic with roots of unity
====================================

"""

# numbers live in Q(zeta_N) and are stored reduced modulo the N-th cyclotomic polynomial
from relcone.cyclo import CyclotomicNumber, kth_root, root_of_unity, to_complex

z3 = root_of_unity(3)
print(z3, z3 ** 3, 1 + z3 + z3 ** 2)

# mixed fields are lifted to a common conductor
i = root_of_unity(4)
print(i * z3, (i * z3).conductor)

# the same value prints the same way whatever field it was built in
print(root_of_unity(6, 2) == z3, CyclotomicNumber.parse("-z3^1 - 1") == z3 ** 2)

# k-th roots are available when the value is (rational) * (root of unity)
print(kth_root(CyclotomicNumber.from_rational(-8), 3))
print(kth_root(CyclotomicNumber.from_rational(2), 2))   # None: sqrt(2) is not of that form

# numeric value
print(to_complex(z3), complex(z3))
