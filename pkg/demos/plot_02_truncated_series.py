"""
Truncated power series
======================

"""

# series carry their truncation order, products and compositions keep only proven terms
from relcone.series import TruncatedSeries

S = TruncatedSeries.parse
a = S("t + t^2 + O(t^6)")
b = S("1 - t + t^3")
print(a * b)
print(a.compose(S("t^2")))

# compositional inverse and k-th roots of unit series
g = a.revert(trunc=8)
print(g)
print(a.compose(g).truncate(8))

u = S("1 + t").kth_root(2, trunc=6)
print(u, (u ** 2).truncate(6))

# orders: an exact zero is decided, a truncated zero is only zero so far
print(S("t^3 + t^4").ord(), S("O(t^5)").ord())
