"""
Bringing a pair of branches to standard form
============================================

"""

# a pair sharing a tangent line is moved by one linear map so the tangent is e1,
# then each branch is reparametrized so its first coordinate is exactly t^k
from relcone.branch import Branch, normalize_pair

x = Branch.from_coords(["t^2 + t^3", "t^5"], label="x")
y = Branch.from_coords(["t^2", "t^7"], label="y")
st = normalize_pair(x, y, 12, 12)
print(type(st).__name__)
print(st.xs.coords)
print(st.xs.param)

# transversal pairs are left alone
st = normalize_pair(Branch.from_coords(["t", "0"]), Branch.from_coords(["0", "t"]))
print(type(st).__name__, st.tangent_x, st.tangent_y)
