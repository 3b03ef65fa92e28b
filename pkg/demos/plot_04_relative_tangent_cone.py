"""
Relative tangent cone of two branches
=====================================

"""

# two cusps in C^3 with the same tangent line but different osculating planes
from relcone.cone import cone_pair, cone_membership
from relcone.instances import two_cusps

x, y = two_cusps()
c = cone_pair(x, y)
for s in c.subspaces:
    print(s.dim, [[str(v) for v in row] for row in s.basis])
    for p in s.provenance:
        print("   ", p.kind, "eps =", p.epsilon, "n =", p.n_i, "v =", [str(v) for v in p.v_i])

# the union of the two planes is the quadric cone y^2 = z^2
for v in [(0, 1, 1), (1, 5, -5), (0, 1, 2)]:
    print(v, cone_membership(v, c))

# degenerate cases: a smooth branch with itself gives its tangent line, a cusp gives C^2
from relcone.branch import Branch
from relcone.instances import cusp

s = Branch.from_coords(["t", "t^2"])
print(cone_pair(s, s).subspaces[0].dim, cone_pair(cusp(), cusp()).subspaces[0].dim)
