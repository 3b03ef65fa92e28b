"""
Projective join description
===========================

"""

# the cone at an intersection point P is lifted to P^n, one component per plane or line
from relcone.cyclo import CyclotomicNumber
from relcone.instances import two_cusps
from relcone.join import PointData, ProjectivePoint, join_report

P = ProjectivePoint(tuple(CyclotomicNumber.from_rational(v) for v in (1, 0, 0, 0)))
x, y = two_cusps()
rep = join_report([PointData(P, 0, (x,), (y,))])
for P, chart, comps in rep.points:
    print("P =", P, "chart", chart)
    for comp in comps:
        print("   ", comp.to_json()["theorem_case"], "dim", comp.proj_dim)
        for p in comp.plucker_sample():
            print("      plucker", [str(v) for v in p])

# the lines J0 and the tangent family are markers, not enumerated
print(sorted(rep.to_json()["markers"]))
