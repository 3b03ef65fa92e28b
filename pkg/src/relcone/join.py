"""Projective assembly of relative tangent cones into a join description.

Points of P^n are homogeneous coordinate tuples; the affine chart ``c`` is
{x_c != 0} with affine coordinates (x_0/x_c, ..., omitted c, ..., x_n/x_c).
Each affine cone component at a point P becomes the projective subspace
spanned by P and the points P + w of its direction vectors w.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from . import linalg
from .branch import Branch, degree, tangent_direction
from .cone import LinearCone, cone_pair
from .cyclo import ONE, ZERO, CyclotomicNumber
from .errors import EqualPoints, InconsistentChart, ParseError
from .series import TruncatedSeries

__all__ = [
    "ProjectivePoint",
    "ProjectiveConeComponent",
    "PointData",
    "JoinReport",
    "lift_cone",
    "join_report",
    "plucker_line",
    "change_chart",
    "CASES",
]

COINCIDENT_SMOOTH = "coincident_smooth"
TRANSVERSAL = "transversal"
SHARED_TANGENT = "shared_tangent"
CASES = {COINCIDENT_SMOOTH: "(i)", TRANSVERSAL: "(ii)(1)", SHARED_TANGENT: "(ii)(2)"}


def _scale_first_nonzero(v) -> tuple:
    v = linalg.vec(v)
    for c in v:
        if c:
            if c == ONE:
                return v
            inv = c.inverse()
            return tuple(x * inv for x in v)
    raise ValueError("zero vector has no projective point")


@dataclass(frozen=True)
class ProjectivePoint:
    coords: tuple

    def __post_init__(self):
        object.__setattr__(self, "coords", _scale_first_nonzero(self.coords))

    @property
    def n(self) -> int:
        return len(self.coords) - 1

    def affine(self, chart: int) -> tuple:
        c = self.coords[chart]
        if not c:
            raise ValueError(f"point {self} is at infinity for chart {chart}")
        inv = c.inverse()
        return tuple(x * inv for i, x in enumerate(self.coords) if i != chart)

    @classmethod
    def from_affine(cls, aff, chart: int) -> "ProjectivePoint":
        aff = list(linalg.vec(aff))
        return cls(tuple(aff[:chart] + [ONE] + aff[chart:]))

    def __str__(self):
        return "(" + ":".join(str(c) for c in self.coords) + ")"

    def to_json(self):
        return [str(c) for c in self.coords]


def _homogenize_direction(w, chart: int) -> tuple:
    w = list(linalg.vec(w))
    return tuple(w[:chart] + [ZERO] + w[chart:])


def plucker_line(P, Q) -> tuple:
    """Plucker coordinates p_ij = P_i Q_j - P_j Q_i (i < j, lex order), scaled."""
    p = P.coords if isinstance(P, ProjectivePoint) else linalg.vec(P)
    q = Q.coords if isinstance(Q, ProjectivePoint) else linalg.vec(Q)
    if len(p) != len(q):
        raise ValueError("points live in different projective spaces")
    minors = [p[i] * q[j] - p[j] * q[i] for i, j in combinations(range(len(p)), 2)]
    if not any(minors):
        raise EqualPoints(f"points coincide: {p} and {q}")
    return _scale_first_nonzero(minors)


@dataclass(frozen=True)
class ProjectiveConeComponent:
    vertex: ProjectivePoint
    basis: tuple              # row-echelon basis of the projective subspace
    case_tag: str
    points: tuple = ()        # spanning points Q with the subspace = Span(P, Q...)
    pairs: tuple = ()
    certified: bool = True

    @property
    def proj_dim(self) -> int:
        return len(self.basis) - 1

    def contains_point(self, q) -> bool:
        return linalg.in_span(q, self.basis)

    def key(self) -> tuple:
        return tuple(tuple(c.canonical() for c in row) for row in self.basis)

    def plucker_sample(self) -> list:
        return [plucker_line(self.vertex, ProjectivePoint(q)) for q in self.points]

    def to_json(self) -> dict:
        return {
            "case": self.case_tag,
            "theorem_case": CASES[self.case_tag],
            "dim": self.proj_dim,
            "span": [[str(c) for c in row] for row in self.basis],
            "points": [[str(c) for c in q] for q in self.points],
            "plucker_sample": [[str(c) for c in p] for p in self.plucker_sample()],
            "pairs": [list(p) for p in self.pairs],
            "certified": self.certified,
        }


def lift_cone(P: ProjectivePoint, chart: int, c: LinearCone, case_tag: str = SHARED_TANGENT,
              pair=None) -> list:
    """Projective closures of the affine cone components at P."""
    P.affine(chart)  # P must be finite in the chart
    out = []
    for s in c.subspaces:
        qs = []
        for w in s.basis:
            d = _homogenize_direction(w, chart)
            qs.append(tuple(a + b for a, b in zip(P.coords, d)))
        basis = linalg.rref([P.coords] + qs)
        certified = all(p.kind != "coincident_up_to_precision" for p in s.provenance)
        pairs = tuple(dict.fromkeys(p.pair for p in s.provenance)) if pair is None else (pair,)
        out.append(ProjectiveConeComponent(P, basis, case_tag, tuple(qs), pairs, certified))
    return out


def _classify(x: Branch, y: Branch, c: LinearCone) -> str:
    if linalg.rank([tangent_direction(x), tangent_direction(y)]) == 2:
        return TRANSVERSAL
    kinds = {p.kind for s in c.subspaces for p in s.provenance}
    if kinds == {"coincident"} and degree(x) == 1 and degree(y) == 1:
        return COINCIDENT_SMOOTH
    return SHARED_TANGENT


def _merge_components(comps: list) -> list:
    merged: dict = {}
    order = []
    for comp in comps:
        k = comp.key()
        if k in merged:
            old = merged[k]
            merged[k] = ProjectiveConeComponent(
                old.vertex, old.basis, old.case_tag, old.points,
                tuple(dict.fromkeys(old.pairs + comp.pairs)), old.certified and comp.certified)
        else:
            merged[k] = comp
            order.append(k)
    comps = [merged[k] for k in order]
    kept = [c for c in comps
            if not any(o.proj_dim > c.proj_dim and all(o.contains_point(r) for r in c.basis)
                       for o in comps)]
    kept.sort(key=lambda c: (c.proj_dim, c.key()))
    return kept


@dataclass(frozen=True)
class PointData:
    point: ProjectivePoint
    chart: int
    xs: tuple
    ys: tuple

    def __post_init__(self):
        aff = self.point.affine(self.chart)
        for b in tuple(self.xs) + tuple(self.ys):
            if b.chart != self.chart:
                raise InconsistentChart(
                    f"branch {b.label!r} uses chart {b.chart}, point {self.point} chart {self.chart}")
            if tuple(b.base_point) != aff:
                raise ParseError(f"branch {b.label!r} does not pass through {self.point}")


@dataclass
class JoinReport:
    mode: str
    points: list = field(default_factory=list)   # [(ProjectivePoint, chart, [components])]
    has_j0_marker: bool = True
    tangent_family_marker: bool = False
    warnings: list = field(default_factory=list)

    def to_json(self) -> dict:
        markers = {
            "J0": "closure of lines through distinct points of X and Y; part of J, not enumerated",
        }
        if self.tangent_family_marker:
            markers["tangent_family"] = "union of tangent lines T_P X over nonsingular P; not enumerated"
        return {
            "mode": self.mode,
            "points": [{"P": P.to_json(), "chart": chart,
                        "components": [c.to_json() for c in comps]}
                       for P, chart, comps in self.points],
            "markers": markers,
            "warnings": list(self.warnings),
        }


def join_report(points, mode: str = "XY", trunc=None, max_trunc=None) -> JoinReport:
    """Per-point cone components of the join of two curves (or a curve with itself).

    In ``XX`` mode the supplied points are the singular points of X and
    each point's Y-branch list must equal its X-branch list.
    """
    if mode not in ("XY", "XX"):
        raise ValueError("mode must be 'XY' or 'XX'")
    report = JoinReport(mode=mode, tangent_family_marker=(mode == "XX"))
    for pd in points:
        if mode == "XX" and tuple(pd.xs) != tuple(pd.ys):
            raise ValueError("XX mode needs identical branch lists at each point")
        comps = []
        for x in pd.xs:
            for y in pd.ys:
                c = cone_pair(x, y, trunc, max_trunc)
                tag = _classify(x, y, c)
                if tag == SHARED_TANGENT and any(p.kind == "coincident_up_to_precision"
                                                 for s in c.subspaces for p in s.provenance):
                    report.warnings.append(
                        f"CoincidentUpToPrecision: pair ({x.label}, {y.label}) at {pd.point}")
                report.warnings.extend(c.warnings)
                comps.extend(lift_cone(pd.point, pd.chart, c, tag, (x.label, y.label)))
        report.points.append((pd.point, pd.chart, _merge_components(comps)))
    report.warnings = list(dict.fromkeys(report.warnings))
    return report


def change_chart(b: Branch, new_chart: int, trunc: int = 40) -> Branch:
    """Re-express a branch in another affine chart containing its point."""
    absolute = list(b.absolute())
    hom = absolute[:b.chart] + [TruncatedSeries.constant(ONE)] + absolute[b.chart:]
    den = hom[new_chart]
    c0 = den.terms.get(0)
    if not c0:
        raise ValueError(f"point is at infinity for chart {new_chart}")
    if den.exact and len(den.terms) == 1:
        coords = [s.scale(c0.inverse()) for i, s in enumerate(hom) if i != new_chart]
    else:
        inv = den.reciprocal(trunc)
        coords = [(s * inv).truncate(trunc) for i, s in enumerate(hom) if i != new_chart]
    point = [s.terms.get(0, ZERO) for s in coords]
    return Branch.from_coords(coords, label=b.label, chart=new_chart, base_point=point)


def points_from_json(doc: dict, trunc_override=None) -> tuple[str, list]:
    mode = doc.get("mode", "XY")
    out = []
    for pdoc in doc.get("points", []):
        chart = int(pdoc.get("chart", 0))
        P = ProjectivePoint(tuple(CyclotomicNumber.parse(c) if isinstance(c, str)
                                  else CyclotomicNumber.from_rational(c) for c in pdoc["P"]))
        aff = [str(c) for c in P.affine(chart)]
        xs = []
        for bdoc in pdoc["X"]:
            bdoc = dict(bdoc)
            bdoc.setdefault("point", aff)
            bdoc.setdefault("chart", chart)
            xs.append(Branch.from_json(bdoc, trunc_override))
        if mode == "XX":
            ys = list(xs)
        else:
            ys = []
            for bdoc in pdoc["Y"]:
                bdoc = dict(bdoc)
                bdoc.setdefault("point", aff)
                bdoc.setdefault("chart", chart)
                ys.append(Branch.from_json(bdoc, trunc_override))
        out.append(PointData(P, chart, tuple(xs), tuple(ys)))
    return mode, out
