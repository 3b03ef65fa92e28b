"""Curve branches and their normalization to the standard form.

A :class:`Branch` stores a germ parametrization translated to the origin:
``coords[i](0) == 0`` and the affine position of the germ in its chart is
kept separately in ``base_point``.  :func:`normalize_pair` brings two
branches through a common point into shared coordinates where both have
the shape ``(t^k, phi_2, ..., phi_n)`` with ``ord phi_i > k``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

from . import linalg
from .cyclo import ONE, ZERO, CyclotomicNumber, kth_root
from .errors import FieldExtensionRequired, ParseError, PrecisionExhausted
from .series import TruncatedSeries, ZeroSoFar

__all__ = [
    "Branch",
    "StandardBranch",
    "Frame",
    "Transversal",
    "SharedTangent",
    "CoincidentInfo",
    "degree",
    "tangent_direction",
    "normalize_pair",
    "pivot_frame",
]


@dataclass(frozen=True)
class Branch:
    coords: tuple
    label: str = ""
    chart: int = 0
    base_point: tuple | None = None

    def __post_init__(self):
        coords = tuple(c if isinstance(c, TruncatedSeries) else TruncatedSeries.parse(c)
                       for c in self.coords)
        if len(coords) < 2:
            raise ValueError("a branch needs at least two coordinates")
        for i, c in enumerate(coords):
            if c.trunc is not None and c.trunc < 1:
                raise ValueError(f"branch {self.label!r}: coordinate {i} has no known terms")
            if c.terms.get(0):
                raise ValueError(f"branch {self.label!r}: coordinate {i} does not vanish at t=0")
        if all(c.exact and not c.terms for c in coords):
            raise ValueError(f"branch {self.label!r} is constant")
        bp = self.base_point
        bp = tuple(ZERO for _ in coords) if bp is None else linalg.vec(bp)
        if len(bp) != len(coords):
            raise ValueError("base point and coordinates differ in dimension")
        object.__setattr__(self, "coords", coords)
        object.__setattr__(self, "base_point", bp)

    @property
    def dim(self) -> int:
        return len(self.coords)

    @property
    def exact(self) -> bool:
        return all(c.exact for c in self.coords)

    @property
    def trunc(self):
        ts = [c.trunc for c in self.coords if c.trunc is not None]
        return min(ts) if ts else None

    @classmethod
    def from_coords(cls, coords, label="", chart=0, base_point=None, trunc=None):
        """Build from absolute coordinate series or strings.

        Constant terms must match ``base_point`` (the origin when omitted);
        they are subtracted so the stored germ sits at 0.
        """
        series = [c if isinstance(c, TruncatedSeries) else TruncatedSeries.parse(c) for c in coords]
        if trunc is not None:
            series = [s.truncate(trunc) for s in series]
        bp = linalg.vec(base_point) if base_point is not None else tuple(ZERO for _ in series)
        if len(bp) != len(series):
            raise ParseError(f"branch {label!r}: point has {len(bp)} entries, coords {len(series)}")
        rel = []
        for i, (s, p) in enumerate(zip(series, bp)):
            c0 = s.terms.get(0, ZERO)
            if c0 != p:
                raise ParseError(f"branch {label!r} does not pass through its point "
                                 f"(coordinate {i}: {c0} != {p})")
            rel.append(s - p if p else s)
        return cls(tuple(rel), label=label, chart=chart, base_point=bp)

    def absolute(self) -> tuple:
        return tuple(s + p if p else s for s, p in zip(self.coords, self.base_point))

    def with_coords(self, coords, **changes) -> "Branch":
        kw = dict(label=self.label, chart=self.chart, base_point=self.base_point)
        kw.update(changes)
        return Branch(tuple(coords), **kw)

    def apply_linear(self, mat) -> "Branch":
        """The image under a linear map of C^n (base point mapped too)."""
        n = self.dim
        out = []
        for row in mat:
            acc = TruncatedSeries.zero()
            for a, s in zip(row, self.coords):
                if a:
                    acc = acc + s.scale(a)
            out.append(acc)
        if len(out) != n:
            raise ValueError("linear map must be square")
        return self.with_coords(out, base_point=linalg.matvec(mat, self.base_point))

    def reparametrize(self, inner: TruncatedSeries, trunc=None) -> "Branch":
        return self.with_coords([s.compose(inner, trunc) for s in self.coords])

    def substitute(self, c, m: int = 1) -> "Branch":
        return self.with_coords([s.substitute(c, m) for s in self.coords])

    def truncate(self, trunc: int) -> "Branch":
        return self.with_coords([s.truncate(trunc) for s in self.coords])

    # -- JSON -------------------------------------------------------------
    def to_json(self) -> dict:
        doc = {
            "label": self.label,
            "chart": self.chart,
            "point": [str(p) for p in self.base_point],
            "coords": [str(s) for s in self.absolute()],
            "exact": self.exact,
        }
        if not self.exact:
            doc["trunc"] = self.trunc
        return doc

    @classmethod
    def from_json(cls, doc: dict, trunc_override=None) -> "Branch":
        try:
            coords = doc["coords"]
        except (KeyError, TypeError) as exc:
            raise ParseError(f"branch object needs 'coords': {doc!r}") from exc
        label = str(doc.get("label", ""))
        chart = int(doc.get("chart", 0))
        point = doc.get("point")
        if point is not None:
            point = [p if not isinstance(p, str) else CyclotomicNumber.parse(p) for p in point]
            point = [CyclotomicNumber.from_rational(p) if isinstance(p, int) else p for p in point]
        exact = bool(doc.get("exact", True))
        trunc = trunc_override
        if trunc is None and not exact:
            trunc = doc.get("trunc")
            if trunc is None:
                raise ParseError(f"branch {label!r}: inexact data needs 'trunc'")
        try:
            return cls.from_coords(coords, label=label, chart=chart, base_point=point,
                                   trunc=None if trunc is None else int(trunc))
        except ValueError as exc:
            if isinstance(exc, ParseError):
                raise
            raise ParseError(str(exc)) from exc


def _name(b: Branch) -> str:
    return b.label or "<unnamed>"


def degree(b: Branch) -> int:
    """Local degree: the minimum order of the coordinate series."""
    finite = [o for o in (c.ord() for c in b.coords) if not isinstance(o, ZeroSoFar)]
    if not finite:
        raise PrecisionExhausted(f"branch {_name(b)}: every coordinate is zero so far",
                                 context=(_name(b), "degree"))
    m = min(finite)
    for c in b.coords:
        o = c.ord()
        if isinstance(o, ZeroSoFar) and not o.exact and o.trunc < m:
            raise PrecisionExhausted(
                f"branch {_name(b)}: a coordinate known only below t^{o.trunc} may lower the degree",
                context=(_name(b), "degree"))
    return m


def tangent_direction(b: Branch) -> tuple:
    """Coefficients of t^deg in each coordinate (unnormalized)."""
    k = degree(b)
    out = []
    for c in b.coords:
        if c.trunc is not None and c.trunc <= k:
            raise PrecisionExhausted(f"branch {_name(b)}: coefficient of t^{k} unknown",
                                     context=(_name(b), "tangent_direction"))
        out.append(c.coefficient(k))
    return tuple(out)


def _proportional(u, v) -> bool:
    return linalg.rank([u, v]) == 1


@dataclass(frozen=True)
class Frame:
    """new coordinates = matrix @ old; old = inverse @ new."""
    matrix: tuple
    inverse: tuple
    pivot: int

    def scaled(self, lam) -> "Frame":
        """Same frame with the first new coordinate multiplied by ``lam``."""
        mat = list(self.matrix)
        mat[0] = tuple(lam * a for a in mat[0])
        inv_lam = lam.inverse()
        inv = tuple(tuple(a * inv_lam if j == 0 else a for j, a in enumerate(r)) for r in self.inverse)
        return Frame(tuple(mat), inv, self.pivot)


def _bezout(a: int, b: int):
    """(u, w) with u*a + w*b == gcd(a, b)."""
    if b == 0:
        return 1, 0
    u, w = _bezout(b, a % b)
    return w, u - (a // b) * w


def _leading_scale(cx, kx: int, cy, ky: int, names):
    """lam with lam*cx a kx-th power and lam*cy a ky-th power, or raise.

    lam = 1 is preferred.  Otherwise cx/cy = s^g with g = gcd(kx, ky) and
    u*kx + w*ky = g give lam*cx = (s^u)^kx and lam*cy = (s^-w)^ky.
    """
    if kth_root(cx, kx) is not None and kth_root(cy, ky) is not None:
        return ONE
    g = math.gcd(kx, ky)
    s = kth_root(cx / cy, g)
    if s is None:
        raise FieldExtensionRequired(
            f"pair ({names[0]}, {names[1]}): ratio {cx / cy} of leading coefficients has no "
            f"{g}-th root of the form rational * root of unity", context=(names, "normalize_pair"))
    u, _ = _bezout(kx, ky)
    return (s ** u) ** kx / cx


def pivot_frame(v) -> Frame:
    """Invertible map sending the line C*v to the first axis.

    The pivot p is the largest index with v[p] != 0 and v is scaled so that
    v[p] = 1; the basis (v, e_j for j != p ascending) is then inverted.
    """
    v = linalg.vec(v)
    n = len(v)
    p = max(i for i, x in enumerate(v) if x)
    vhat = [x / v[p] for x in v]
    others = [j for j in range(n) if j != p]
    # old = vhat * y1 + sum_j e_j * y_(j)   =>  y1 = x_p, y_(j) = x_j - vhat_j x_p
    mat = []
    row = [ZERO] * n
    row[p] = ONE
    mat.append(tuple(row))
    for j in others:
        row = [ZERO] * n
        row[j] = ONE
        row[p] = -vhat[j]
        mat.append(tuple(row))
    inv = [[ZERO] * n for _ in range(n)]
    for i in range(n):
        inv[i][0] = vhat[i]
    for col, j in enumerate(others, start=1):
        inv[j][col] = ONE
    return Frame(tuple(mat), tuple(tuple(r) for r in inv), p)


@dataclass(frozen=True)
class StandardBranch:
    """Branch in the form (t^k, phi_2, ..., phi_n) with ord phi_i > k.

    ``param`` is the substitution t = param(s) applied to the framed input
    and ``param_inverse`` its compositional inverse, so that
    ``source(t) == frame.inverse @ coords(param_inverse(t))``.
    """
    k: int
    coords: tuple
    frame: Frame
    param: TruncatedSeries
    source: Branch

    @cached_property
    def param_inverse(self) -> TruncatedSeries:
        trunc = self.param.trunc
        return self.param.revert(trunc) if trunc is not None else self.param.revert()

    def __post_init__(self):
        first = self.coords[0]
        if not (first.exact and first.items() == [(self.k, ONE)]):
            raise AssertionError("first coordinate is not exactly t^k")
        for c in self.coords[1:]:
            lb = c.ord_lower_bound()
            if lb is not None and lb <= self.k:
                raise AssertionError(f"coordinate of order {lb} <= k={self.k}")

    @property
    def branch(self) -> Branch:
        return self.source.with_coords(self.coords, base_point=tuple(ZERO for _ in self.coords))


@dataclass(frozen=True)
class Transversal:
    x: Branch
    y: Branch
    tangent_x: tuple
    tangent_y: tuple


@dataclass(frozen=True)
class SharedTangent:
    xs: StandardBranch
    ys: StandardBranch
    tangent: tuple


@dataclass(frozen=True)
class CoincidentInfo(SharedTangent):
    """Shared-tangent pair whose inputs are literally the same germ data."""


def _solve_param(f: TruncatedSeries, k: int, rho, order: int) -> TruncatedSeries:
    """Newton iteration for h with f(h(s)) = s^k, h = s/rho + ..., up to O(s^order)."""
    target_k = TruncatedSeries({k: ONE})
    df = f.derivative()
    h = TruncatedSeries({1: rho.inverse()}, 2)
    prec = 2
    while prec < order:
        new = min(2 * prec - 1, order)
        hp = TruncatedSeries(h.terms, new)
        fh, dfh = TruncatedSeries.compose_all([f, df], hp)
        resid = (fh - target_k).shift(-(k - 1))
        slope = dfh.shift(-(k - 1))
        step = (resid * slope.reciprocal()).truncate(new)
        h = (hp - step).truncate(new)
        if h.trunc is None or h.trunc <= prec:
            # input data limits the achievable precision
            break
        prec = h.trunc
    return h


def _standardize(b: Branch, frame: Frame, order: int) -> StandardBranch:
    framed = b.apply_linear(frame.matrix)
    k = degree(framed)
    first = framed.coords[0]
    c = first.coefficient(k)
    if not c:
        raise AssertionError("frame did not send the tangent to the first axis")
    rho = kth_root(c, k)
    if rho is None:
        raise FieldExtensionRequired(
            f"branch {_name(b)}: leading coefficient {c} has no {k}-th root of the form "
            "rational * root of unity", context=(_name(b), "normalize_pair"))
    if first.exact and len(first.terms) == 1:
        h = TruncatedSeries({1: rho.inverse()})    # t = s / rho
        coords = [s.substitute(rho.inverse(), 1) for s in framed.coords]
        coords = [cc.truncate(order) if not cc.exact else cc for cc in coords]
    else:
        h = _solve_param(first, k, rho, order)
        coords = TruncatedSeries.compose_all(framed.coords, h, order)
        if not coords[0].agrees_with(TruncatedSeries({k: ONE})):
            raise AssertionError("reparametrization failed to produce t^k")
    if coords[0].trunc is not None and coords[0].trunc <= k:
        raise PrecisionExhausted(f"branch {_name(b)}: too few terms to normalize",
                                 context=(_name(b), "normalize_pair"))
    coords[0] = TruncatedSeries({k: ONE})
    for i, cc in enumerate(coords[1:], start=1):
        lb = cc.ord_lower_bound()
        if lb is not None and lb <= k:
            raise PrecisionExhausted(
                f"branch {_name(b)}: coordinate {i} not known beyond t^{k} after normalization",
                context=(_name(b), "normalize_pair"))
    return StandardBranch(k, tuple(coords), frame, h, b)


def normalize_pair(x: Branch, y: Branch, order_x: int | None = None, order_y: int | None = None):
    """Classify a pair by tangent lines and bring shared-tangent pairs to standard form.

    ``order_x``/``order_y`` bound the number of series terms computed for
    each normalized branch (exact inputs whose first coordinate is already a
    monomial stay exact regardless).
    """
    if x.dim != y.dim:
        raise ValueError("branches live in different dimensions")
    if x.chart != y.chart or x.base_point != y.base_point:
        raise ValueError(f"branches {_name(x)} and {_name(y)} are not at the same point")
    tx, ty = tangent_direction(x), tangent_direction(y)
    if not _proportional(tx, ty):
        return Transversal(x, y, tx, ty)
    frame = pivot_frame(tx)
    kx, ky = degree(x), degree(y)
    lam = _leading_scale(tx[frame.pivot], kx, ty[frame.pivot], ky, (_name(x), _name(y)))
    if lam != ONE:
        frame = frame.scaled(lam)
    ox = order_x if order_x is not None else 4 * kx * ky + 8
    oy = order_y if order_y is not None else 4 * kx * ky + 8
    xs = _standardize(x, frame, ox)
    if x.coords == y.coords and ox == oy:
        return CoincidentInfo(xs, xs, tx)
    ys = _standardize(y, frame, oy)
    if x.coords == y.coords:
        return CoincidentInfo(xs, ys, tx)
    return SharedTangent(xs, ys, tx)
