"""Relative tangent cones of curve branches.

For two branches through the origin the cone is a finite union of lines
and planes.  Transversal pairs give the plane spanned by the two tangents.
Pairs with a common tangent are normalized to ``(t^k, ...)`` and
``(t^l, ...)`` with ``l <= k``; for each l-th root of unity eps the
difference ``Phi(t^l) - Psi(eps t^k)`` is expanded and its lowest-order
coefficient vector v, together with the tangent, spans one plane (or just
the tangent line when the difference vanishes identically).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from . import linalg
from .branch import (Branch, CoincidentInfo, SharedTangent, Transversal, degree,
                     normalize_pair, tangent_direction)
from .cyclo import ONE, ZERO, CyclotomicNumber, root_of_unity
from .errors import PrecisionExhausted
from .series import ZeroSoFar

__all__ = [
    "Provenance",
    "Subspace",
    "LinearCone",
    "cone_pair",
    "cone_sets",
    "cone_membership",
    "DEFAULT_MAX_TRUNC",
]

DEFAULT_MAX_TRUNC = 256


@dataclass(frozen=True)
class Provenance:
    """Where a subspace came from.

    kind is ``transversal``, ``shared_tangent``, ``coincident`` (difference
    identically zero, certified) or ``coincident_up_to_precision``.
    """
    kind: str
    pair: tuple = ("", "")
    epsilon: CyclotomicNumber | None = None
    n_i: int | None = None
    v_i: tuple | None = None
    degrees: tuple | None = None

    def to_json(self) -> dict:
        doc = {"kind": self.kind, "pair": list(self.pair)}
        if self.epsilon is not None:
            doc["epsilon"] = str(self.epsilon)
        if self.n_i is not None:
            doc["n_i"] = self.n_i
        if self.v_i is not None:
            doc["v_i"] = [str(c) for c in self.v_i]
        if self.degrees is not None:
            doc["degrees"] = list(self.degrees)
        return doc

    @classmethod
    def from_json(cls, doc: dict) -> "Provenance":
        eps = doc.get("epsilon")
        v = doc.get("v_i")
        deg = doc.get("degrees")
        return cls(kind=doc["kind"], pair=tuple(doc.get("pair", ("", ""))),
                   epsilon=None if eps is None else CyclotomicNumber.parse(eps),
                   n_i=doc.get("n_i"),
                   v_i=None if v is None else tuple(CyclotomicNumber.parse(c) for c in v),
                   degrees=None if deg is None else tuple(deg))


def _key(basis) -> tuple:
    return tuple(tuple(c.canonical() for c in row) for row in basis)


@dataclass(frozen=True)
class Subspace:
    basis: tuple              # reduced row-echelon rows
    provenance: tuple = ()

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, v) -> bool:
        return linalg.in_span(v, self.basis)

    def contains_subspace(self, other: "Subspace") -> bool:
        return all(self.contains(row) for row in other.basis)

    def key(self) -> tuple:
        return _key(self.basis)


class LinearCone:
    """Finite union of linear subspaces through 0, canonical and absorbed.

    Subspaces are kept in reduced echelon form, duplicates are merged
    (provenance concatenated) and any subspace inside another is dropped.
    """

    def __init__(self, dim: int, subspaces=(), warnings=()):
        self.dim = dim
        merged: dict = {}
        order = []
        for s in subspaces:
            if not isinstance(s, Subspace):
                basis, prov = s
                s = Subspace(linalg.rref(basis), tuple(prov))
            else:
                s = Subspace(linalg.rref(s.basis), s.provenance)
            if s.dim == 0:
                continue
            if s.dim > 2:
                raise AssertionError("cone component of dimension > 2")
            k = s.key()
            if k in merged:
                merged[k] = Subspace(merged[k].basis, merged[k].provenance + s.provenance)
            else:
                merged[k] = s
                order.append(k)
        subs = [merged[k] for k in order]
        kept = []
        for s in subs:
            if any(o.dim > s.dim and o.contains_subspace(s) for o in subs):
                continue
            kept.append(s)
        kept.sort(key=lambda s: (s.dim, s.key()))
        self.subspaces = tuple(kept)
        self.warnings = tuple(dict.fromkeys(warnings))

    def __iter__(self):
        return iter(self.subspaces)

    def __len__(self):
        return len(self.subspaces)

    def subspace_set(self) -> frozenset:
        return frozenset(s.key() for s in self.subspaces)

    def __eq__(self, other):
        if not isinstance(other, LinearCone):
            return NotImplemented
        return self.dim == other.dim and self.subspace_set() == other.subspace_set()

    def __hash__(self):
        return hash((self.dim, self.subspace_set()))

    def planes(self):
        return [s for s in self.subspaces if s.dim == 2]

    def lines(self):
        return [s for s in self.subspaces if s.dim == 1]

    def contains(self, v) -> bool:
        return any(s.contains(v) for s in self.subspaces) or not any(linalg.vec(v))

    def union(self, *others: "LinearCone") -> "LinearCone":
        subs = list(self.subspaces)
        warns = list(self.warnings)
        for o in others:
            if o.dim != self.dim:
                raise ValueError("cones live in different dimensions")
            subs.extend(o.subspaces)
            warns.extend(o.warnings)
        return LinearCone(self.dim, subs, warns)

    def map_linear(self, mat) -> "LinearCone":
        """Image under an invertible linear map; provenance vectors are mapped too."""
        subs = []
        for s in self.subspaces:
            prov = tuple(_map_prov(p, mat) for p in s.provenance)
            subs.append(Subspace(tuple(linalg.matvec(mat, row) for row in s.basis), prov))
        return LinearCone(self.dim, subs, self.warnings)

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "subspaces": [
                {"dim": s.dim,
                 "span": [[str(c) for c in row] for row in s.basis],
                 "provenance": [p.to_json() for p in s.provenance]}
                for s in self.subspaces
            ],
            "warnings": list(self.warnings),
        }

    @classmethod
    def from_json(cls, doc: dict) -> "LinearCone":
        subs = []
        for sd in doc["subspaces"]:
            basis = tuple(tuple(CyclotomicNumber.parse(c) for c in row) for row in sd["span"])
            prov = sd.get("provenance", [])
            if isinstance(prov, dict):
                prov = [prov]
            subs.append(Subspace(basis, tuple(Provenance.from_json(p) for p in prov)))
        dim = doc.get("dim")
        if dim is None:
            dim = len(subs[0].basis[0]) if subs else 0
        return cls(dim, subs, doc.get("warnings", ()))

    def __repr__(self):
        body = "; ".join("span{" + ", ".join("(" + ", ".join(str(c) for c in row) + ")"
                                             for row in s.basis) + "}" for s in self.subspaces)
        return f"LinearCone({body})"


def _map_prov(p: Provenance, mat) -> Provenance:
    if p.v_i is None:
        return p
    return Provenance(p.kind, p.pair, p.epsilon, p.n_i, linalg.matvec(mat, p.v_i), p.degrees)


def cone_membership(v, c: LinearCone) -> bool:
    return c.contains(v)


def _label(b: Branch) -> str:
    return b.label or "<unnamed>"


class _Undetermined(Exception):
    def __init__(self, window, zero):
        self.window = window      # known window of the undecided difference
        self.zero = zero          # True if no nonzero term was seen at all


def _difference_order(diff):
    """(n, v) for a coordinate-wise difference, or None if identically zero.

    Raises _Undetermined when a coordinate known only below some exponent
    could still change the order or the leading vector.
    """
    finite = []
    for s in diff:
        o = s.ord()
        if not isinstance(o, ZeroSoFar):
            finite.append(o)
    unknown = [s.trunc for s in diff
               if isinstance(s.ord(), ZeroSoFar) and not s.ord().exact]
    if not finite:
        if not unknown:
            return None
        raise _Undetermined(min(unknown), True)
    n = min(finite)
    # a coordinate with no known term below trunc T could contribute at T
    if unknown and min(unknown) <= n:
        raise _Undetermined(min(unknown), False)
    v = tuple(s.coefficient(n) for s in diff)
    return n, v


def _shared_cone(st: SharedTangent, swapped: bool, pair, force_zero_eps1: bool):
    """Cone pieces in normalized coordinates for standard branches xs (k), ys (l), l <= k."""
    xs, ys = (st.ys, st.xs) if swapped else (st.xs, st.ys)
    k, l = xs.k, ys.k
    assert l <= k
    pieces = []
    pending = []
    n = len(xs.coords)
    e1 = tuple(ONE if i == 0 else ZERO for i in range(n))
    for i in range(1, l + 1):
        eps = root_of_unity(l, i)
        diff = [a.substitute(ONE, l) - b.substitute(eps, k) for a, b in zip(xs.coords, ys.coords)]
        if force_zero_eps1 and i == l:
            res = None
        else:
            try:
                res = _difference_order(diff)
            except _Undetermined as und:
                pending.append((i, eps, und))
                continue
        if res is None:
            pieces.append(([e1], Provenance("coincident", pair, eps, 0, e1, (k, l))))
        else:
            ni, v = res
            pieces.append(([v, e1], Provenance("shared_tangent", pair, eps, ni, v, (k, l))))
    return pieces, pending


def cone_pair(x: Branch, y: Branch, trunc: int | None = None,
              max_trunc: int | None = None) -> LinearCone:
    """Relative tangent cone of two branches through the same point.

    ``trunc`` is the initial exponent window for the root-of-unity
    differences (default 4*k*l + 8); it is doubled while some difference is
    undecided, up to ``max_trunc``.  When the inputs themselves run out of
    terms :class:`PrecisionExhausted` is raised.  When only the ceiling is
    hit and a difference is still zero, the tangent line is reported with
    a ``coincident_up_to_precision`` provenance and a warning.
    """
    pair = (_label(x), _label(y))
    n = x.dim
    tx, ty = tangent_direction(x), tangent_direction(y)
    if linalg.rank([tx, ty]) == 2:
        prov = Provenance("transversal", pair, degrees=(degree(x), degree(y)))
        return LinearCone(n, [([tx, ty], [prov])])
    kx, ky = degree(x), degree(y)
    swapped = ky > kx
    k, l = max(kx, ky), min(kx, ky)
    T = trunc if trunc is not None else 4 * k * l + 8
    ceiling = max(T, max_trunc if max_trunc is not None else DEFAULT_MAX_TRUNC)
    last_window = None
    while True:
        # D_i(t) = Phi(t^l) - Psi(eps t^k): each side is substituted by t^(other degree)
        ox = -(-T // ky) + 1
        oy = -(-T // kx) + 1
        st = normalize_pair(x, y, ox, oy)
        assert not isinstance(st, Transversal)
        # literally identical exact inputs certify D = 0 for eps = 1
        certified_same = isinstance(st, CoincidentInfo) and k == l and x.exact
        pieces, pending = _shared_cone(st, swapped, pair, certified_same)
        if not pending:
            break
        window = min(und.window for _, _, und in pending)
        stalled = last_window is not None and window <= last_window
        if T >= ceiling or stalled:
            if stalled or not all(und.zero for _, _, und in pending) or not (x.exact and y.exact):
                raise PrecisionExhausted(
                    f"pair ({pair[0]}, {pair[1]}): difference for eps={pending[0][1]} "
                    f"is undetermined below t^{window}; supply more terms",
                    context=(pair, "cone_pair"))
            break
        last_window = window
        T = min(2 * T, ceiling)
    warnings = []
    frame = st.xs.frame
    e1 = tuple(ONE if i == 0 else ZERO for i in range(n))
    for i, eps, und in pending:
        warnings.append(f"pair ({pair[0]}, {pair[1]}): difference for eps={eps} vanishes "
                        f"below t^{und.window}; germs treated as coincident up to precision")
        pieces.append(([e1], Provenance("coincident_up_to_precision", pair, eps, None, e1, (k, l))))
    back = frame.inverse
    subs = []
    for vecs, prov in pieces:
        orig = [linalg.matvec(back, v) for v in vecs]
        prov = _map_prov(prov, back)
        subs.append((orig, [prov]))
    return LinearCone(n, subs, warnings)


def cone_sets(xs, ys, trunc: int | None = None, max_trunc: int | None = None,
              workers: int | None = None) -> LinearCone:
    """Union of pairwise cones over all branch pairs (xs[i], ys[j])."""
    xs, ys = list(xs), list(ys)
    if not xs or not ys:
        raise ValueError("need at least one branch on each side")
    n = xs[0].dim
    pairs = [(a, b) for a in xs for b in ys]
    if workers and workers > 1 and len(pairs) > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(workers) as pool:
            cones = list(pool.map(lambda ab: cone_pair(ab[0], ab[1], trunc, max_trunc), pairs))
    else:
        cones = [cone_pair(a, b, trunc, max_trunc) for a, b in pairs]
    return LinearCone(n).union(*cones)
