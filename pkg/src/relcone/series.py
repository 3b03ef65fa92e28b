"""Truncated one-variable power series over cyclotomic fields.

A series is a sparse map exponent -> nonzero coefficient together with a
truncation order ``trunc``: every coefficient of t^e with e < trunc is known.
``trunc is None`` marks an exact series (a polynomial known in full).
Truncation is propagated pessimistically, so no operation ever reports a
coefficient it cannot vouch for.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import _kron
from .cyclo import ONE, ZERO, CyclotomicNumber, format_terms
from .errors import (InnerOrderZero, NotOrderOne, NotUnitSeries,
                     PrecisionExhausted, UndefinedInitial)

__all__ = ["TruncatedSeries", "ZeroSoFar", "DEFAULT_TRUNC", "t_power"]

DEFAULT_TRUNC = 30


@dataclass(frozen=True)
class ZeroSoFar:
    """Order of a series with no known nonzero term.

    ``exact`` distinguishes the true zero series from one whose known window
    (exponents below ``trunc``) happens to be empty.
    """
    exact: bool
    trunc: int | None = None


def _tmin(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def _coerce(c) -> CyclotomicNumber:
    return c if isinstance(c, CyclotomicNumber) else CyclotomicNumber.from_rational(c)


class TruncatedSeries:
    __slots__ = ("_terms", "trunc")

    def __init__(self, terms=None, trunc: int | None = None):
        if trunc is not None:
            trunc = int(trunc)
            if trunc < 0:
                raise ValueError("truncation order must be non-negative")
        items = terms.items() if isinstance(terms, dict) else (terms or ())
        clean = {}
        for e, c in items:
            e = int(e)
            if e < 0:
                raise ValueError("negative exponent in a power series")
            if trunc is not None and e >= trunc:
                continue
            c = _coerce(c)
            if c:
                clean[e] = clean.get(e, ZERO) + c
                if not clean[e]:
                    del clean[e]
        self._terms = clean
        self.trunc = trunc

    @classmethod
    def _raw(cls, terms: dict, trunc):
        obj = object.__new__(cls)
        obj._terms = terms
        obj.trunc = trunc
        return obj

    @classmethod
    def constant(cls, c, trunc=None):
        return cls({0: c}, trunc)

    @classmethod
    def zero(cls, trunc=None):
        return cls._raw({}, trunc)

    @classmethod
    def parse(cls, text: str) -> "TruncatedSeries":
        from ._parse import parse_expression
        return parse_expression(text)

    # -- inspection -------------------------------------------------------
    @property
    def exact(self) -> bool:
        return self.trunc is None

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return sorted(self._terms.items())

    def exponents(self):
        return sorted(self._terms)

    def coefficient(self, e: int) -> CyclotomicNumber:
        if self.trunc is not None and e >= self.trunc:
            raise PrecisionExhausted(f"coefficient of t^{e} is beyond truncation {self.trunc}")
        return self._terms.get(e, ZERO)

    def ord(self):
        """Least exponent with a nonzero coefficient, or a :class:`ZeroSoFar`."""
        if self._terms:
            return min(self._terms)
        return ZeroSoFar(exact=self.exact, trunc=self.trunc)

    def ord_lower_bound(self):
        """Smallest exponent that may carry a nonzero coefficient (None for exact zero)."""
        if self._terms:
            return min(self._terms)
        return self.trunc

    def initial(self) -> tuple[int, CyclotomicNumber]:
        o = self.ord()
        if isinstance(o, ZeroSoFar):
            raise UndefinedInitial("series has no known nonzero term")
        return o, self._terms[o]

    def degree(self) -> int | None:
        return max(self._terms) if self._terms else None

    def truncate(self, trunc: int) -> "TruncatedSeries":
        t = _tmin(self.trunc, trunc)
        return TruncatedSeries._raw({e: c for e, c in self._terms.items() if t is None or e < t}, t)

    def with_exactness(self, exact: bool, trunc: int | None = None) -> "TruncatedSeries":
        if exact:
            return TruncatedSeries._raw(dict(self._terms), None)
        return self.truncate(trunc if trunc is not None else DEFAULT_TRUNC)

    def agrees_with(self, other: "TruncatedSeries", through: int | None = None) -> bool:
        """True if both series have equal coefficients below the common known window."""
        t = _tmin(_tmin(self.trunc, other.trunc), through)
        keys = set(self._terms) | set(other._terms)
        return all(self._terms.get(e, ZERO) == other._terms.get(e, ZERO)
                   for e in keys if t is None or e < t)

    # -- ring operations --------------------------------------------------
    def _lift(self, other):
        if isinstance(other, TruncatedSeries):
            return other
        return TruncatedSeries.constant(_coerce(other))

    def __add__(self, other):
        other = self._lift(other)
        t = _tmin(self.trunc, other.trunc)
        out = {}
        for src in (self._terms, other._terms):
            for e, c in src.items():
                if t is not None and e >= t:
                    continue
                v = out.get(e)
                v = c if v is None else v + c
                if v:
                    out[e] = v
                else:
                    out.pop(e, None)
        return TruncatedSeries._raw(out, t)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries._raw({e: -c for e, c in self._terms.items()}, self.trunc)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "TruncatedSeries":
        c = _coerce(c)
        if not c:
            return TruncatedSeries._raw({}, self.trunc)
        return TruncatedSeries._raw({e: v * c for e, v in self._terms.items()}, self.trunc)

    def __mul__(self, other):
        if not isinstance(other, TruncatedSeries):
            try:
                return self.scale(other)
            except TypeError:
                return NotImplemented
        # unknown tail of a starts at trunc(a); it meets b no lower than ord(b)
        t = None
        if self.trunc is not None:
            lb = other.ord_lower_bound()
            t = _tmin(t, None if lb is None else self.trunc + lb)
        if other.trunc is not None:
            lb = self.ord_lower_bound()
            t = _tmin(t, None if lb is None else other.trunc + lb)
        return TruncatedSeries._raw(_mul_terms(self._terms, other._terms, t), t)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if not isinstance(e, int) or e < 0:
            return NotImplemented
        result = TruncatedSeries.constant(ONE)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.trunc == other.trunc and self._terms == other._terms

    def __hash__(self):
        return hash((self.trunc, frozenset(self._terms.items())))

    # -- substitutions ----------------------------------------------------
    def substitute(self, c, m: int) -> "TruncatedSeries":
        """Apply t -> c*t^m."""
        if m < 1:
            raise ValueError("m must be a positive integer")
        c = _coerce(c)
        if not c:
            raise ValueError("substitution scale must be nonzero")
        out = {}
        if c == ONE:
            out = {e * m: a for e, a in self._terms.items()}
        else:
            prev, cp = 0, ONE
            for e in sorted(self._terms):
                cp = cp * c ** (e - prev)
                prev = e
                out[e * m] = self._terms[e] * cp
        return TruncatedSeries._raw(out, None if self.trunc is None else self.trunc * m)

    def compose(self, inner: "TruncatedSeries", trunc: int | None = None) -> "TruncatedSeries":
        """Formal composition self(inner(t)).

        The result is truncated at the order that the data provably
        determines, further capped by ``trunc`` when given.
        """
        d = inner.ord_lower_bound()
        if d is not None and d < 1:
            raise InnerOrderZero("inner series must vanish at 0")
        bound = trunc
        if self.exact and not any(e >= 1 for e in self._terms):
            return TruncatedSeries._raw(dict(self._terms), None)
        if d is None:
            # inner is exactly zero
            c0 = self._terms.get(0, ZERO)
            if self.trunc is not None and self.trunc == 0:
                return TruncatedSeries.zero(0)
            return TruncatedSeries._raw({0: c0} if c0 else {}, bound)
        if self.trunc is not None:
            bound = _tmin(bound, d * self.trunc)
        pos = [e for e in self._terms if e >= 1]
        if inner.trunc is not None and pos:
            bound = _tmin(bound, inner.trunc + (min(pos) - 1) * d)
        if bound is None and not (self.exact and inner.exact):
            raise AssertionError("unbounded composition of inexact data")
        top = max(self._terms, default=0)
        if bound is not None:
            top = min(top, (bound - 1) // d if bound > 0 else -1)
        if top < 0:
            return TruncatedSeries._raw({}, bound)
        acc: dict = {}
        for e in range(top, -1, -1):
            acc = _mul_terms(acc, inner._terms, bound) if acc else {}
            c = self._terms.get(e)
            if c is not None:
                v = acc.get(0)
                v = c if v is None else v + c
                if v:
                    acc[0] = v
                else:
                    acc.pop(0, None)
        return TruncatedSeries._raw(acc, bound)

    @staticmethod
    def compose_all(outers, inner: "TruncatedSeries", trunc: int | None = None) -> list:
        """[f(inner) for f in outers], sharing the powers of ``inner``.

        Cheaper than separate :meth:`compose` calls when several outer
        series of moderate degree are composed with one inner series.
        """
        outers = list(outers)
        d = inner.ord_lower_bound()
        if d is None or (len(outers) < 2 and outers and len(outers[0]._terms) > 8):
            return [f.compose(inner, trunc) for f in outers]
        if d < 1:
            raise InnerOrderZero("inner series must vanish at 0")
        const = [f.exact and not any(e >= 1 for e in f._terms) for f in outers]
        bounds = [None if c else f._bound(inner, d, trunc) for f, c in zip(outers, const)]
        live = [b for b, c in zip(bounds, const) if not c]
        limit = None if any(b is None for b in live) else max(live, default=0)
        top = 0
        for f, b, c in zip(outers, bounds, const):
            if c:
                continue
            fe = max(f._terms, default=0)
            if b is not None:
                fe = min(fe, (b - 1) // d if b > 0 else 0)
            top = max(top, fe)
        powers = {1: inner if limit is None else inner.truncate(limit)}
        for e in range(2, top + 1):
            p = powers[e - 1] * powers[1]
            powers[e] = p if limit is None else p.truncate(limit)
        out = []
        for f, b, c in zip(outers, bounds, const):
            if c:
                out.append(TruncatedSeries._raw(dict(f._terms), None))
                continue
            acc = TruncatedSeries._raw({0: f._terms[0]} if 0 in f._terms else {}, None)
            for e, c in f._terms.items():
                if e == 0 or (b is not None and e * d >= b):
                    continue
                acc = acc + powers[e].scale(c)
            out.append(acc.truncate(b) if b is not None else acc)
        return out

    def _bound(self, inner, d, trunc):
        """Truncation order of self(inner) that the data provably determines."""
        bound = trunc
        if self.trunc is not None:
            bound = _tmin(bound, d * self.trunc)
        pos = [e for e in self._terms if e >= 1]
        if inner.trunc is not None and pos:
            bound = _tmin(bound, inner.trunc + (min(pos) - 1) * d)
        if bound is None and not (self.exact and inner.exact):
            raise AssertionError("unbounded composition of inexact data")
        return bound

    def shift(self, m: int) -> "TruncatedSeries":
        """Multiply by t^m; a negative m needs the low terms to vanish."""
        if m < 0 and any(e < -m for e in self._terms):
            raise ValueError(f"cannot divide by t^{-m}: series has lower terms")
        if self.trunc is not None and self.trunc + m < 0:
            raise PrecisionExhausted(f"cannot divide by t^{-m}: known only below t^{self.trunc}")
        return TruncatedSeries._raw({e + m: c for e, c in self._terms.items()},
                                    None if self.trunc is None else self.trunc + m)

    def derivative(self) -> "TruncatedSeries":
        return TruncatedSeries._raw({e - 1: c * e for e, c in self._terms.items() if e},
                                    None if self.trunc is None else max(self.trunc - 1, 0))

    # -- unit-series powers -----------------------------------------------
    def power(self, alpha, trunc: int | None = None) -> "TruncatedSeries":
        """(1 + h)^alpha for a unit series with constant term 1 and rational alpha."""
        alpha = Fraction(alpha)
        if self._terms.get(0) != ONE or (self.trunc is not None and self.trunc < 1):
            raise NotUnitSeries("expected a series with constant term 1")
        if alpha.denominator == 1 and alpha >= 0:
            return (self ** int(alpha)).truncate(trunc) if trunc is not None else self ** int(alpha)
        target = _tmin(self.trunc, trunc)
        if target is None:
            target = DEFAULT_TRUNC
        out = _unit_power(self._terms, alpha, target)
        return TruncatedSeries._raw(out, target)

    def kth_root(self, k: int, trunc: int | None = None) -> "TruncatedSeries":
        """Principal k-th root (constant term 1) of a unit series.

        For exact input the root is checked for being a polynomial; if its
        k-th power reproduces the input exactly the result is exact.
        """
        if k < 1:
            raise ValueError("k must be positive")
        if self._terms.get(0) != ONE or (self.trunc is not None and self.trunc < 1):
            raise NotUnitSeries("kth_root needs a series with constant term 1")
        if k == 1:
            return self if trunc is None else self.truncate(trunc)
        if self.exact:
            deg = max(self._terms)
            if deg % k == 0:
                probe = TruncatedSeries._raw(_unit_power(self._terms, Fraction(1, k), deg // k + 1), None)
                if probe ** k == self:
                    return probe if trunc is None else probe.truncate(trunc)
        return self.power(Fraction(1, k), trunc)

    def reciprocal(self, trunc: int | None = None) -> "TruncatedSeries":
        c0 = self._terms.get(0)
        if c0 is None or (self.trunc is not None and self.trunc < 1):
            raise NotUnitSeries("reciprocal needs a nonzero constant term")
        inv = c0.inverse()
        if len(self._terms) == 1 and self.exact:
            return TruncatedSeries._raw({0: inv}, trunc) if trunc is not None else \
                TruncatedSeries._raw({0: inv}, None)
        target = _tmin(self.trunc, trunc)
        if target is None:
            target = DEFAULT_TRUNC
        if target <= 16:
            return self.scale(inv).power(-1, trunc).scale(inv)
        # Newton: r <- r + r (1 - a r), doubling the precision each step
        r = TruncatedSeries._raw({0: inv}, 1)
        prec = 1
        one = TruncatedSeries._raw({0: ONE}, None)
        while prec < target:
            prec = min(2 * prec, target)
            a = self.truncate(prec)
            r = TruncatedSeries._raw(r._terms, prec)
            r = (r + r * (one - a * r)).truncate(prec)
        return r

    def revert(self, trunc: int | None = None) -> "TruncatedSeries":
        """Compositional inverse g with self(g(t)) = t."""
        if 0 in self._terms or 1 not in self._terms or (self.trunc is not None and self.trunc < 2):
            raise NotOrderOne("revert needs a series of order exactly 1")
        a1 = self._terms[1]
        ainv = a1.inverse()
        if self.exact and len(self._terms) == 1:
            g = TruncatedSeries._raw({1: ainv}, None)
            return g if trunc is None else g.truncate(trunc)
        target = _tmin(self.trunc, trunc)
        if target is None:
            target = DEFAULT_TRUNC
        # Newton iteration on F(g) = self(g) - t, precision doubling
        g = TruncatedSeries._raw({1: ainv}, 2)
        ds = self.derivative()
        t_ser = TruncatedSeries._raw({1: ONE}, None)
        prec = 2
        while prec < target:
            prec = min(2 * prec, target)
            gp = TruncatedSeries._raw(dict(g._terms), prec)
            resid = self.compose(gp, prec) - t_ser
            slope = ds.compose(gp, prec)
            step = resid * slope.reciprocal(prec)
            g = (gp - step).truncate(prec)
        return TruncatedSeries._raw(dict(g._terms), target)

    # -- text -------------------------------------------------------------
    def __str__(self):
        parts = []
        for e, c in self.items():
            parts.append(_format_term(e, c))
        if self.trunc is not None:
            parts.append(("+", f"O(t^{self.trunc})"))
        if not parts:
            return "0"
        sign, body = parts[0]
        out = ("-" if sign == "-" else "") + body
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self):
        return f"TruncatedSeries({str(self)!r})"


def _format_term(e: int, c: CyclotomicNumber) -> tuple[str, str]:
    n, coeffs = c.canonical()
    nz = [(j, q) for j, q in enumerate(coeffs) if q]
    mono = "" if e == 0 else f"t^{e}"
    if len(nz) == 1:
        j, q = nz[0]
        sign = "-" if q < 0 else "+"
        body = format_terms([(j, abs(q))], n)
        if mono:
            body = mono if body == "1" else f"{body}*{mono}"
        return sign, body
    body = f"({format_terms(nz, n)})"
    return "+", f"{body}*{mono}" if mono else body


def _mul_terms(a: dict, b: dict, limit) -> dict:
    out: dict = {}
    if not a or not b:
        return out
    if len(a) * len(b) > 24:
        return _kron.mul_terms(a, b, limit)
    bi = sorted(b.items())
    for ea, ca in a.items():
        for eb, cb in bi:
            e = ea + eb
            if limit is not None and e >= limit:
                break
            v = out.get(e)
            p = ca * cb
            v = p if v is None else v + p
            if v:
                out[e] = v
            else:
                del out[e]
    return out


def _unit_power(a: dict, alpha: Fraction, target: int) -> dict:
    # n b_n = sum_{j=1..n} (alpha*j - (n - j)) a_j b_{n-j}, a_0 = b_0 = 1
    b = [ONE] + [ZERO] * (target - 1) if target > 0 else []
    nz = sorted((j, c) for j, c in a.items() if j >= 1)
    for n in range(1, target):
        acc = ZERO
        for j, aj in nz:
            if j > n:
                break
            bn = b[n - j]
            if bn:
                w = alpha * j - (n - j)
                if w:
                    acc = acc + aj * bn * w
        b[n] = acc * Fraction(1, n) if acc else ZERO
    return {e: c for e, c in enumerate(b) if c}


def t_power(k: int, coeff=ONE) -> TruncatedSeries:
    """The exact monomial coeff * t^k."""
    return TruncatedSeries({k: coeff})
