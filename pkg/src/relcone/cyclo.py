"""Exact arithmetic in cyclotomic fields Q(zeta_N).

An element is stored as its residue modulo the N-th cyclotomic polynomial,
with rational coefficients in the power basis 1, z, ..., z^(phi(N)-1).
Conductors congruent to 2 mod 4 are folded onto N/2 and residues that are
constants drop to conductor 1, so rational values never carry a field tag.
"""
from __future__ import annotations

import cmath
import math
from fractions import Fraction
from functools import lru_cache
from numbers import Rational

from .errors import ConductorCapExceeded

__all__ = [
    "CyclotomicNumber",
    "root_of_unity",
    "to_complex",
    "cyclotomic_polynomial",
    "totient",
    "max_conductor",
    "set_max_conductor",
    "as_rational_times_root",
    "kth_root",
    "ZERO",
    "ONE",
]

_MAX_CONDUCTOR = 240


def max_conductor() -> int:
    return _MAX_CONDUCTOR


def set_max_conductor(n: int) -> int:
    """Set the conductor cap; returns the previous value."""
    global _MAX_CONDUCTOR
    if n < 1:
        raise ValueError("conductor cap must be positive")
    old, _MAX_CONDUCTOR = _MAX_CONDUCTOR, int(n)
    return old


def _check_cap(n: int) -> None:
    if n > _MAX_CONDUCTOR:
        raise ConductorCapExceeded(
            f"conductor {n} exceeds the cap {_MAX_CONDUCTOR}")


def _divisors(n: int) -> list[int]:
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_n, lowest degree first."""
    if n < 1:
        raise ValueError("n must be positive")
    num = [-1] + [0] * (n - 1) + [1]
    for d in _divisors(n)[:-1]:
        num = _exact_divide(num, cyclotomic_polynomial(d))
    return tuple(num)


def _exact_divide(num: list[int], den: tuple[int, ...]) -> list[int]:
    # den is monic
    num = list(num)
    dd = len(den) - 1
    q = [0] * (len(num) - dd)
    for i in range(len(num) - 1, dd - 1, -1):
        c = num[i]
        if c:
            q[i - dd] = c
            for j, p in enumerate(den):
                num[i - dd + j] -= c * p
    assert not any(num[:dd]), "inexact cyclotomic division"
    return q


def totient(n: int) -> int:
    return len(cyclotomic_polynomial(n)) - 1


@lru_cache(maxsize=None)
def _reducer(n: int) -> tuple[int, tuple[tuple[int, int], ...]]:
    phi_n = cyclotomic_polynomial(n)
    deg = len(phi_n) - 1
    return deg, tuple((i, p) for i, p in enumerate(phi_n[:-1]) if p)


def _reduce(a: list, n: int) -> list:
    deg, low = _reducer(n)
    for j in range(len(a) - 1, deg - 1, -1):
        c = a[j]
        if c:
            base = j - deg
            for i, p in low:
                a[base + i] -= c * p
    del a[deg:]
    return a


def _strip(a: list) -> tuple:
    n = len(a)
    while n and not a[n - 1]:
        n -= 1
    return tuple(a[:n])


def _embed(coeffs: tuple, n: int, m: int) -> list:
    """Image of a residue under Q(zeta_n) -> Q(zeta_m), zeta_n -> zeta_m^(m/n)."""
    if n == m:
        return list(coeffs)
    step = m // n
    out = [0] * ((len(coeffs) - 1) * step + 1 if coeffs else 0)
    for j, c in enumerate(coeffs):
        out[j * step] = c
    return _reduce(out, m)


def _fold_conductor(coeffs: tuple, n: int) -> tuple[tuple, int]:
    # Q(zeta_2m) = Q(zeta_m) for odd m, with zeta_2m = -zeta_m^((m+1)/2)
    if n % 4 != 2:
        return coeffs, n
    m = n // 2
    if m == 1:
        # zeta_2 = -1
        val = sum(c * (-1) ** j for j, c in enumerate(coeffs))
        return ((val,) if val else ()), 1
    h = (m + 1) // 2
    out = [0] * (max(len(coeffs) - 1, 0) * h + 1)
    for j, c in enumerate(coeffs):
        if c:
            out[j * h] += c if j % 2 == 0 else -c
    return _strip(_reduce(out, m)), m


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    raise TypeError(f"cannot interpret {type(x).__name__} as a rational")


class CyclotomicNumber:
    """Element of Q(zeta_N), immutable.

    Stored as integer numerators ``num`` over a positive common denominator
    ``den`` (in lowest terms).  Build values with :func:`root_of_unity`,
    :meth:`from_rational` or :meth:`parse`; ints and Fractions mix freely in
    arithmetic.
    """

    __slots__ = ("conductor", "num", "den", "_canon")

    def __init__(self, coeffs=(), conductor: int = 1):
        conductor = int(conductor)
        if conductor < 1:
            raise ValueError("conductor must be positive")
        _check_cap(conductor)
        fr = [_as_fraction(c) for c in coeffs]
        den = 1
        for q in fr:
            den = den * q.denominator // math.gcd(den, q.denominator)
        a = [q.numerator * (den // q.denominator) for q in fr]
        if len(a) > totient(conductor):
            a = _reduce(a, conductor)
        c = _strip(a)
        c, conductor = _fold_conductor(c, conductor)
        obj = CyclotomicNumber._make(c, den, conductor)
        self.conductor, self.num, self.den, self._canon = obj.conductor, obj.num, obj.den, None

    @classmethod
    def _make(cls, num, den: int, conductor: int) -> "CyclotomicNumber":
        """num already reduced mod Phi_N and stripped; normalizes the denominator."""
        obj = object.__new__(cls)
        if not num:
            obj.conductor, obj.num, obj.den, obj._canon = 1, (), 1, None
            return obj
        g = den
        for v in num:
            if g == 1:
                break
            g = math.gcd(g, v)
        if g != 1:
            num = tuple(v // g for v in num)
            den //= g
        obj.conductor = conductor if len(num) > 1 else 1
        obj.num = tuple(num)
        obj.den = den
        obj._canon = None
        return obj

    @classmethod
    def from_rational(cls, q) -> "CyclotomicNumber":
        q = _as_fraction(q)
        obj = object.__new__(cls)
        obj.conductor = 1
        obj.num = (q.numerator,) if q else ()
        obj.den = q.denominator if q else 1
        obj._canon = None
        return obj

    @classmethod
    def parse(cls, text: str) -> "CyclotomicNumber":
        from ._parse import parse_expression
        s = parse_expression(text, allow_t=False)
        return s.coefficient(0)

    # -- inspection -------------------------------------------------------
    @property
    def coeffs(self) -> tuple:
        """Residue coefficients as Fractions, lowest power first."""
        return tuple(Fraction(v, self.den) for v in self.num)

    def is_zero(self) -> bool:
        return not self.num

    def is_rational(self) -> bool:
        return len(self.num) <= 1

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return Fraction(self.num[0], self.den) if self.num else Fraction(0)

    def __bool__(self) -> bool:
        return bool(self.num)

    # -- coercion ---------------------------------------------------------
    @staticmethod
    def _lift(x) -> "CyclotomicNumber":
        if isinstance(x, CyclotomicNumber):
            return x
        return CyclotomicNumber.from_rational(x)

    def embed(self, m: int) -> list:
        """Residue of self viewed in Q(zeta_m) as Fractions; m a multiple of the conductor."""
        if m % self.conductor:
            raise ValueError(f"{m} is not a multiple of {self.conductor}")
        _check_cap(m)
        return [Fraction(v, self.den) for v in _embed(self.num, self.conductor, m)]

    def _common(self, other: "CyclotomicNumber"):
        n, m = self.conductor, other.conductor
        if n == m:
            return n, list(self.num), list(other.num)
        lcm = n * m // math.gcd(n, m)
        _check_cap(lcm)
        return lcm, _embed(self.num, n, lcm), _embed(other.num, m, lcm)

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, CyclotomicNumber):
            try:
                other = CyclotomicNumber.from_rational(other)
            except TypeError:
                return NotImplemented
        if not other.num:
            return self
        if not self.num:
            return other
        n, a, b = self._common(other)
        da, db = self.den, other.den
        if da != db:
            g = math.gcd(da, db)
            fa, fb = db // g, da // g
            a = [v * fa for v in a]
            b = [v * fb for v in b]
            den = da * fa
        else:
            den = da
        if len(a) < len(b):
            a, b = b, a
        for i, c in enumerate(b):
            a[i] += c
        return CyclotomicNumber._make(_strip(a), den, n)

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicNumber._make(tuple(-v for v in self.num), self.den, self.conductor)

    def __pos__(self):
        return self

    def __sub__(self, other):
        if not isinstance(other, CyclotomicNumber):
            try:
                other = CyclotomicNumber.from_rational(other)
            except TypeError:
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, CyclotomicNumber):
            try:
                other = CyclotomicNumber.from_rational(other)
            except TypeError:
                return NotImplemented
        if not self.num or not other.num:
            return ZERO
        if other.conductor == 1:
            q = other.num[0]
            if q == 1 and other.den == 1:
                return self
            return CyclotomicNumber._make(tuple(v * q for v in self.num), self.den * other.den,
                                          self.conductor)
        if self.conductor == 1:
            return other * self
        n, a, b = self._common(other)
        prod = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod[i + j] += x * y
        return CyclotomicNumber._make(_strip(_reduce(prod, n)), self.den * other.den, n)

    __rmul__ = __mul__

    def inverse(self) -> "CyclotomicNumber":
        if not self.num:
            raise ZeroDivisionError("division by zero in Q(zeta_N)")
        if self.conductor == 1:
            return CyclotomicNumber.from_rational(Fraction(self.den, self.num[0]))
        n = self.conductor
        nz = [j for j, v in enumerate(self.num) if v]
        if len(nz) == 1:
            # (q z^j)^-1 = q^-1 z^(n-j)
            j = nz[0]
            return root_of_unity(n, n - j) * Fraction(self.den, self.num[j])
        u = _poly_inverse_mod([Fraction(v, self.den) for v in self.num],
                              [Fraction(c) for c in cyclotomic_polynomial(n)])
        return CyclotomicNumber(u, n)

    def __truediv__(self, other):
        if not isinstance(other, CyclotomicNumber):
            try:
                other = CyclotomicNumber.from_rational(other)
            except TypeError:
                return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self._lift(other) * self.inverse()

    def __pow__(self, e: int):
        if not isinstance(e, int):
            return NotImplemented
        base = self
        if e < 0:
            base, e = self.inverse(), -e
        result = ONE
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def conjugate(self) -> "CyclotomicNumber":
        """Complex conjugate, i.e. the Galois automorphism zeta -> zeta^-1."""
        return self.galois(-1)

    def galois(self, a: int) -> "CyclotomicNumber":
        n = self.conductor
        if n == 1:
            return self
        if math.gcd(a, n) != 1:
            raise ValueError(f"{a} is not a unit mod {n}")
        out = [0] * n
        for j, c in enumerate(self.num):
            out[(a * j) % n] += c
        return CyclotomicNumber._make(_strip(_reduce(out, n)), self.den, n)

    # -- comparison -------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, CyclotomicNumber):
            if self.conductor == other.conductor:
                return self.num == other.num and self.den == other.den
            if self.conductor == 1 or other.conductor == 1:
                # a non-constant residue is never rational
                return not self.num and not other.num
            try:
                n, a, b = self._common(other)
            except ConductorCapExceeded:
                return self.canonical() == other.canonical()
            da, db = self.den, other.den
            return _strip([v * db for v in a]) == _strip([v * da for v in b])
        try:
            q = _as_fraction(other)
        except TypeError:
            return NotImplemented
        return self.is_rational() and self.as_fraction() == q

    def __hash__(self):
        return hash(self.canonical())

    def canonical(self) -> tuple[int, tuple]:
        """(minimal conductor, Fraction residue); equal elements give equal pairs."""
        if self._canon is None:
            self._canon = _minimal_form(self.coeffs, self.conductor)
        return self._canon

    def minimal(self) -> "CyclotomicNumber":
        n, c = self.canonical()
        if n == self.conductor:
            return self
        return CyclotomicNumber(c, n)

    # -- numeric bridge / text -------------------------------------------
    def __complex__(self):
        return to_complex(self)

    def __repr__(self):
        return f"CyclotomicNumber({str(self)!r})"

    def __str__(self):
        n, coeffs = self.canonical()
        return format_terms([(j, c) for j, c in enumerate(coeffs) if c], n)


def format_terms(terms, n: int) -> str:
    """Render sum c_j*z{n}^j, highest power first."""
    if not terms:
        return "0"
    parts = []
    for j, c in sorted(terms, key=lambda jc: -jc[0]):
        if j == 0:
            body = _fmt_rational(abs(c))
        elif abs(c) == 1:
            body = f"z{n}^{j}"
        else:
            body = f"{_fmt_rational(abs(c))}*z{n}^{j}"
        sign = "-" if c < 0 else "+"
        parts.append((sign, body))
    first_sign, first = parts[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


def _fmt_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _poly_inverse_mod(a: list, m: list) -> list:
    """u with u*a = 1 mod m over Q (a, m coprime)."""
    def trim(p):
        while p and not p[-1]:
            p.pop()
        return p

    def divmod_(num, den):
        num = list(num)
        q = [Fraction(0)] * max(len(num) - len(den) + 1, 1)
        lead = den[-1]
        for i in range(len(num) - len(den), -1, -1):
            c = num[i + len(den) - 1] / lead
            q[i] = c
            if c:
                for j, d in enumerate(den):
                    num[i + j] -= c * d
        return trim(q), trim(num[:len(den) - 1])

    def sub_mul(x, q, y):
        prod = [Fraction(0)] * (len(q) + len(y) - 1) if q and y else []
        for i, qi in enumerate(q):
            for j, yj in enumerate(y):
                prod[i + j] += qi * yj
        out = list(x) + [Fraction(0)] * max(0, len(prod) - len(x))
        for i, c in enumerate(prod):
            out[i] -= c
        return trim(out)

    r0, r1 = trim(list(m)), trim(list(a))
    s0, s1 = [], [Fraction(1)]
    while len(r1) > 1:
        q, r = divmod_(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, sub_mul(s0, q, s1)
    if not r1:
        raise ZeroDivisionError("element is not invertible")
    inv = 1 / r1[0]
    _, rem = divmod_([c * inv for c in s1] or [Fraction(0)], trim(list(m)))
    return rem


@lru_cache(maxsize=None)
def _embedding_basis(d: int, n: int) -> tuple[tuple, ...]:
    return tuple(tuple(_embed(tuple(Fraction(int(i == j)) for i in range(j + 1)), d, n))
                 for j in range(totient(d)))


def _solve_in_span(cols: tuple, target: list):
    """Rational x with sum x_j cols[j] == target, or None."""
    rows = len(target)
    ncols = len(cols)
    mat = [[(cols[j][i] if i < len(cols[j]) else Fraction(0)) for j in range(ncols)]
           + [target[i] if i < len(target) else Fraction(0)] for i in range(rows)]
    piv_cols = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, rows) if mat[i][c]), None)
        if p is None:
            continue
        mat[r], mat[p] = mat[p], mat[r]
        inv = 1 / mat[r][c]
        mat[r] = [v * inv for v in mat[r]]
        for i in range(rows):
            if i != r and mat[i][c]:
                f = mat[i][c]
                mat[i] = [v - f * w for v, w in zip(mat[i], mat[r])]
        piv_cols.append(c)
        r += 1
    if any(mat[i][ncols] for i in range(r, rows)):
        return None
    x = [Fraction(0)] * ncols
    for i, c in enumerate(piv_cols):
        x[c] = mat[i][ncols]
    return x


def _minimal_form(coeffs: tuple, n: int) -> tuple[int, tuple]:
    if n == 1 or len(coeffs) <= 1:
        return 1, coeffs
    target = list(coeffs) + [Fraction(0)] * (totient(n) - len(coeffs))
    for d in _divisors(n)[1:-1]:
        if d % 4 == 2:
            continue
        x = _solve_in_span(_embedding_basis(d, n), target)
        if x is not None:
            return d, _strip(x)
    return n, coeffs


ZERO = CyclotomicNumber.from_rational(0)
ONE = CyclotomicNumber.from_rational(1)


def root_of_unity(l: int, j: int = 1) -> CyclotomicNumber:
    """zeta_l^j, reduced; root_of_unity(l, 0) == 1."""
    if l < 1:
        raise ValueError("order must be positive")
    j %= l
    if j == 0:
        return ONE
    g = math.gcd(l, j)
    l, j = l // g, j // g
    if l == 2:
        return CyclotomicNumber.from_rational(-1)
    _check_cap(l)
    return _root_cached(l, j)


@lru_cache(maxsize=4096)
def _root_cached(l: int, j: int) -> CyclotomicNumber:
    return CyclotomicNumber([0] * j + [1], l)


def to_complex(a: CyclotomicNumber, digits: int = 15):
    """Evaluate at exp(2*pi*i/N).

    Up to 15 digits this returns a Python complex; beyond that an
    ``mpmath.mpc`` computed at the requested precision.
    """
    if digits < 1:
        raise ValueError("digits must be at least 1")
    n = a.conductor
    if digits <= 15:
        if n == 1:
            return complex(float(a.as_fraction()))
        return complex(sum(float(c) * cmath.exp(2j * math.pi * k / n)
                           for k, c in enumerate(a.coeffs) if c))
    import mpmath
    with mpmath.workdps(digits + 10):
        z = mpmath.expjpi(mpmath.mpf(2) / n)
        total = mpmath.mpc(0)
        for k, c in enumerate(a.coeffs):
            if c:
                total += mpmath.mpf(c.numerator) / c.denominator * z ** k
        return +total


def as_rational_times_root(c: CyclotomicNumber):
    """Write c = q * zeta_m^j with q > 0 rational; returns (q, m, j) or None."""
    if not c:
        return None
    if c.is_rational():
        q = c.as_fraction()
        return (q, 1, 0) if q > 0 else (-q, 2, 1)
    n = c.conductor
    w = n if n % 2 == 0 else 2 * n
    for j in range(w):
        cand = c * root_of_unity(w, -j)
        if cand.is_rational():
            q = cand.as_fraction()
            if q < 0:
                q, j = -q, (j + w // 2) % w
            g = math.gcd(w, j)
            return q, w // g, j // g
    return None


def _int_root(n: int, k: int):
    """Exact integer k-th root of n >= 0, or None."""
    if n < 2:
        return n
    r = int(round(n ** (1.0 / k))) if n.bit_length() < 1000 else 1 << (n.bit_length() // k + 1)
    # Newton refinement from above
    r = max(r, 1)
    while True:
        nxt = ((k - 1) * r + n // r ** (k - 1)) // k
        if nxt >= r:
            break
        r = nxt
    for cand in (r - 1, r, r + 1):
        if cand >= 0 and cand ** k == n:
            return cand
    return None


def _root_order(m: int, j: int) -> int:
    o = m // math.gcd(m, j) if j % m else 1
    return o // 2 if o % 4 == 2 else o


def kth_root(c: CyclotomicNumber, k: int):
    """A k-th root of c of the form rational * root of unity, or None.

    Among the k candidates the one living in the smallest cyclotomic field
    is returned (ties broken by the smallest rotation index), so the choice
    is deterministic.
    """
    if k == 1:
        return c
    form = as_rational_times_root(c)
    if form is None:
        return None
    q, m, j = form
    num, den = _int_root(q.numerator, k), _int_root(q.denominator, k)
    if num is None or den is None:
        return None
    big = k * m
    best = min(range(k), key=lambda i: (_root_order(big, j + m * i), i))
    jj = (j + m * best) % big
    g = math.gcd(big, jj) if jj else big
    order, expo = big // g, jj // g
    try:
        unit = root_of_unity(order, expo)
    except ConductorCapExceeded:
        return None
    return unit * Fraction(num, den)
