"""Series products over Q(zeta_N) by Kronecker substitution.

Both factors are scaled to integer coefficients, packed into one big
integer (one slot per (t-exponent, zeta-power) pair) and multiplied with
Python's native bignum product.  Slots are then unpacked and reduced
modulo the cyclotomic polynomial.
"""
from __future__ import annotations

import math

try:  # optional: GMP multiplication is much faster for large operands
    from gmpy2 import mpz as _big
except ImportError:  # pragma: no cover
    _big = int

from .cyclo import CyclotomicNumber, _check_cap, _embed, _reduce, _strip, totient


def _lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


def _prepare(terms, n: int, width: int):
    den = 1
    for c in terms.values():
        den = _lcm(den, c.den)
    rows = {}
    big = 0
    for e, c in terms.items():
        f = den // c.den
        v = _embed(c.num, c.conductor, n) if c.conductor != n else c.num
        v = [x * f for x in v]
        rows[e] = v
        for x in v:
            if abs(x) > big:
                big = abs(x)
    return rows, den, big


def _pack(rows: dict, e0: int, length: int, width: int, nbytes: int) -> int:
    pos = bytearray(length * width * nbytes)
    neg = bytearray(length * width * nbytes)
    any_neg = False
    for e, v in rows.items():
        base = (e - e0) * width
        for j, x in enumerate(v):
            if x > 0:
                off = (base + j) * nbytes
                pos[off:off + nbytes] = x.to_bytes(nbytes, "little")
            elif x < 0:
                off = (base + j) * nbytes
                neg[off:off + nbytes] = (-x).to_bytes(nbytes, "little")
                any_neg = True
    val = int.from_bytes(pos, "little")
    if any_neg:
        val -= int.from_bytes(neg, "little")
    return val


def mul_terms(a: dict, b: dict, limit) -> dict:
    """Product of two sparse series (exponent -> CyclotomicNumber), terms below ``limit``."""
    if not a or not b:
        return {}
    ea0, eb0 = min(a), min(b)
    if limit is not None:
        a = {e: c for e, c in a.items() if e + eb0 < limit}
        b = {e: c for e, c in b.items() if e + ea0 < limit}
        if not a or not b:
            return {}
    n = 1
    for c in a.values():
        n = _lcm(n, c.conductor)
    for c in b.values():
        n = _lcm(n, c.conductor)
    _check_cap(n)
    phi = totient(n)
    width = 2 * phi - 1
    ra, da, ma = _prepare(a, n, width)
    rb, db, mb = _prepare(b, n, width)
    la, lb = max(a) - ea0 + 1, max(b) - eb0 + 1
    bound = ma * mb * min(la, lb) * phi
    nbytes = (bound.bit_length() + 1) // 8 + 1
    va = _pack(ra, ea0, la, width, nbytes)
    vb = _pack(rb, eb0, lb, width, nbytes)
    lp = la + lb - 1
    if limit is not None:
        lp = min(lp, limit - ea0 - eb0)
    slots = lp * width
    half = 1 << (8 * nbytes - 1)
    bias_chunk = bytes(nbytes - 1) + b"\x80"
    bias = int.from_bytes(bias_chunk * slots, "little")
    # digits c_i + half all lie in [0, 2^(8 nbytes)), so masking the biased
    # product to the retained slots recovers them without borrow handling
    if len(ra) * len(rb) > 64 and _big is not int:
        prod = int(_big(va) * _big(vb))
    else:
        prod = va * vb
    val = (prod + bias) & ((1 << (8 * nbytes * slots)) - 1)
    raw = val.to_bytes(nbytes * slots, "little")
    out = {}
    den = da * db
    step = width * nbytes
    for i in range(lp):
        chunk = raw[i * step:(i + 1) * step]
        if chunk == bias_chunk * width:
            continue
        v = [int.from_bytes(chunk[j * nbytes:(j + 1) * nbytes], "little") - half
             for j in range(width)]
        if n > 1:
            v = _reduce(v, n)
        v = _strip(v)
        if v:
            out[i + ea0 + eb0] = CyclotomicNumber._make(v, den, n)
    return out
