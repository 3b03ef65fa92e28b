"""Named example branches and a seeded generator of random branch pairs."""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

from .branch import Branch
from .cyclo import ONE, ZERO, CyclotomicNumber, root_of_unity
from .series import TruncatedSeries

# roots of unity whose orders divide 12 keep the coefficient fields small
_UNIT_ORDERS = (1, 2, 3, 4, 6)
_RATIONALS = (Fraction(1), Fraction(2), Fraction(1, 2), Fraction(3), Fraction(-1, 3), Fraction(5, 2))


def two_cusps() -> tuple[Branch, Branch]:
    """X = (t^2, t^3, 0) and Y = (t^2, 0, t^3) in C^3."""
    return (Branch.from_coords(["t^2", "t^3", "0"], label="X"),
            Branch.from_coords(["t^2", "0", "t^3"], label="Y"))


def cusp(label="cusp") -> Branch:
    return Branch.from_coords(["t^2", "t^3"], label=label)


def _unit(rng: random.Random, field: int | None = None) -> CyclotomicNumber:
    m = rng.choice(_UNIT_ORDERS) if field is None else field
    return root_of_unity(m, rng.randrange(m))


def small_coefficient(rng: random.Random, field: int | None = None) -> CyclotomicNumber:
    """Small rational times a root of unity (of order dividing ``field`` if given, else 12)."""
    return _unit(rng, field) * rng.choice(_RATIONALS)


def _direction(rng: random.Random, n: int) -> list:
    """Random nonzero vector whose last nonzero entry is 1."""
    while True:
        p = rng.randrange(n)
        v = [ZERO] * n
        v[p] = ONE
        for j in range(p):
            if rng.random() < 0.5:
                v[j] = CyclotomicNumber.from_rational(rng.randint(-2, 2))
        return v


@dataclass(frozen=True)
class RandomPair:
    x: Branch
    y: Branch
    shared: bool
    seed: int


def random_branch(rng: random.Random, n: int, k: int, tangent, label: str,
                  max_degree: int = 12, terms: int = 3, field: int | None = None) -> Branch:
    """Polynomial branch of degree k with the given tangent direction.

    The leading scalar is (rational * root of unity)^k so normalization
    never needs a field extension.
    """
    rho = CyclotomicNumber.from_rational(rng.choice((1, 1, 2, Fraction(1, 2)))) * _unit(rng, field)
    lead = rho ** k
    coords = [TruncatedSeries({k: lead * v}) if v else TruncatedSeries() for v in tangent]
    exps = set()
    for _ in range(terms):
        e = rng.randint(k + 1, max_degree)
        i = rng.randrange(n)
        coords[i] = coords[i] + TruncatedSeries({e: small_coefficient(rng, field)})
        exps.add(e)
    # parametrization, not a ramified description
    if k > 1 and math.gcd(k, *exps) != 1:
        i = rng.randrange(n)
        if tangent[i] and n > 1:
            i = (i + 1) % n
        coords[i] = coords[i] + TruncatedSeries({k + 1: small_coefficient(rng, field)})
    return Branch(tuple(coords), label=label)


def random_pair(seed: int, max_k: int = 6, dims=(2, 3, 4), shared_prob: float = 0.7,
                max_degree: int = 12) -> RandomPair:
    """Seeded random pair; all coefficients of one pair share a field Q(zeta_m), m | 12.

    One field per pair keeps conductors small even after substituting
    t -> mu t with mu^(kl) = 1.
    """
    rng = random.Random(seed)
    field = rng.choice(_UNIT_ORDERS)
    n = rng.choice(dims)
    k, l = rng.randint(1, max_k), rng.randint(1, max_k)
    tx = _direction(rng, n)
    shared = rng.random() < shared_prob
    if shared:
        ty = tx
    else:
        while True:
            ty = _direction(rng, n)
            if not _parallel(tx, ty):
                break
    x = random_branch(rng, n, k, tx, f"x{seed}", max_degree, field=field)
    y = random_branch(rng, n, l, ty, f"y{seed}", max_degree, field=field)
    return RandomPair(x, y, shared, seed)


def _parallel(u, v) -> bool:
    return all(a * d == b * c for a, b in zip(u, v) for c, d in zip(u, v))


def random_invertible(rng: random.Random, n: int, entries=(-2, -1, 0, 1, 2)):
    """Random invertible integer matrix (rows)."""
    from . import linalg
    while True:
        mat = [[CyclotomicNumber.from_rational(rng.choice(entries)) for _ in range(n)] for _ in range(n)]
        if linalg.rank(mat) == n:
            return tuple(tuple(r) for r in mat)
