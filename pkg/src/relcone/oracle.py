"""Numeric secant-direction oracle for relative tangent cones.

Pairs of parameters (t, tau) are drawn uniformly from a small disk, the
secant y(tau) - x(t) is normalized, and its distance to the symbolic cone
is measured.  Soundness (every sampled direction is close to the cone) is
the certified check; coverage (every cone component is approached by some
sample) is heuristic and only reported.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .branch import Branch, degree
from .cone import LinearCone
from .cyclo import to_complex
from .errors import AllDegenerate

__all__ = ["SecantSample", "ValidationReport", "sample", "validate", "convergence_sweep",
           "evaluate"]

N_PROBES = 64


def _coefficient_arrays(b: Branch):
    out = []
    for s in b.coords:
        items = s.items()
        exps = np.array([e for e, _ in items], dtype=np.int64)
        coefs = np.array([to_complex(c) for _, c in items], dtype=complex)
        out.append((exps, coefs))
    return out


def evaluate(b: Branch, params) -> np.ndarray:
    """Germ coordinates (base point removed) at complex parameters; shape (m, n)."""
    params = np.asarray(params, dtype=complex)
    cols = []
    for exps, coefs in _coefficient_arrays(b):
        if exps.size == 0:
            cols.append(np.zeros(params.shape, dtype=complex))
        else:
            cols.append((params[:, None] ** exps[None, :]) @ coefs)
    return np.stack(cols, axis=-1)


@dataclass
class SecantSample:
    radius: float
    seed: int
    pairs: np.ndarray          # (m_kept, 2) complex: columns t, tau
    directions: np.ndarray     # (m_kept, n) complex unit vectors
    discarded: int = 0

    @property
    def count(self) -> int:
        return len(self.directions)


def _disk(rng, r: float, m: int) -> np.ndarray:
    rad = r * np.sqrt(rng.random(m))
    ang = 2 * np.pi * rng.random(m)
    return rad * np.exp(1j * ang)


def sample(x: Branch, y: Branch, r: float, m: int, seed: int = 0) -> SecantSample:
    if not 0 < r <= 0.1:
        raise ValueError("radius must lie in (0, 0.1]")
    if m < 1:
        raise ValueError("need at least one sample")
    rng = np.random.default_rng(seed)
    t = _disk(rng, r, m)
    tau = _disk(rng, r, m)
    sec = evaluate(y, tau) - evaluate(x, t)
    norms = np.linalg.norm(sec, axis=1)
    floor = 1e-14 * r ** max(degree(x), degree(y))
    keep = norms > floor
    if not keep.any():
        raise AllDegenerate(f"all {m} secants fell below {floor:.3g}")
    dirs = sec[keep] / norms[keep, None]
    return SecantSample(r, seed, np.stack([t[keep], tau[keep]], axis=1), dirs,
                        int(m - keep.sum()))


def _orthonormal(c: LinearCone):
    bases = []
    for s in c.subspaces:
        mat = np.array([[to_complex(v) for v in row] for row in s.basis], dtype=complex).T
        q, _ = np.linalg.qr(mat)
        bases.append(q)
    return bases


def _distances(dirs: np.ndarray, bases) -> np.ndarray:
    best = np.full(len(dirs), np.inf)
    for q in bases:
        proj = (dirs @ q.conj()) @ q.T
        best = np.minimum(best, np.linalg.norm(dirs - proj, axis=1))
    return best


@dataclass
class ValidationReport:
    soundness: float
    coverage: list
    passed: bool
    discarded: int
    seed: int
    radius: float
    samples: int
    tol: float
    worst_pair: tuple | None = None

    def to_json(self) -> dict:
        return {
            "soundness": self.soundness,
            "coverage": self.coverage,
            "passed": self.passed,
            "discarded": self.discarded,
            "seed": self.seed,
            "radius": self.radius,
            "samples": self.samples,
            "tol": self.tol,
        }


def validate(s: SecantSample, c: LinearCone, tol: float = 1e-2) -> ValidationReport:
    if not c.subspaces:
        raise ValueError("cone is empty")
    bases = _orthonormal(c)
    dist = _distances(s.directions, bases)
    worst = int(np.argmax(dist))
    soundness = float(dist[worst])
    probe_rng = np.random.default_rng(12345)
    coverage = []
    for q in bases:
        a = probe_rng.normal(size=(N_PROBES, q.shape[1])) + 1j * probe_rng.normal(size=(N_PROBES, q.shape[1]))
        probes = a @ q.T
        probes /= np.linalg.norm(probes, axis=1)[:, None]
        # distance between complex lines: sqrt(1 - |<p, d>|^2)
        overlap = np.abs(probes.conj() @ s.directions.T)
        gap = np.sqrt(np.clip(1 - overlap.max(axis=1) ** 2, 0, None))
        coverage.append(float(np.mean(gap <= tol)))
    return ValidationReport(soundness, coverage, soundness <= tol, s.discarded, s.seed,
                            s.radius, s.count + s.discarded, tol,
                            tuple(complex(v) for v in s.pairs[worst]))


def convergence_sweep(x: Branch, y: Branch, cone: LinearCone, radii, m: int = 2000,
                      seed: int = 0) -> list:
    radii = list(radii)
    if any(b >= a for a, b in zip(radii, radii[1:])):
        raise ValueError("radii must be strictly decreasing")
    return [validate(sample(x, y, r, m, seed), cone).soundness for r in radii]
