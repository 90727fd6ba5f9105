"""Collusion attacks: the symbolic marking model and a real-valued signal model."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _seeding
from .code import Code, EvidenceVector, desc, normalize_coalition
from .errors import ParameterError, ShapeError, ValidationError

ORTHO_TOL = 1e-9
DEFAULT_EPS = 1e-6


def symbolic_attack(code: Code, coalition) -> EvidenceVector:
    """Noiseless marking outcome: the descendant of the coalition."""
    return desc(code, coalition)


@dataclass(frozen=True, eq=False)
class SignalModel:
    """Host vector ``x`` in R^m and ``n`` orthonormal watermark signals (rows of ``basis``)."""

    m: int
    n: int
    x: np.ndarray
    basis: np.ndarray
    seed: int | None = None

    def __post_init__(self):
        if self.m < self.n:
            raise ValidationError(f"host dimension m={self.m} < code length n={self.n}")
        if self.basis.shape != (self.n, self.m) or self.x.shape != (self.m,):
            raise ValidationError("basis/host shape mismatch")
        gram = self.basis @ self.basis.T
        if np.abs(gram - np.eye(self.n)).max() > ORTHO_TOL:
            raise ValidationError("basis not orthonormal")

    @classmethod
    def random(cls, n: int, m: int | None = None, seed: int = 0, host_scale: float = 1.0) -> SignalModel:
        m = 4 * n if m is None else m
        gen = _seeding.rng(seed, "signal", n, m)
        q, _ = np.linalg.qr(gen.standard_normal((m, n)))
        x = host_scale * gen.standard_normal(m)
        return cls(m, n, x, np.ascontiguousarray(q.T), seed)

    @classmethod
    def canonical(cls, n: int, m: int | None = None) -> SignalModel:
        m = n if m is None else m
        return cls(m, n, np.zeros(m), np.eye(n, m), None)

    def embed(self, word) -> np.ndarray:
        return self.x + np.asarray(word, dtype=float) @ self.basis

    def extract(self, y: np.ndarray) -> np.ndarray:
        return self.basis @ (y - self.x)


@dataclass(frozen=True)
class AttackSpec:
    coalition: tuple[int, ...]
    weights: tuple[float, ...]

    def __post_init__(self):
        if not self.coalition:
            raise ShapeError("empty coalition")
        if len(set(self.coalition)) != len(self.coalition):
            raise ValidationError("repeated coalition member")
        if len(self.weights) != len(self.coalition):
            raise ValidationError("one weight per coalition member required")
        w = np.asarray(self.weights, dtype=float)
        if (w <= 0).any() or (w > 1).any() or abs(w.sum() - 1) > 1e-12:
            raise ValidationError("weights must be positive and sum to 1")

    @classmethod
    def uniform(cls, coalition) -> AttackSpec:
        c = tuple(coalition)
        return cls(c, tuple([1 / len(c)] * len(c)))

    @classmethod
    def dirichlet(cls, coalition, gen: np.random.Generator, floor: float = 0.0) -> AttackSpec:
        """Dirichlet(1,...,1) weights, resampled until every weight exceeds ``floor``."""
        c = tuple(coalition)
        while True:
            w = gen.dirichlet(np.ones(len(c)))
            w = w / w.sum()
            w[-1] = 1.0 - w[:-1].sum()
            if w.min() > floor:
                return cls(c, tuple(float(v) for v in w))


def forge(model: SignalModel, code: Code, spec: AttackSpec) -> np.ndarray:
    """Weighted average of the coalition's marked copies."""
    ys = np.stack([model.embed(code[j]) for j in spec.coalition])
    return np.asarray(spec.weights) @ ys


def classify(s: np.ndarray, eps: float) -> EvidenceVector:
    sets = []
    for v in s:
        if abs(v) < eps:
            sets.append(1)
        elif abs(v - 1) < eps:
            sets.append(2)
        else:
            sets.append(3)
    return EvidenceVector(2, len(sets), tuple(sets))


def signal_pipeline(
    model: SignalModel, code: Code, spec: AttackSpec, eps: float = DEFAULT_EPS, diagnostic: bool = False
) -> EvidenceVector:
    """Embed, average, extract by inner products with the host removed, and threshold."""
    if code.q != 2:
        raise ParameterError("signal model needs a binary code")
    if model.n != code.n:
        raise ShapeError(f"shape error: model length {model.n} != code length {code.n}")
    normalize_coalition(code, spec.coalition)
    if eps >= min(spec.weights):
        raise ParameterError(f"ambiguous threshold: eps={eps} >= min weight {min(spec.weights)}")
    d = classify(model.extract(forge(model, code, spec)), eps)
    if diagnostic and d != symbolic_attack(code, spec.coalition):
        raise AssertionError("signal evidence differs from the symbolic descendant")
    return d
