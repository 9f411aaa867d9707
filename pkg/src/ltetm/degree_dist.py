"""Output-symbol degree distribution for LT codes."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

# Coefficients used in all experiments; they sum to 1.001 and get renormalized.
REFERENCE_PAIRS: list[tuple[int, float]] = [
    (1, 0.008),
    (2, 0.494),
    (3, 0.166),
    (4, 0.073),
    (5, 0.083),
    (8, 0.056),
    (9, 0.037),
    (19, 0.056),
    (65, 0.025),
    (66, 0.003),
]


class DistributionError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class DegreeDistribution:
    degrees: np.ndarray
    probs: np.ndarray
    raw_weights: np.ndarray | None = None
    cdf: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        cdf = np.cumsum(self.probs)
        cdf[-1] = 1.0
        object.__setattr__(self, "cdf", cdf)

    @property
    def raw_mass(self) -> float:
        """Total of the weights as given, before renormalization."""
        return 1.0 if self.raw_weights is None else float(self.raw_weights.sum())

    @property
    def entries(self) -> list[tuple[int, float]]:
        return [(int(d), float(p)) for d, p in zip(self.degrees, self.probs)]

    @property
    def max_degree(self) -> int:
        return int(self.degrees[-1])

    def pmf(self, degree: int) -> float:
        hit = np.flatnonzero(self.degrees == degree)
        return float(self.probs[hit[0]]) if hit.size else 0.0

    def to_records(self) -> list[dict]:
        weights = self.probs if self.raw_weights is None else self.raw_weights
        return [{"degree": int(d), "weight": float(w)} for d, w in zip(self.degrees, weights)]


def from_pairs(pairs) -> DegreeDistribution:
    """Build a distribution from ``(degree, weight)`` pairs, renormalizing the weights."""
    pairs = list(pairs)
    if not pairs:
        raise DistributionError("degree distribution needs at least one (degree, weight) pair")
    degrees = [int(d) for d, _ in pairs]
    weights = [float(w) for _, w in pairs]
    if len(set(degrees)) != len(degrees):
        raise DistributionError(f"duplicate degree in {degrees}")
    if any(d < 1 for d in degrees):
        raise DistributionError(f"degrees must be >= 1, got {degrees}")
    if any(not w > 0 for w in weights):
        raise DistributionError(f"weights must be positive, got {weights}")
    order = np.argsort(degrees)
    degrees_arr = np.asarray(degrees, dtype=np.int64)[order]
    weights_arr = np.asarray(weights, dtype=np.float64)[order]
    total = float(weights_arr.sum())
    return DegreeDistribution(degrees_arr, weights_arr / total, raw_weights=weights_arr)


def from_records(records) -> DegreeDistribution:
    """Config-file form: a list of ``{degree, weight}`` tables."""
    return from_pairs((r["degree"], r["weight"]) for r in records)


def reference_distribution() -> DegreeDistribution:
    return from_pairs(REFERENCE_PAIRS)


def sample_degree(dist: DegreeDistribution, rng: np.random.Generator) -> int:
    """Inverse-CDF draw using a single uniform from ``rng``."""
    return degree_for_uniform(dist, rng.random())


def degree_for_uniform(dist: DegreeDistribution, u):
    idx = np.searchsorted(dist.cdf, u, side="right")
    idx = np.minimum(idx, len(dist.degrees) - 1)
    out = dist.degrees[idx]
    return int(out) if np.ndim(out) == 0 else out


def sample_degrees(dist: DegreeDistribution, rng: np.random.Generator, size: int) -> np.ndarray:
    return degree_for_uniform(dist, rng.random(size))


def average_degree(dist: DegreeDistribution) -> float:
    return float(np.dot(dist.degrees, dist.probs))
