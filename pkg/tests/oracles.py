"""Independent reference implementations the tests check against.

Nothing here may import the package's scoring paths: the composite
oracle uses exact rational arithmetic with explicit half-up rounding,
and the stability oracle is a from-scratch perturb-and-rank loop on the
stdlib RNG. Pinned values below were produced by these oracles ahead of
the build and are frozen as regression constants.
"""

from __future__ import annotations

import random
from fractions import Fraction

GOLDEN_LEVELS = {
    "communism": (2, 4, 5, 2, 3, 3),
    "wheel": (5, 5, 1, 1, 5, 1),
    "world-wide-web": (5, 5, 3, 1, 3, 4),
}

# Stability ground truth for the golden store under +/-1 noise with
# p=0.5, from oracle_rank_stability(trials=2_000_000, seed=20260810).
# Monte-Carlo error at that size is ~5e-4.
STABILITY_PINS = {
    "communism": 0.5108,
    "wheel": 0.6852,
    "world-wide-web": 0.7149,
}
STABILITY_NOISE_P = 0.5
STABILITY_TRIALS = 10_000
STABILITY_SEED = 42
STABILITY_TOLERANCE = 0.01


def oracle_composite(levels) -> int:
    """Exact rational scaling of the level sum to 100, rounded half up."""
    scaled = Fraction(sum(levels) * 100, 30)
    floor = scaled.numerator // scaled.denominator
    return floor + (1 if scaled - floor >= Fraction(1, 2) else 0)


def oracle_rank(levels_by_id: dict) -> list[str]:
    """Descending oracle composite, ties by ascending id."""
    return sorted(levels_by_id, key=lambda iu: (-oracle_composite(levels_by_id[iu]), iu))


def oracle_rank_stability(
    levels_by_id: dict, flip_prob: float, trials: int, seed: int
) -> dict[str, float]:
    """Perturb-and-rank loop on random.Random; returns retention fractions."""
    baseline_pos = {iu: pos for pos, iu in enumerate(oracle_rank(levels_by_id))}
    rng = random.Random(seed)
    retained = {iu: 0 for iu in levels_by_id}
    for _ in range(trials):
        perturbed = {}
        for iu in sorted(levels_by_id):
            levels = []
            for level in levels_by_id[iu]:
                if rng.random() < flip_prob:
                    level += 1 if rng.random() < 0.5 else -1
                    level = min(5, max(1, level))
                levels.append(level)
            perturbed[iu] = levels
        for pos, iu in enumerate(oracle_rank(perturbed)):
            if baseline_pos[iu] == pos:
                retained[iu] += 1
    return {iu: count / trials for iu, count in retained.items()}
