"""Derived analytics over scorecards.

Three concerns live here: the TAI-watch rule (flag AI-related IUs whose
impact is both immediate and large overall), per-criterion contribution
shares for explaining a composite, and Monte-Carlo stability of the
registry ranking under assessor-disagreement noise.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import rubric
from .registry import Store
from .rubric import Criterion, ScoreCard

AI_TAG = "ai-related"

# Stability runs draw from numpy's PCG64; the identifier is recorded in
# every report so results stay reproducible across implementations of
# the same generator.
RNG_ALGORITHM = "numpy-pcg64"


class InsufficientIUsError(Exception):
    """Rank stability needs at least two scored IUs."""


@dataclass(frozen=True)
class TaiAlertConfig:
    """Thresholds for the TAI-watch rule; every field is overridable."""

    immediacy_min: int = 4
    composite_min: int = 70
    require_ai_tag: bool = True


@dataclass(frozen=True)
class TaiAssessment:
    """Outcome of the TAI-watch rule with one reason line per clause."""

    iu_id: str
    flagged: bool
    reasons: tuple[str, ...]

    @property
    def reason(self) -> str:
        return "; ".join(self.reasons)


def tai_flag(record, card: ScoreCard, config: TaiAlertConfig | None = None) -> TaiAssessment:
    """Apply the TAI-watch rule to one IU's card.

    Flags when the IU carries the ai-related tag (unless the config
    waives it), its immediacy level is at least immediacy_min, and its
    composite is at least composite_min. The reasons name every clause,
    passed or failed.
    """
    config = config or TaiAlertConfig()
    violations = rubric.validate_scorecard(card)
    if violations:
        raise rubric.InvalidScoreCardError(violations)

    reasons = []
    if not config.require_ai_tag:
        tag_ok = True
        reasons.append("tag clause waived (require_ai_tag=false)")
    elif AI_TAG in record.tags:
        tag_ok = True
        reasons.append(f"tag '{AI_TAG}' present")
    else:
        tag_ok = False
        reasons.append(f"tag '{AI_TAG}' missing")

    immediacy = card.level(Criterion.IMMEDIACY_OF_IMPACT)
    if immediacy >= config.immediacy_min:
        immediacy_ok = True
        reasons.append(f"immediacy {immediacy} >= {config.immediacy_min}")
    else:
        immediacy_ok = False
        reasons.append(f"immediacy {immediacy} < {config.immediacy_min}")

    comp = rubric.composite(card).value
    if comp >= config.composite_min:
        composite_ok = True
        reasons.append(f"composite {comp} >= {config.composite_min}")
    else:
        composite_ok = False
        reasons.append(f"composite {comp} < {config.composite_min}")

    return TaiAssessment(
        iu_id=getattr(record, "id", ""),
        flagged=tag_ok and immediacy_ok and composite_ok,
        reasons=tuple(reasons),
    )


def contribution(card: ScoreCard) -> dict[Criterion, float]:
    """Each criterion's share of the raw level sum; shares add up to 1."""
    violations = rubric.validate_scorecard(card)
    if violations:
        raise rubric.InvalidScoreCardError(violations)
    raw_sum = sum(card.levels())
    return {criterion: card.level(criterion) / raw_sum for criterion in rubric.CRITERIA}


@dataclass(frozen=True)
class LevelNoise:
    """Per-level perturbation: with probability flip_prob move one step
    up or down (equal odds), clamping to the valid level range."""

    flip_prob: float

    def __post_init__(self):
        if not 0.0 <= self.flip_prob <= 1.0:
            raise ValueError(f"flip_prob must be in [0, 1], got {self.flip_prob}")


@dataclass(frozen=True)
class StabilityReport:
    """Per-IU probability of keeping its unperturbed rank position."""

    retention: dict[str, float]
    baseline: tuple[tuple[str, int], ...]
    trials: int
    seed: int
    noise: LevelNoise
    algorithm: str = RNG_ALGORITHM


def rank_stability(
    store: Store, noise: LevelNoise, trials: int, seed: int
) -> StabilityReport:
    """Monte-Carlo rank retention under level noise.

    Every trial independently perturbs each criterion level of each
    scored IU, recomputes composites, re-ranks, and counts the IUs that
    kept their unperturbed position. Deterministic for a fixed seed:
    trial t draws from a generator sub-seeded with (seed, t), so serial
    and parallel runs agree bit for bit.
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    if seed < 0:
        raise ValueError(f"seed must be non-negative, got {seed}")
    scored = []
    for iu in store.ius():
        latest = store.latest_score(iu.id)
        if latest is not None:
            scored.append((iu.id, latest.card))
    if len(scored) < 2:
        raise InsufficientIUsError(
            f"rank stability needs >= 2 scored IUs, store has {len(scored)}"
        )

    ids = [iu_id for iu_id, _ in scored]  # ascending, store.ius() is sorted
    levels = np.array([card.levels() for _, card in scored], dtype=np.int64)
    baseline = _rank_ids(ids, levels)
    baseline_pos = {iu_id: pos for pos, iu_id in enumerate(baseline)}

    retained = {iu_id: 0 for iu_id in ids}
    for trial in range(trials):
        rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence((seed, trial))))
        flips = rng.random(levels.shape) < noise.flip_prob
        directions = rng.integers(0, 2, size=levels.shape) * 2 - 1
        perturbed = np.clip(levels + flips * directions, rubric.MIN_LEVEL, rubric.MAX_LEVEL)
        for pos, iu_id in enumerate(_rank_ids(ids, perturbed)):
            if baseline_pos[iu_id] == pos:
                retained[iu_id] += 1

    baseline_entries = tuple(
        (iu_id, rubric.scale_raw_sum(int(levels[ids.index(iu_id)].sum())))
        for iu_id in baseline
    )
    return StabilityReport(
        retention={iu_id: retained[iu_id] / trials for iu_id in ids},
        baseline=baseline_entries,
        trials=trials,
        seed=seed,
        noise=noise,
    )


def _rank_ids(ids: list[str], levels: np.ndarray) -> list[str]:
    # descending composite, ties by ascending id; ids arrive sorted, and
    # sorted() is stable, so sorting on -composite alone preserves that
    composites = [rubric.scale_raw_sum(int(row.sum())) for row in levels]
    order = sorted(range(len(ids)), key=lambda i: -composites[i])
    return [ids[i] for i in order]
