"""Pure scoring core for the Transform-o-meter rubric.

An Innovation Unit (IU) is rated on six criteria, each as an integer
level from 1 to 5 against a fixed anchor text. The six levels are summed
and scaled to a 0-100 integer composite with half-up rounding:

    composite = round_half_up(raw_sum * 100 / 30)

With all levels at 1 the composite bottoms out at 20; with all levels at
5 it reaches 100. Everything in this module is side-effect-free and all
values are immutable after construction.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum
from typing import Iterable, Mapping

MIN_LEVEL = 1
MAX_LEVEL = 5
MIN_RAW_SUM = 6
MAX_RAW_SUM = 30
MIN_COMPOSITE = 20
MAX_COMPOSITE = 100


class Criterion(str, Enum):
    """The six rubric criteria. The set is closed; values are the wire keys."""

    SUPERSEEDNESS = "superseedness"
    ECONOMIC_IMPACT = "economic_impact"
    CENTRALIZATION = "centralization"
    IMMEDIACY_OF_IMPACT = "immediacy_of_impact"
    UNIQUENESS = "uniqueness"
    COUNTERFACTUAL_IMPACT = "counterfactual_impact"

    @property
    def display_name(self) -> str:
        return _DISPLAY_NAMES[self]

    @property
    def anchors(self) -> tuple[str, str, str, str, str]:
        """Anchor texts for levels 1 through 5, in that order."""
        return _ANCHORS[self]


CRITERIA: tuple[Criterion, ...] = tuple(Criterion)

_DISPLAY_NAMES: dict[Criterion, str] = {
    Criterion.SUPERSEEDNESS: "Super-seedness Protection",
    Criterion.ECONOMIC_IMPACT: "Magnitude of Economic Impact",
    Criterion.CENTRALIZATION: "Centralization",
    Criterion.IMMEDIACY_OF_IMPACT: "Immediacy of impact",
    Criterion.UNIQUENESS: "Uniqueness",
    Criterion.COUNTERFACTUAL_IMPACT: "Counter-factual impact",
}

# Anchor texts are reproduced verbatim from the published rubric,
# including its own spellings ("super-seeded", "could've"), so quoting
# surfaces (docs, UI, tests) can match them exactly.
_ANCHORS: dict[Criterion, tuple[str, str, str, str, str]] = {
    Criterion.SUPERSEEDNESS: (
        "The IU has been completely replaced by other, completely different, "
        "IU; it is useless.",
        "The IU has been mostly replaced by other IUs that take inspiration "
        "from the original one.",
        "The IU is used for its original purpose in mostly equal conjunction "
        "with other, later/contemporary IUs.",
        "The IU is, currently, the most dominant tool used for the purpose it "
        "was created for, although other IUs exist that do the same thing but "
        "are not as dominant and/or severely depend on this particular IU.",
        "The IU is, currently, the most dominant and efficient tool used for "
        "the purpose it was originally created for. No other known IU can "
        "compare.",
    ),
    Criterion.ECONOMIC_IMPACT: (
        "The IU has had minimal economic impact.",
        "The economic impact of the IU is significant, but limited to a "
        "specific area of expertise/research.",
        "The economic impact of the IU is significant and wide-reaching "
        "across several areas of expertise.",
        "The IU managed to alter the way at least a generation has engaged "
        "in economic activities.",
        "The IU fundamentally changed the way humanity engages in economic "
        "activities.",
    ),
    Criterion.CENTRALIZATION: (
        "The IU was created by several civilizations/societies over an "
        "either unspecified, or centuries-long time period.",
        "The IU was created as a decentralized effort by an entire "
        "civilization in a period no longer than a century.",
        "The IU was created as an uncoordinated effort of different "
        "people/groups of people over the span of several decades.",
        "The IU was created as a coordinated effort of different "
        "people/groups of people over the span of several decades.",
        "The IU was created as a coordinated effort of a singular "
        "person/group of people over a period no longer than a decade.",
    ),
    Criterion.IMMEDIACY_OF_IMPACT: (
        "The full impact of the IU was not felt until centuries after its "
        "invention.",
        "The full impact of the IU was not felt until no more than a century "
        "after its invention.",
        "The full impact of the IU was not felt until no more than half a "
        "century after its invention.",
        "The full impact of the IU was not felt until no more than less than "
        "quarter of a century after its invention.",
        "The full impact of the IU was not felt until no more than a decade "
        "after its invention.",
    ),
    Criterion.UNIQUENESS: (
        "Not novel at all; similar IUs were developed more than a century "
        "before this one.",
        "Not very novel; similar IUs were developed less than a century "
        "before this one.",
        "Contemporarily novel; similar IUs were around the same time as "
        "this one.",
        "Novel; the IU shares minimal, but noticeable similarity to other "
        "contemporary IUs.",
        "Top of the line; the IU shares little to no similarity to other "
        "contemporary and previous IUs.",
    ),
    Criterion.COUNTERFACTUAL_IMPACT: (
        "Other, independent, unrelated peoples developed virtually the same "
        "IU at around the same time.",
        "Someone working on the same circle developed virtually the same IU "
        "at around the same time.",
        "If someone else had the same material resources as the innovator, "
        "it is very probable that it could've invented it.",
        "If someone else had the same material resources as the innovator, "
        "it is very unlikely that it could've invented it.",
        "If someone else had the same material resources as the innovator, "
        "it is impossible that it could've invented it.",
    ),
}


class UnknownCriterionError(ValueError):
    """A criterion identity outside the closed six-member set."""

    def __init__(self, key: object):
        super().__init__(f"unknown criterion: {key!r}")
        self.key = key


class LevelOutOfRangeError(ValueError):
    """A level outside [1, 5] (or not an integer) where one is required."""

    def __init__(self, level: object):
        super().__init__(
            f"level must be an integer in [{MIN_LEVEL}, {MAX_LEVEL}], got {level!r}"
        )
        self.level = level


class InvalidScoreCardError(ValueError):
    """Raised when an operation requires a valid scorecard and got violations."""

    def __init__(self, violations: list[str]):
        super().__init__("invalid scorecard: " + "; ".join(violations))
        self.violations = violations


def coerce_criterion(key: object) -> Criterion:
    """Map a wire key or Criterion to the enum, or raise UnknownCriterionError."""
    if isinstance(key, Criterion):
        return key
    try:
        return Criterion(key)
    except ValueError:
        raise UnknownCriterionError(key) from None


def anchor_text(criterion: Criterion | str, level: int) -> str:
    """Return the verbatim anchor string for a criterion at a level in [1, 5]."""
    crit = coerce_criterion(criterion)
    if not _is_level(level):
        raise LevelOutOfRangeError(level)
    return _ANCHORS[crit][level - 1]


def _is_level(level: object) -> bool:
    return isinstance(level, int) and not isinstance(level, bool) and MIN_LEVEL <= level <= MAX_LEVEL


@dataclass(frozen=True)
class CriterionScore:
    """One criterion's assessed level plus the assessor's free-text rationale."""

    criterion: Criterion
    level: int
    rationale: str = ""


@dataclass(frozen=True)
class ScoreCard:
    """A full six-criterion assessment of one IU.

    Entries are kept as given so that validate_scorecard can report
    missing or duplicated criteria on arbitrary candidate input; use
    from_levels to build a well-formed card in canonical order.
    """

    entries: tuple[CriterionScore, ...]

    @classmethod
    def from_levels(
        cls,
        levels: Mapping[Criterion | str, int],
        rationales: Mapping[Criterion | str, str] | None = None,
    ) -> "ScoreCard":
        """Build a card from a criterion->level mapping, in canonical order."""
        notes = {coerce_criterion(k): v for k, v in (rationales or {}).items()}
        by_crit = {coerce_criterion(k): v for k, v in levels.items()}
        return cls(
            entries=tuple(
                CriterionScore(c, by_crit[c], notes.get(c, ""))
                for c in CRITERIA
                if c in by_crit
            )
        )

    def level(self, criterion: Criterion | str) -> int:
        crit = coerce_criterion(criterion)
        for entry in self.entries:
            if entry.criterion is crit:
                return entry.level
        raise KeyError(crit.value)

    def levels(self) -> tuple[int, ...]:
        """The six levels in canonical criterion order (valid cards only)."""
        return tuple(self.level(c) for c in CRITERIA)

    def with_level(self, criterion: Criterion | str, level: int) -> "ScoreCard":
        """A copy with one criterion's level substituted; rationale kept."""
        crit = coerce_criterion(criterion)
        return ScoreCard(
            entries=tuple(
                replace(e, level=level) if e.criterion is crit else e
                for e in self.entries
            )
        )

    def to_wire(self) -> dict[str, dict[str, object]]:
        """Serialize as {criterion_key: {level, rationale}}."""
        return {
            e.criterion.value: {"level": e.level, "rationale": e.rationale}
            for e in self.entries
        }

    @classmethod
    def from_wire(cls, payload: Mapping[str, object]) -> "ScoreCard":
        """Parse {criterion_key: {level, rationale}} or {criterion_key: level}.

        Unknown criterion keys are rejected here; range/coverage problems
        are left for validate_scorecard so callers get the full violation
        list in one pass.
        """
        unknown = [k for k in payload if k not in Criterion._value2member_map_]
        if unknown:
            raise InvalidScoreCardError(
                [f"unknown criterion: {k!r}" for k in sorted(map(str, unknown))]
            )
        entries = []
        for key, value in payload.items():
            crit = Criterion(key)
            if isinstance(value, Mapping):
                level = value.get("level")
                rationale = str(value.get("rationale", "") or "")
            else:
                level, rationale = value, ""
            entries.append(CriterionScore(crit, level, rationale))
        entries.sort(key=lambda e: CRITERIA.index(e.criterion))
        return cls(entries=tuple(entries))


@dataclass(frozen=True)
class CompositeScore:
    """The normalized 0-100 composite and the underlying level sum."""

    value: int
    raw_sum: int


def validate_scorecard(card: ScoreCard) -> list[str]:
    """Check a candidate card; return all violations (empty list means ok).

    Violations cover missing criteria, duplicated criteria, and levels
    that are not integers in [1, 5]. Nothing is raised.
    """
    violations: list[str] = []
    seen: dict[Criterion, int] = {}
    for entry in card.entries:
        seen[entry.criterion] = seen.get(entry.criterion, 0) + 1
        if not _is_level(entry.level):
            violations.append(
                f"level out of range for {entry.criterion.value}: {entry.level!r}"
            )
    for criterion in CRITERIA:
        count = seen.get(criterion, 0)
        if count == 0:
            violations.append(f"missing criterion: {criterion.value}")
        elif count > 1:
            violations.append(f"duplicate criterion: {criterion.value}")
    return violations


def scale_raw_sum(raw_sum: int) -> int:
    # round_half_up(raw_sum * 100 / 30) in exact integer arithmetic:
    # floor((raw_sum*100 + 15) / 30) == (raw_sum*200 + 30) // 60
    return (raw_sum * 200 + 30) // 60


def composite(card: ScoreCard) -> CompositeScore:
    """Sum the six levels and scale to the 0-100 integer composite.

    Raises InvalidScoreCardError if the card fails validate_scorecard;
    an invalid card here signals a caller bug, not user input.
    """
    violations = validate_scorecard(card)
    if violations:
        raise InvalidScoreCardError(violations)
    raw_sum = sum(entry.level for entry in card.entries)
    return CompositeScore(value=scale_raw_sum(raw_sum), raw_sum=raw_sum)


def whatif_delta(
    card: ScoreCard, criterion: Criterion | str, new_level: int
) -> tuple[CompositeScore, int]:
    """Composite of the card with one level substituted, and the signed delta.

    The input card is not mutated. Returns (new CompositeScore,
    new value - old value).
    """
    crit = coerce_criterion(criterion)
    if not _is_level(new_level):
        raise LevelOutOfRangeError(new_level)
    old = composite(card)
    new = composite(card.with_level(crit, new_level))
    return new, new.value - old.value
