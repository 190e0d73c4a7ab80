"""The methodology's three published worked scorecards, kept verbatim.

These cases (the wheel, the World Wide Web, and Communism) ship with the
published rubric as worked examples and double as the regression corpus
for this package. Levels and rationale texts are stored exactly as
published, including internal inconsistencies; anything that does not
add up is recorded in DISCREPANCIES rather than silently corrected.
"""

from __future__ import annotations

from dataclasses import dataclass

from .rubric import Criterion, ScoreCard


@dataclass(frozen=True)
class GoldenCase:
    """One published worked example: identity, card, and overall scores."""

    iu_id: str
    name: str
    description: str
    card: ScoreCard
    published_overall: int
    composite: int  # canonical value under the calibrated scaling


WHEEL = GoldenCase(
    iu_id="wheel",
    name="The Wheel",
    description=(
        "A wheel is a rotating circular component that enables efficient "
        "movement and transport, and underpins machines from carts to "
        "turbines."
    ),
    card=ScoreCard.from_levels(
        {
            Criterion.SUPERSEEDNESS: 5,
            Criterion.ECONOMIC_IMPACT: 5,
            Criterion.CENTRALIZATION: 1,
            Criterion.IMMEDIACY_OF_IMPACT: 1,
            Criterion.UNIQUENESS: 5,
            Criterion.COUNTERFACTUAL_IMPACT: 1,
        },
        rationales={
            Criterion.SUPERSEEDNESS: (
                "The wheel has not been replaced by any other IU."
            ),
            Criterion.ECONOMIC_IMPACT: (
                "Thanks to the wheel, humanity has transportation, "
                "agriculture, etc., all fundamental for humanity."
            ),
            Criterion.CENTRALIZATION: (
                "Several cultures developed the wheel at different time "
                "periods, in different parts of the globe."
            ),
            Criterion.IMMEDIACY_OF_IMPACT: (
                "Timeline; arguably felt since the development of "
                "agriculture."
            ),
            Criterion.UNIQUENESS: (
                "No other IU can be described as similar."
            ),
            Criterion.COUNTERFACTUAL_IMPACT: (
                "Several, unrelated peoples developed the same IU at "
                "different times."
            ),
        },
    ),
    published_overall=60,
    composite=60,
)

WORLD_WIDE_WEB = GoldenCase(
    iu_id="world-wide-web",
    name="The World Wide Web",
    description=(
        "The World Wide Web is an information system of interlinked "
        "hypertext documents and resources accessed over the Internet."
    ),
    card=ScoreCard.from_levels(
        {
            Criterion.SUPERSEEDNESS: 5,
            Criterion.ECONOMIC_IMPACT: 5,
            Criterion.CENTRALIZATION: 3,
            Criterion.IMMEDIACY_OF_IMPACT: 1,
            Criterion.UNIQUENESS: 3,
            Criterion.COUNTERFACTUAL_IMPACT: 4,
        },
        rationales={
            Criterion.SUPERSEEDNESS: (
                "It's synonymous to the Internet; the most dominant protocol."
            ),
            Criterion.ECONOMIC_IMPACT: (
                "It has fundamentally changed how humans produce and "
                "communicate."
            ),
            Criterion.CENTRALIZATION: (
                "The protocol was developed as an iterative effort from "
                "different parties."
            ),
            Criterion.IMMEDIACY_OF_IMPACT: (
                "Less than 10 years passed from its development to the "
                "Dot-com Boom."
            ),
            Criterion.UNIQUENESS: (
                "Similar communication protocols were developed around the "
                "same time (i.e. Usenet)"
            ),
            Criterion.COUNTERFACTUAL_IMPACT: (
                "Developed thanks to an iterative process and U.S. "
                "government funding."
            ),
        },
    ),
    published_overall=90,
    composite=70,
)

COMMUNISM = GoldenCase(
    iu_id="communism",
    name="Communism (as defined by Marx)",
    description=(
        "Communism is a political and economic ideology advocating a "
        "classless society in which the means of production are held in "
        "common."
    ),
    card=ScoreCard.from_levels(
        {
            Criterion.SUPERSEEDNESS: 2,
            Criterion.ECONOMIC_IMPACT: 4,
            Criterion.CENTRALIZATION: 5,
            Criterion.IMMEDIACY_OF_IMPACT: 2,
            Criterion.UNIQUENESS: 3,
            Criterion.COUNTERFACTUAL_IMPACT: 3,
        },
        rationales={
            Criterion.SUPERSEEDNESS: (
                'There are government systems that take inspiration from '
                'Communism, but no strict Communist "state" currently exists.'
            ),
            Criterion.ECONOMIC_IMPACT: (
                "Communist states changed how societies produced during the "
                "20th century."
            ),
            Criterion.CENTRALIZATION: (
                "Developed by one man (Marx), with editing help by Engels."
            ),
            Criterion.IMMEDIACY_OF_IMPACT: (
                "74 years passed from the publication of the Communist "
                "Manifesto (1948), to the establishment of the Soviet "
                "Union (1922)."
            ),
            Criterion.UNIQUENESS: (
                "Marx wasn't the first 18th/19th century philosopher to "
                "reject private property."
            ),
            Criterion.COUNTERFACTUAL_IMPACT: (
                "Being developed in a book, it is likely someone else "
                "could've developed a very similar system."
            ),
        },
    ),
    published_overall=63,
    composite=63,
)

CASES: tuple[GoldenCase, ...] = (WHEEL, WORLD_WIDE_WEB, COMMUNISM)

# Internal inconsistencies in the published worked examples. Stored as
# data so tests and documentation can assert on them; the corpus above
# always keeps the published per-criterion values verbatim.
DISCREPANCIES: tuple[dict[str, str], ...] = (
    {
        "iu_id": "world-wide-web",
        "field": "overall",
        "published": "90",
        "canonical": "70",
        "note": (
            "The published World Wide Web scorecard prints an overall of 90, "
            "which contradicts its own criterion rows: the six levels "
            "{5, 5, 3, 1, 3, 4} sum to 21, and no linear map of the level "
            "sum onto the 100-point scale can yield 90 for sum 21 while "
            "also yielding the published 60 for the wheel (sum 18) and 63 "
            "for Communism (sum 19). The printed 90 is treated as an "
            "erratum; the derived value 70 is canonical here."
        ),
    },
    {
        "iu_id": "world-wide-web",
        "field": "immediacy_of_impact",
        "published": "1",
        "canonical": "1",
        "note": (
            "The published explanation ('Less than 10 years passed from its "
            "development to the Dot-com Boom.') matches the wording of the "
            "level-5 anchor ('no more than a decade'), yet the published "
            "table assigns level 1. The corpus keeps the published level 1 "
            "verbatim and does not silently correct it."
        ),
    },
)
