"""Notional-risk-score workflow: 5x5 matrix, banding, tailored assessment.

Risk scores live in a 5x5 matrix indexed by impact and likelihood (both
1 to 5). The scores are stored as data, never computed, because they are
not the product of the two indices. Applicability, criticality, and the
tailored impact/likelihood pairs are subjective analyst judgments and
arrive as declarative inputs; this module scores them, gates at the
tolerance band, and selects countermeasures and controls by catalog
lookup with a first-listed policy.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import MissingCatalogEntry, OutOfRange, ValidationError

BANDS = ("low", "medium", "high")
CRITICALITIES = ("high", "medium", "low")

# rows[likelihood - 1][impact - 1]; row 1 is likelihood 1.
DEFAULT_CELLS = (
    (1, 3, 5, 9, 12),
    (2, 8, 11, 14, 17),
    (4, 10, 15, 19, 21),
    (6, 13, 18, 22, 24),
    (7, 16, 20, 23, 25),
)

DEFAULT_BANDS = {"low": (1, 10), "medium": (11, 19), "high": (20, 25)}


@dataclass(frozen=True)
class RiskMatrix:
    cells: tuple = DEFAULT_CELLS
    bands: dict = field(default_factory=lambda: dict(DEFAULT_BANDS))

    def __post_init__(self):
        if len(self.cells) != 5 or any(len(row) != 5 for row in self.cells):
            raise ValidationError("risk matrix must be 5x5")
        scores = sorted(s for row in self.cells for s in row)
        if scores != list(range(1, 26)):
            raise ValidationError("risk matrix must contain each score 1..25 once")
        covered = []
        for band in BANDS:
            if band not in self.bands:
                raise ValidationError(f"missing band {band!r}")
            low, high = self.bands[band]
            covered.extend(range(low, high + 1))
        if sorted(covered) != list(range(1, 26)):
            raise ValidationError("bands must partition 1..25 without gaps or overlaps")

    def lookup(self, impact: int, likelihood: int) -> int:
        if impact not in (1, 2, 3, 4, 5):
            raise OutOfRange(f"impact {impact} outside 1..5")
        if likelihood not in (1, 2, 3, 4, 5):
            raise OutOfRange(f"likelihood {likelihood} outside 1..5")
        return self.cells[likelihood - 1][impact - 1]

    def band_of(self, score: int) -> str:
        for band in BANDS:
            low, high = self.bands[band]
            if low <= score <= high:
                return band
        raise OutOfRange(f"score {score} outside 1..25")


DEFAULT_MATRIX = RiskMatrix()


def matrix_lookup(impact: int, likelihood: int, matrix: RiskMatrix = DEFAULT_MATRIX) -> int:
    return matrix.lookup(impact, likelihood)


def categorize(score: int, matrix: RiskMatrix = DEFAULT_MATRIX) -> str:
    return matrix.band_of(score)


@dataclass(frozen=True)
class ApplicableTechnique:
    """Analyst-supplied judgment for one technique under assessment.

    ``tailored`` overrides the base pair; techniques with no base score
    (absent from the base table) must be tailored.
    """

    technique: str
    criticality: str
    tailored: tuple | None = None  # (impact, likelihood)

    def __post_init__(self):
        if self.criticality not in CRITICALITIES:
            raise ValidationError(
                f"{self.technique}: criticality {self.criticality!r} not in {CRITICALITIES}"
            )


@dataclass(frozen=True)
class NrsAssessment:
    technique: str
    criticality: str
    base: tuple | None
    tailored: tuple
    score: int
    band: str
    tolerable: bool
    selected_countermeasures: tuple = ()
    selected_controls: tuple = ()
    countermeasure_candidates: tuple = ()


@dataclass(frozen=True)
class AssessmentResult:
    assessments: tuple
    controls: tuple  # union of selected controls, sorted

    def intolerable(self) -> tuple:
        return tuple(a.technique for a in self.assessments if not a.tolerable)


def assess(
    applicable,
    base_scores: dict,
    tau: str,
    catalog: dict,
    matrix: RiskMatrix = DEFAULT_MATRIX,
) -> AssessmentResult:
    """Score every applicable technique and gate at the tolerance band.

    ``base_scores`` maps (technique, criticality) to a base (impact,
    likelihood) pair. ``tau`` is the highest tolerable band, inclusive: a
    medium score is tolerable when tau is medium. ``catalog`` maps
    technique -> list of {"countermeasure": id, "controls": [ids]}; for each
    intolerable technique the first countermeasure and its first control
    are selected, with the full candidate list kept on the assessment.
    Returns the union of selected controls; order of input techniques does
    not affect the result.
    """
    if tau not in BANDS:
        raise ValidationError(f"tau must be one of {BANDS}, got {tau!r}")
    tau_rank = BANDS.index(tau)
    assessments = []
    controls: set[str] = set()
    for item in sorted(applicable, key=lambda a: a.technique):
        base = base_scores.get((item.technique, item.criticality))
        pair = item.tailored if item.tailored is not None else base
        if pair is None:
            raise ValidationError(
                f"{item.technique}: no base score for criticality {item.criticality!r} "
                "and no tailored pair"
            )
        impact, likelihood = pair
        score = matrix.lookup(impact, likelihood)
        band = matrix.band_of(score)
        tolerable = BANDS.index(band) <= tau_rank
        selected_cms: tuple = ()
        selected_scs: tuple = ()
        candidates: tuple = ()
        if not tolerable:
            entries = catalog.get(item.technique)
            if not entries:
                raise MissingCatalogEntry(
                    f"no countermeasure catalog entry for technique {item.technique!r}"
                )
            candidates = tuple(e["countermeasure"] for e in entries)
            first = entries[0]
            if not first.get("controls"):
                raise MissingCatalogEntry(
                    f"countermeasure {first['countermeasure']!r} lists no controls"
                )
            selected_cms = (first["countermeasure"],)
            selected_scs = (first["controls"][0],)
            controls.update(selected_scs)
        assessments.append(
            NrsAssessment(
                technique=item.technique,
                criticality=item.criticality,
                base=base,
                tailored=(impact, likelihood),
                score=score,
                band=band,
                tolerable=tolerable,
                selected_countermeasures=selected_cms,
                selected_controls=selected_scs,
                countermeasure_candidates=candidates,
            )
        )
    return AssessmentResult(assessments=tuple(assessments), controls=tuple(sorted(controls)))
