"""Risk matrix fidelity, banding, and fixture assessments."""

import pytest

from spacerisk.errors import MissingCatalogEntry, OutOfRange, ValidationError
from spacerisk.nrs import (
    ApplicableTechnique,
    DEFAULT_MATRIX,
    RiskMatrix,
    assess,
    categorize,
    matrix_lookup,
)
from spacerisk.scenario import bundled_data_path, load_nrs_catalog, load_nrs_inputs

# Transcribed grid, rows likelihood 5 down to 1, columns impact 1..5.
EXPECTED_ROWS = {
    5: (7, 16, 20, 23, 25),
    4: (6, 13, 18, 22, 24),
    3: (4, 10, 15, 19, 21),
    2: (2, 8, 11, 14, 17),
    1: (1, 3, 5, 9, 12),
}


def test_all_25_cells_match_transcription():
    for likelihood, row in EXPECTED_ROWS.items():
        for impact in range(1, 6):
            assert matrix_lookup(impact, likelihood) == row[impact - 1]


def test_named_cells():
    assert matrix_lookup(5, 5) == 25
    assert matrix_lookup(3, 3) == 15
    assert matrix_lookup(1, 1) == 1


def test_lookup_out_of_range():
    with pytest.raises(OutOfRange):
        matrix_lookup(0, 3)
    with pytest.raises(OutOfRange):
        matrix_lookup(3, 6)


def test_categorize_bands():
    assert categorize(15) == "medium"
    assert categorize(25) == "high"
    assert categorize(10) == "low"
    assert categorize(11) == "medium"
    assert categorize(19) == "medium"
    assert categorize(20) == "high"
    assert categorize(1) == "low"


def test_matrix_monotone_in_each_argument():
    for likelihood in range(1, 6):
        for impact in range(1, 5):
            assert matrix_lookup(impact, likelihood) <= matrix_lookup(impact + 1, likelihood)
    for impact in range(1, 6):
        for likelihood in range(1, 5):
            assert matrix_lookup(impact, likelihood) <= matrix_lookup(impact, likelihood + 1)


def test_bands_partition_grid():
    seen = {"low": 0, "medium": 0, "high": 0}
    for likelihood in range(1, 6):
        for impact in range(1, 6):
            seen[categorize(matrix_lookup(impact, likelihood))] += 1
    assert sum(seen.values()) == 25
    assert all(count > 0 for count in seen.values())


def test_matrix_validation_rejects_bad_grids():
    with pytest.raises(ValidationError):
        RiskMatrix(cells=((1,) * 5,) * 5)
    with pytest.raises(ValidationError):
        RiskMatrix(bands={"low": (1, 10), "medium": (11, 18), "high": (20, 25)})


@pytest.fixture(scope="module")
def catalog():
    return load_nrs_catalog(bundled_data_path("nrs_countermeasures.json"))


def test_terra_fixture(catalog):
    applicable, base_scores, tau = load_nrs_inputs(bundled_data_path("nrs_terra.json"))
    assert tau == "medium"
    result = assess(applicable, base_scores, tau, catalog)
    scores = {a.technique: a.score for a in result.assessments}
    assert scores == {
        "EX-0013": 25, "IA-0007": 25, "EX-0012.10": 24, "T1133": 21, "T1586": 15,
    }
    assert set(result.intolerable()) == {"EX-0013", "IA-0007", "EX-0012.10", "T1133"}
    tolerable = {a.technique for a in result.assessments if a.tolerable}
    assert tolerable == {"T1586"}


def test_turla_fixture(catalog):
    applicable, base_scores, tau = load_nrs_inputs(bundled_data_path("nrs_turla.json"))
    result = assess(applicable, base_scores, tau, catalog)
    scores = {a.technique: a.score for a in result.assessments}
    assert scores == {"REC-0005.02": 22, "EXF-0010": 24, "T1590.005": 6}
    assert set(result.intolerable()) == {"REC-0005.02", "EXF-0010"}


def test_turla_cross_source_coherence():
    # (impact 4, likelihood 4) -> 22 and (impact 5, likelihood 4) -> 24
    # agree between the grid and the tailored fixture scores.
    assert matrix_lookup(4, 4) == 22
    assert matrix_lookup(5, 4) == 24


def test_empty_applicable_list(catalog):
    result = assess([], {}, "medium", catalog)
    assert result.assessments == ()
    assert result.controls == ()


def test_assess_order_invariance(catalog):
    applicable, base_scores, tau = load_nrs_inputs(bundled_data_path("nrs_terra.json"))
    forward = assess(applicable, base_scores, tau, catalog)
    backward = assess(tuple(reversed(applicable)), base_scores, tau, catalog)
    assert forward == backward


def test_boundary_band_is_tolerable_inclusive(catalog):
    # A medium score is tolerable when tau is medium.
    item = ApplicableTechnique(technique="T1586", criticality="high", tailored=(3, 3))
    result = assess([item], {}, "medium", catalog)
    assert result.assessments[0].tolerable
    strict = assess([item], {}, "low", catalog)
    assert not strict.assessments[0].tolerable


def test_base_score_used_when_not_tailored(catalog):
    item = ApplicableTechnique(technique="T1586", criticality="medium")
    result = assess([item], {("T1586", "medium"): (3, 2)}, "medium", catalog)
    assert result.assessments[0].score == matrix_lookup(3, 2)
    assert result.assessments[0].base == (3, 2)


def test_missing_base_and_tailored_rejected(catalog):
    item = ApplicableTechnique(technique="T1586", criticality="medium")
    with pytest.raises(ValidationError):
        assess([item], {}, "medium", catalog)


def test_missing_catalog_entry():
    item = ApplicableTechnique(technique="ZZ-9999", criticality="high", tailored=(5, 5))
    with pytest.raises(MissingCatalogEntry, match="ZZ-9999"):
        assess([item], {}, "medium", {})


def test_tailored_out_of_range(catalog):
    item = ApplicableTechnique(technique="T1586", criticality="high", tailored=(6, 3))
    with pytest.raises(OutOfRange):
        assess([item], {}, "medium", catalog)


def test_default_matrix_is_the_transcribed_grid():
    assert DEFAULT_MATRIX.cells == (
        (1, 3, 5, 9, 12),
        (2, 8, 11, 14, 17),
        (4, 10, 15, 19, 21),
        (6, 13, 18, 22, 24),
        (7, 16, 20, 23, 25),
    )
