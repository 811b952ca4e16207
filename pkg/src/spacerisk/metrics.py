"""Attack metrics: consequence vectors, sophistication, chain likelihood.

Consequence is a vector-of-vectors over the four infrastructure segments,
with every entry an availability-degradation degree in [0, 1] (link entries
are confidentiality/integrity/availability triples). Sophistication and
likelihood scores for tactics and techniques arrive in an external score
table; nothing here decides how to measure them.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import EmptyChain, MissingScore, ValidationError
from .killchain import USCKC

# Component layout of the consequence vectors, per segment.
BUS_COMPONENTS = (
    "electrical-power", "attitude-control", "communication",
    "command-and-data", "propulsion", "thermal-control",
)
PAYLOAD_COMPONENTS = (
    "communication", "navigation", "scientific", "remote-sensing", "defense",
)
GROUND_STATION_COMPONENTS = ("tracking", "ranging", "transmission", "reception")
MISSION_CONTROL_COMPONENTS = ("telemetry-processing", "commanding", "analysis-support")
DATA_PROCESSING_COMPONENTS = ("mission-analysis", "payload-processing")
REMOTE_TERMINAL_COMPONENTS = ("network-access", "software-access")
USER_COMPONENTS = ("transmission", "reception", "processing")

# The eight link classes carrying confidentiality/integrity/availability triples.
LINK_CLASSES = (
    "intra-space", "intra-ground-wan", "space-space", "ground-ground",
    "space-ground", "space-user", "ground-user", "user-user",
)

# Qualitative consequence bands.
SUPERFICIAL_MAX = 0.3
NON_RECOVERABLE_MIN = 0.8


def _check_unit(value: float, label: str) -> float:
    if not 0.0 <= value <= 1.0:
        raise ValidationError(f"{label}: {value} outside [0, 1]")
    return value


def _check_vector(values, expected_len: int, label: str) -> tuple:
    values = tuple(values)
    if len(values) != expected_len:
        raise ValidationError(f"{label}: expected {expected_len} entries, got {len(values)}")
    for v in values:
        _check_unit(v, label)
    return values


@dataclass(frozen=True)
class CiaTriple:
    confidentiality: float = 0.0
    integrity: float = 0.0
    availability: float = 0.0

    def __post_init__(self):
        for name in ("confidentiality", "integrity", "availability"):
            _check_unit(getattr(self, name), name)

    def as_tuple(self) -> tuple:
        return (self.confidentiality, self.integrity, self.availability)


@dataclass(frozen=True)
class ConsequenceProfile:
    """Per-segment degradation vectors for one attack."""

    bus: tuple = (0.0,) * 6
    payload: tuple = (0.0,) * 5
    ground_station: tuple = (0.0,) * 4
    mission_control: tuple = (0.0,) * 3
    data_processing: tuple = (0.0,) * 2
    remote_terminal: tuple = (0.0,) * 2
    user: tuple = (0.0,) * 3
    link: dict = field(default_factory=dict)  # link class -> CiaTriple

    def __post_init__(self):
        object.__setattr__(self, "bus", _check_vector(self.bus, 6, "bus"))
        object.__setattr__(self, "payload", _check_vector(self.payload, 5, "payload"))
        object.__setattr__(
            self, "ground_station", _check_vector(self.ground_station, 4, "ground_station")
        )
        object.__setattr__(
            self, "mission_control", _check_vector(self.mission_control, 3, "mission_control")
        )
        object.__setattr__(
            self, "data_processing", _check_vector(self.data_processing, 2, "data_processing")
        )
        object.__setattr__(
            self, "remote_terminal", _check_vector(self.remote_terminal, 2, "remote_terminal")
        )
        object.__setattr__(self, "user", _check_vector(self.user, 3, "user"))
        for link_class in self.link:
            if link_class not in LINK_CLASSES:
                raise ValidationError(f"unknown link class {link_class!r}")


def aggregate_availability(vector, weights=None) -> float:
    """Weighted mean of availability-degradation entries.

    Sound only for same-property entries. Weights default to uniform; they
    must be non-negative and sum to 1.
    """
    values = tuple(vector)
    if not values:
        return 0.0
    for v in values:
        _check_unit(v, "availability entry")
    if weights is None:
        weights = (1.0 / len(values),) * len(values)
    weights = tuple(weights)
    if len(weights) != len(values):
        raise ValidationError("weights and vector must have equal length")
    if any(w < 0 for w in weights) or abs(sum(weights) - 1.0) > 1e-9:
        raise ValidationError("weights must be non-negative and sum to 1")
    return sum(w * v for w, v in zip(weights, values))


def fold_cia(triple: CiaTriple) -> float:
    """Opt-in scalar fold of a C/I/A triple: 1 - prod(1 - x).

    Not applied anywhere by default: the fold assumes independent
    degradations, which an attacker degrading all three at will violates.
    Reports show triples verbatim unless a caller explicitly asks for this.
    """
    return 1.0 - (
        (1.0 - triple.confidentiality)
        * (1.0 - triple.integrity)
        * (1.0 - triple.availability)
    )


def consequence_band(score: float) -> str:
    """Qualitative band: superficial, temporary, or non-recoverable."""
    _check_unit(score, "consequence score")
    if score <= SUPERFICIAL_MAX:
        return "superficial"
    if score >= NON_RECOVERABLE_MIN:
        return "non-recoverable"
    return "temporary"


@dataclass(frozen=True)
class ScoreTable:
    """Sophistication scores per tactic/technique, likelihoods per technique."""

    tactic_scores: dict = field(default_factory=dict)
    technique_scores: dict = field(default_factory=dict)
    technique_likelihoods: dict = field(default_factory=dict)

    def __post_init__(self):
        for label, mapping in (
            ("tactic score", self.tactic_scores),
            ("technique score", self.technique_scores),
            ("technique likelihood", self.technique_likelihoods),
        ):
            for key, value in mapping.items():
                _check_unit(value, f"{label} {key!r}")

    def tactic_score(self, tactic: str) -> float:
        if tactic not in self.tactic_scores:
            raise MissingScore(f"no sophistication score for tactic {tactic!r}")
        return self.tactic_scores[tactic]

    def technique_score(self, technique: str) -> float:
        if technique not in self.technique_scores:
            raise MissingScore(f"no sophistication score for technique {technique!r}")
        return self.technique_scores[technique]

    def technique_likelihood(self, technique: str) -> float:
        if technique not in self.technique_likelihoods:
            raise MissingScore(f"no likelihood for technique {technique!r}")
        return self.technique_likelihoods[technique]


@dataclass(frozen=True)
class SophisticationSummary:
    """Highest and lowest possible sophistication over a set of chains."""

    tactic_high: float
    technique_high: float
    tactic_low: float
    technique_low: float


def sophistication(chains, table: ScoreTable) -> SophisticationSummary:
    """Max-of-max and min-of-max sophistication across candidate chains.

    Each chain is scored by its most sophisticated tactic and technique;
    the high values take the max over chains (most sophisticated variant),
    the low values the min (least sophistication that still suffices).
    """
    chains = tuple(chains)
    if not chains:
        raise EmptyChain("sophistication needs at least one chain")
    tactic_maxima = []
    technique_maxima = []
    for chain in chains:
        if len(chain) == 0:
            raise EmptyChain("cannot score an empty chain")
        tactic_maxima.append(max(table.tactic_score(t) for t in chain.tactics))
        technique_maxima.append(max(table.technique_score(t) for t in chain.techniques))
    return SophisticationSummary(
        tactic_high=max(tactic_maxima),
        technique_high=max(technique_maxima),
        tactic_low=min(tactic_maxima),
        technique_low=min(technique_maxima),
    )


def usckc_likelihood(chain: USCKC, table: ScoreTable) -> float:
    """Chain success likelihood: min over member technique likelihoods."""
    if len(chain) == 0:
        raise EmptyChain("cannot score an empty chain")
    return min(table.technique_likelihood(t) for t in chain.techniques)


def set_likelihood(chains, table: ScoreTable) -> float:
    """Likelihood any chain in the set succeeds: max over the chains."""
    chains = tuple(chains)
    if not chains:
        raise EmptyChain("set likelihood needs at least one chain")
    return max(usckc_likelihood(c, table) for c in chains)
