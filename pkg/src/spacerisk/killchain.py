"""Kill-chain compilation and missing-data extrapolation.

An incident's annotation lists the observed attack steps in order. Each
observed step carries exactly one technique; any number of hypothesized
prior steps may be attached to it, each with a set of candidate techniques.
Extrapolation emits every chain in the Cartesian product of the candidate
sets (observed steps contribute singletons) that passes the sense filter.

Which prior steps exist and which candidates they carry are human
judgments; they arrive as declarative annotation and rule files so the
combinatorial core stays automatic and auditable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product

from .errors import (
    CombinatorialCap,
    EmptyCandidateSet,
    IncompleteAnnotation,
    ValidationError,
)

PHASES = ("in", "through", "out")
ACTIVITIES = ("objective", "milestone", "enabling", "information-discovery")

ATTACK_TYPES = (
    "High-powered Laser",
    "High-powered Microwaves",
    "RF Interferences",
    "Eavesdropping",
    "Spoofing",
    "Ultrawideband Weapon",
    "Electromagnetic Pulse (EMP) Weapon",
    "Jamming",
    "Signal Hijacking",
    "Seizure of Control",
    "Data Corruption/Interception",
    "Denial of Service (DoS)",
    "Space Situational Awareness (SSA) Deception",
)


@dataclass(frozen=True)
class IncidentRecord:
    """Preprocessed incident row; identity and sourcing metadata."""

    incident_id: str
    attack_type: str
    date: str = ""
    locations: str = ""
    description: str = ""
    attacker_identity: str = ""
    victim_identity: str = ""
    sources: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.incident_id:
            raise ValidationError("incident_id must be non-empty")
        if self.attack_type not in ATTACK_TYPES:
            raise ValidationError(
                f"incident {self.incident_id}: unknown attack type {self.attack_type!r}"
            )


def _check_step_fields(phase, activity, tactic, where):
    if phase not in PHASES:
        raise IncompleteAnnotation(f"{where}: phase {phase!r} not in {PHASES}")
    if activity not in ACTIVITIES:
        raise IncompleteAnnotation(f"{where}: activity {activity!r} not in {ACTIVITIES}")
    if not tactic:
        raise IncompleteAnnotation(f"{where}: missing tactic")


@dataclass(frozen=True)
class ChainStep:
    """One fully-specified step: phase, activity, tactic, technique."""

    phase: str
    activity: str
    tactic: str
    technique: str

    def __post_init__(self):
        _check_step_fields(self.phase, self.activity, self.tactic, "step")
        if not self.technique:
            raise IncompleteAnnotation("step: missing technique")


@dataclass(frozen=True)
class CandidateStep:
    """A hypothesized prior step with its candidate techniques."""

    phase: str
    activity: str
    tactic: str
    candidates: tuple[str, ...]

    def __post_init__(self):
        _check_step_fields(self.phase, self.activity, self.tactic, "candidate step")


@dataclass(frozen=True)
class AttackStepAnnotation:
    """One observed step plus the candidate steps extrapolated before it."""

    step_index: int
    phase: str
    activity: str
    tactic: str
    observed_technique: str
    extrapolated: tuple[CandidateStep, ...] = ()

    def __post_init__(self):
        _check_step_fields(self.phase, self.activity, self.tactic, f"step {self.step_index}")
        if not self.observed_technique:
            raise IncompleteAnnotation(f"step {self.step_index}: missing observed technique")


@dataclass(frozen=True)
class USCKC:
    """An ordered chain of phases, activities, tactics, and techniques."""

    phases: tuple[str, ...]
    activities: tuple[str, ...]
    tactics: tuple[str, ...]
    techniques: tuple[str, ...]

    def __post_init__(self):
        n = len(self.phases)
        if not (len(self.activities) == len(self.tactics) == len(self.techniques) == n):
            raise ValidationError("chain layers must have equal length")

    def __len__(self) -> int:
        return len(self.phases)

    def steps(self) -> tuple[ChainStep, ...]:
        return tuple(
            ChainStep(p, a, ta, te)
            for p, a, ta, te in zip(self.phases, self.activities, self.tactics, self.techniques)
        )


def compile_usckc(steps) -> USCKC:
    """Assemble fully-annotated steps into a chain, preserving order."""
    steps = tuple(steps)
    return USCKC(
        phases=tuple(s.phase for s in steps),
        activities=tuple(s.activity for s in steps),
        tactics=tuple(s.tactic for s in steps),
        techniques=tuple(s.technique for s in steps),
    )


def _positions(annotated):
    """Flatten annotations into per-position (phase, activity, tactic, candidates)."""
    positions = []
    for step in annotated:
        for prior in step.extrapolated:
            if not prior.candidates:
                raise EmptyCandidateSet(
                    f"step {step.step_index}: extrapolated position has no candidates"
                )
            positions.append((prior.phase, prior.activity, prior.tactic, prior.candidates))
        positions.append(
            (step.phase, step.activity, step.tactic, (step.observed_technique,))
        )
    return positions


def candidate_counts(annotated) -> tuple[int, ...]:
    """Candidate-set sizes of the extrapolated positions, in chain order."""
    return tuple(
        len(prior.candidates) for step in annotated for prior in step.extrapolated
    )


def chain_length(annotated) -> int:
    return sum(1 + len(step.extrapolated) for step in annotated)


def raw_chain_count(annotated) -> int:
    """Product of the candidate counts: chains before sense filtering."""
    return math.prod(candidate_counts(annotated)) if tuple(annotated) else 0


def extrapolate(annotated, sense_filter=None, cap: int = 1_000_000):
    """Lazily yield every candidate chain that makes sense.

    ``sense_filter`` is a predicate over assembled chains (default accepts
    all). The cap bounds the raw product size and is checked up front, so a
    count that stays below it can stream without materializing; pass
    ``cap=None`` to disable.
    """
    annotated = tuple(annotated)
    if cap is not None and raw_chain_count(annotated) > cap:
        raise CombinatorialCap(
            f"candidate product {raw_chain_count(annotated)} exceeds cap {cap}"
        )
    positions = _positions(annotated)

    def chains():
        if not positions:
            return
        phases = tuple(p[0] for p in positions)
        activities = tuple(p[1] for p in positions)
        tactics = tuple(p[2] for p in positions)
        for combo in product(*(p[3] for p in positions)):
            chain = USCKC(phases, activities, tactics, combo)
            if sense_filter is None or sense_filter(chain):
                yield chain

    return chains()


def count_chains(annotated, sense_filter=None) -> int:
    """Number of chains surviving the filter; arithmetic when permissive."""
    annotated = tuple(annotated)
    if sense_filter is None:
        return raw_chain_count(annotated)
    return sum(1 for _ in extrapolate(annotated, sense_filter, cap=None))


@dataclass(frozen=True)
class PrerequisiteRule:
    """``technique`` requires its immediate predecessor to satisfy something.

    The predecessor satisfies the rule when its technique is listed in
    ``prior_techniques`` or its tactic in ``prior_tactics``. A rule with
    both lists empty is unsatisfiable and rejects every chain using the
    technique; a technique at the first position has no predecessor and is
    likewise rejected.
    """

    technique: str
    prior_techniques: tuple[str, ...] = ()
    prior_tactics: tuple[str, ...] = ()

    def admits(self, chain: USCKC, position: int) -> bool:
        if position == 0:
            return False
        if chain.techniques[position - 1] in self.prior_techniques:
            return True
        if chain.tactics[position - 1] in self.prior_tactics:
            return True
        return False


def register_sense_rules(rules) -> object:
    """Compose prerequisite rules into one sense filter (AND semantics)."""
    rules = tuple(rules)

    def sense_filter(chain: USCKC) -> bool:
        for rule in rules:
            for position, technique in enumerate(chain.techniques):
                if technique == rule.technique and not rule.admits(chain, position):
                    return False
        return True

    return sense_filter
