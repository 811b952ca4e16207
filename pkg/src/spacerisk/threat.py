"""Attacker capabilities and per-target susceptibilities.

A capability set pairs attack techniques (opaque catalog tokens, ATT&CK or
SPARTA style) with the likelihood the attacker possesses each one. The
susceptibility map carries, per module or per arc, the likelihood that a
given technique compromises that target when attempted. Both are expert- or
CTI-supplied scenario data; nothing here estimates them.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import DuplicateTechnique, PossessionOutOfRange, UnknownTechnique, ValidationError
from .infra import ArcRef

CATALOGS = ("ATTACK", "SPARTA")


@dataclass(frozen=True)
class AttackTechnique:
    id: str
    name: str = ""
    tactic: str = ""
    catalog: str = "ATTACK"

    def __post_init__(self):
        if not self.id:
            raise ValidationError("technique id must be non-empty")
        if self.catalog not in CATALOGS:
            raise ValidationError(
                f"technique {self.id!r}: catalog {self.catalog!r} not in {CATALOGS}"
            )


@dataclass(frozen=True)
class CapabilitySet:
    techniques: tuple[AttackTechnique, ...]
    possession: dict = field(default_factory=dict)  # technique id -> (0, 1]

    def __post_init__(self):
        ids = [t.id for t in self.techniques]
        if len(ids) != len(set(ids)):
            dup = next(i for i in ids if ids.count(i) > 1)
            raise DuplicateTechnique(f"technique {dup!r} listed more than once")
        for tech_id in ids:
            value = self.possession.get(tech_id)
            if value is None:
                raise ValidationError(f"technique {tech_id!r} has no possession value")
            if not 0.0 < value <= 1.0:
                raise PossessionOutOfRange(
                    f"technique {tech_id!r}: possession {value} outside (0, 1]"
                )

    def __contains__(self, tech_id: str) -> bool:
        return tech_id in self.possession

    def __len__(self) -> int:
        return len(self.techniques)

    def ids(self) -> tuple[str, ...]:
        return tuple(sorted(self.possession))

    def possession_of(self, tech_id: str) -> float:
        if tech_id not in self.possession:
            raise UnknownTechnique(f"technique {tech_id!r} not in the capability set")
        return self.possession[tech_id]

    def technique(self, tech_id: str) -> AttackTechnique:
        for tech in self.techniques:
            if tech.id == tech_id:
                return tech
        raise UnknownTechnique(f"technique {tech_id!r} not in the capability set")

    def without(self, removed: set[str]) -> "CapabilitySet":
        kept = tuple(t for t in self.techniques if t.id not in removed)
        return CapabilitySet(kept, {t.id: self.possession[t.id] for t in kept})


def load_capability_set(entries: list[tuple[AttackTechnique, float]]) -> CapabilitySet:
    """Validate (technique, possession) pairs into a capability set."""
    return CapabilitySet(
        tuple(t for t, _ in entries), {t.id: value for t, value in entries}
    )


def _check_beta(value: float, label: str) -> float:
    if not 0.0 <= value <= 1.0:
        raise ValidationError(f"susceptibility for {label}: {value} outside [0, 1]")
    return value


@dataclass(frozen=True)
class SusceptibilityMap:
    """Per-(target, technique) compromise likelihoods; absent entries read 0."""

    node_beta: dict = field(default_factory=dict)  # (node id, tech id) -> [0, 1]
    arc_beta: dict = field(default_factory=dict)   # (source, target, key, tech id) -> [0, 1]

    def __post_init__(self):
        for (node_id, tech_id), value in self.node_beta.items():
            _check_beta(value, f"node {node_id!r} / {tech_id!r}")
        for (source, target, key, tech_id), value in self.arc_beta.items():
            _check_beta(value, f"arc {(source, target, key)} / {tech_id!r}")

    def of_node(self, node_id: str, tech_id: str) -> float:
        return self.node_beta.get((node_id, tech_id), 0.0)

    def of_arc(self, arc: ArcRef, tech_id: str) -> float:
        return self.arc_beta.get((arc[0], arc[1], arc[2], tech_id), 0.0)

    def node_techniques(self, node_id: str) -> tuple[str, ...]:
        """Techniques with positive susceptibility on this module."""
        return tuple(sorted(
            tech for (nid, tech), beta in self.node_beta.items()
            if nid == node_id and beta > 0.0
        ))

    def arc_techniques(self, arc: ArcRef) -> tuple[str, ...]:
        return tuple(sorted(
            tech for (s, t, k, tech), beta in self.arc_beta.items()
            if (s, t, k) == arc and beta > 0.0
        ))


def direct_likelihood(
    target: str | ArcRef,
    tech_id: str,
    caps: CapabilitySet,
    sus: SusceptibilityMap,
) -> float:
    """Likelihood one technique directly compromises one module or arc.

    The product of the attacker's possession likelihood and the target's
    susceptibility; 0 whenever the target has no susceptibility entry.
    """
    possession = caps.possession_of(tech_id)
    if isinstance(target, str):
        beta = sus.of_node(target, tech_id)
    else:
        beta = sus.of_arc(target, tech_id)
    return beta * possession
