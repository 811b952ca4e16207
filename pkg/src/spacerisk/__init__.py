"""Mission-centric cyber risk analysis and hardening for space infrastructures."""

from .engine import (
    Aggregators,
    CascadeConfig,
    RiskState,
    analyze,
    cascade_fixed_point,
    flow_disruption,
    joint_arc_likelihood,
    joint_node_likelihood,
    mission_disruption,
    prune_unattackable,
)
from .hardening import ControlCatalog, HardeningPlan, harden, residual_risk, select_controls
from .infra import (
    Arc,
    InfrastructureGraph,
    Mission,
    MissionFlow,
    ModuleNode,
    bind_flow,
    build_infrastructure,
    mission_union,
)
from .killchain import (
    USCKC,
    AttackStepAnnotation,
    CandidateStep,
    ChainStep,
    IncidentRecord,
    PrerequisiteRule,
    compile_usckc,
    count_chains,
    extrapolate,
    register_sense_rules,
)
from .metrics import (
    ConsequenceProfile,
    ScoreTable,
    aggregate_availability,
    consequence_band,
    set_likelihood,
    sophistication,
    usckc_likelihood,
)
from .nrs import (
    ApplicableTechnique,
    AssessmentResult,
    NrsAssessment,
    RiskMatrix,
    assess,
    categorize,
    matrix_lookup,
)
from .scenario import Scenario, load_scenario, save_scenario
from .threat import (
    AttackTechnique,
    CapabilitySet,
    SusceptibilityMap,
    direct_likelihood,
    load_capability_set,
)

__all__ = [name for name in dir() if not name.startswith("_")]
