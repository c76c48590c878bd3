"""Cyclone: a factor-weighted two-player Hanabi teammate.

The package splits into the rules engine (:mod:`cyclone.engine`),
information sets (:mod:`cyclone.knowledge`), the weighted-factor policy
(:mod:`cyclone.decision`), the full-factorial weight trainer
(:mod:`cyclone.trainer`), the simulation/evaluation harness
(:mod:`cyclone.harness`), and the live-play HTTP service
(:mod:`cyclone.service`) with its CLI front door (:mod:`cyclone.cli`).
"""

from .cards import Card
from .decision import (
    FACTOR_NAMES,
    ActionEvaluation,
    FactorVector,
    WeightVector,
    choose_action,
    expected_values,
    factor_vector,
    load_preset,
    resolve_weights,
    teammate_play_probs,
)
from .engine import (
    ActionKind,
    ActionSpec,
    GameLog,
    GameState,
    ResolvedEvent,
    RulesConfig,
    apply_action,
    legal_actions,
    new_game,
    replay,
)
from .knowledge import (
    CardKnowledge,
    GiveUpCurve,
    PlayerView,
    deficit,
    give_up_threshold,
    observe,
    prob_non_endangered,
    prob_playable,
    prob_unneeded,
    single_out_target,
    update_knowledge,
)

__version__ = "0.1.0"

__all__ = [
    "ActionEvaluation",
    "ActionKind",
    "ActionSpec",
    "Card",
    "CardKnowledge",
    "FACTOR_NAMES",
    "FactorVector",
    "GameLog",
    "GameState",
    "GiveUpCurve",
    "PlayerView",
    "ResolvedEvent",
    "RulesConfig",
    "WeightVector",
    "apply_action",
    "choose_action",
    "deficit",
    "expected_values",
    "factor_vector",
    "give_up_threshold",
    "legal_actions",
    "load_preset",
    "new_game",
    "observe",
    "prob_non_endangered",
    "prob_playable",
    "prob_unneeded",
    "replay",
    "resolve_weights",
    "single_out_target",
    "teammate_play_probs",
    "update_knowledge",
]
