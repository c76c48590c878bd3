"""The factor-weighted policy: score every legal action, pick the best.

Each legal action is described by a 12-entry factor vector ``h`` holding
event probabilities (or, for the info-token factor, a resource count).
An agent's play style is a signed weight vector ``w``; an action's
expected value is the inner product ``w . h``. Weights may instead be
flagged *dominant*: those entries are kept out of the inner product and
accumulated (with sign) into a separate tier, and actions compare by
``(tier, ev)`` lexicographically, so a dominant factor can never be
bought off by finite ones. Ties fall back to canonical action order.

Factor entries that do not apply to an action's kind are exactly 0.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import NamedTuple

from .cards import NUM_COLORS, NUM_RANKS
from .engine import ActionKind, ActionSpec
from .errors import ConfigurationError, ContractViolation, FormatError
from .knowledge import (
    DEFAULT_GIVE_UP_CURVE,
    GiveUpCurve,
    PlayerView,
    apply_clue,
    count_masked,
    prob_non_endangered,
    prob_playable,
    prob_unneeded,
    single_out_slot,
)

WEIGHTS_FORMAT_VERSION = 1


class FactorVector(NamedTuple):
    """Per-action factor magnitudes, grouped play / discard / conventions."""

    play_playable: float = 0.0
    misplay_under_two_strikes: float = 0.0
    misplay_at_two_strikes: float = 0.0
    teammate_play_playable: float = 0.0
    teammate_misplay: float = 0.0
    discard_non_endangered: float = 0.0
    discard_unneeded: float = 0.0
    play_singled_out: float = 0.0
    clue_singles_out_playable: float = 0.0
    clue_singles_out_unplayable: float = 0.0
    discard_singled_out: float = 0.0
    clue_info_tokens_held: float = 0.0


FACTOR_NAMES: tuple[str, ...] = FactorVector._fields
NUM_FACTORS = len(FACTOR_NAMES)
CURVE_PARAMS = ("curve.floor", "curve.amplitude", "curve.exponent")


@dataclass(frozen=True)
class WeightVector:
    """A complete play style: signed weights, dominance flags, give-up curve.

    ``dominant[i]`` is 0 for an ordinary weight or +/-1 for a factor that
    decides lexicographically before the finite sum (its finite weight is
    ignored). ``dominance_fallback``, when set, disables the tier and
    treats flagged entries as ``sign * fallback`` finite weights instead.
    """

    weights: tuple[float, ...]
    dominant: tuple[int, ...] = (0,) * NUM_FACTORS
    curve: GiveUpCurve = DEFAULT_GIVE_UP_CURVE
    label: str = ""
    teammate_play_aggregation: str = "sum"  # or "max"
    dominance_fallback: float | None = None

    def __post_init__(self) -> None:
        if len(self.weights) != NUM_FACTORS or len(self.dominant) != NUM_FACTORS:
            raise ConfigurationError(f"weight vector must have {NUM_FACTORS} entries")
        if any(d not in (-1, 0, 1) for d in self.dominant):
            raise ConfigurationError("dominance flags must be -1, 0, or +1")
        if self.teammate_play_aggregation not in ("sum", "max"):
            raise ConfigurationError(f"unknown aggregation {self.teammate_play_aggregation!r}")

    def weight(self, name: str) -> float:
        return self.weights[FACTOR_NAMES.index(name)]

    def with_weight(self, name: str, value: float) -> WeightVector:
        i = FACTOR_NAMES.index(name)
        return replace(self, weights=self.weights[:i] + (value,) + self.weights[i + 1 :])

    def evaluate(self, h: FactorVector) -> tuple[float, float]:
        """(dominance tier, finite expected value) for one action."""
        tier = 0.0
        ev = 0.0
        fallback = self.dominance_fallback
        for i in range(NUM_FACTORS):
            flag = self.dominant[i]
            if flag == 0:
                ev += self.weights[i] * h[i]
            elif fallback is None:
                tier += flag * h[i]
            else:
                ev += flag * fallback * h[i]
        return tier, ev

    def to_record(self) -> dict:
        return {
            "v": WEIGHTS_FORMAT_VERSION,
            "kind": "weights",
            "label": self.label,
            "weights": {name: self.weights[i] for i, name in enumerate(FACTOR_NAMES)},
            "dominant": {
                name: self.dominant[i] for i, name in enumerate(FACTOR_NAMES) if self.dominant[i]
            },
            "give_up_curve": self.curve.to_record(),
            "teammate_play_aggregation": self.teammate_play_aggregation,
        }

    @classmethod
    def from_record(cls, rec: dict) -> WeightVector:
        if rec.get("kind") != "weights":
            raise FormatError("not a weights record")
        if rec.get("v") != WEIGHTS_FORMAT_VERSION:
            raise FormatError(f"unsupported weights version {rec.get('v')!r}")
        try:
            names = set(rec["weights"])
            if names != set(FACTOR_NAMES):
                raise FormatError(f"weights must cover exactly the 12 factors, got {sorted(names)}")
            return cls(
                weights=tuple(float(rec["weights"][n]) for n in FACTOR_NAMES),
                dominant=tuple(int(rec.get("dominant", {}).get(n, 0)) for n in FACTOR_NAMES),
                curve=GiveUpCurve.from_record(rec["give_up_curve"]),
                label=rec.get("label", ""),
                teammate_play_aggregation=rec.get("teammate_play_aggregation", "sum"),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise FormatError(f"bad weights record: {exc}") from exc

    def to_text(self) -> str:
        return json.dumps(self.to_record(), indent=2) + "\n"

    @classmethod
    def from_text(cls, text: str) -> WeightVector:
        try:
            return cls.from_record(json.loads(text))
        except json.JSONDecodeError as exc:
            raise FormatError(f"bad weights file: {exc}") from exc

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.to_text())

    @classmethod
    def load(cls, path: str | Path) -> WeightVector:
        return cls.from_text(Path(path).read_text())


PRESET_NAMES = ("human-like", "human-complementary", "self-play")


def load_preset(name: str, literal_two_strike: bool = False) -> WeightVector:
    """Load one of the shipped play styles by name.

    ``literal_two_strike`` keeps the published +3 on the two-strike
    misplay factor instead of the default penalty reading (-3).
    """
    key = name.replace("_", "-")
    if key not in PRESET_NAMES:
        raise ConfigurationError(f"unknown preset {name!r}; expected one of {PRESET_NAMES}")
    text = resources.files("cyclone.presets").joinpath(key.replace("-", "_") + ".json").read_text()
    w = WeightVector.from_text(text)
    if literal_two_strike and w.dominant[FACTOR_NAMES.index("misplay_at_two_strikes")] == 0:
        w = w.with_weight("misplay_at_two_strikes", abs(w.weight("misplay_at_two_strikes")))
    return w


def resolve_weights(spec: str) -> WeightVector:
    """Accept a preset name or a path to a weights file."""
    if spec.replace("_", "-") in PRESET_NAMES:
        return load_preset(spec)
    path = Path(spec)
    if path.exists():
        return WeightVector.load(path)
    raise ConfigurationError(f"{spec!r} is neither a preset name nor a weights file")


# --- trainable-parameter addressing (used by the trainer) ---------------


def parameter_names(w: WeightVector) -> list[str]:
    """All trainable parameters: finite factor weights plus curve parameters."""
    names = [n for i, n in enumerate(FACTOR_NAMES) if w.dominant[i] == 0]
    names.extend(CURVE_PARAMS)
    return names


def get_parameter(w: WeightVector, name: str) -> float:
    if name in FACTOR_NAMES:
        return w.weight(name)
    if name in CURVE_PARAMS:
        return getattr(w.curve, name.split(".", 1)[1])
    raise ConfigurationError(f"unknown parameter {name!r}")


def with_parameter(w: WeightVector, name: str, value: float) -> WeightVector:
    if name in FACTOR_NAMES:
        if w.dominant[FACTOR_NAMES.index(name)] != 0:
            raise ConfigurationError(f"{name} is dominance-flagged and not adjustable")
        return w.with_weight(name, value)
    if name in CURVE_PARAMS:
        return replace(w, curve=replace(w.curve, **{name.split(".", 1)[1]: value}))
    raise ConfigurationError(f"unknown parameter {name!r}")


# --- the policy ----------------------------------------------------------


@dataclass(frozen=True)
class ActionEvaluation:
    action: ActionSpec
    h: FactorVector
    dominant_tier: float
    ev: float


def legal_actions_from_view(view: PlayerView) -> list[ActionSpec]:
    """The viewer's legal moves, in the engine's canonical order."""
    other = 1 - view.viewer
    actions = [ActionSpec(ActionKind.PLAY, slot=i) for i in range(len(view.own))]
    if view.info_tokens < 8:
        actions.extend(ActionSpec(ActionKind.DISCARD, slot=i) for i in range(len(view.own)))
    if view.info_tokens > 0:
        colors = {card.color for card in view.teammate_cards}
        ranks = {card.rank for card in view.teammate_cards}
        actions.extend(
            ActionSpec(ActionKind.CLUE_COLOR, value=c, target=other) for c in range(NUM_COLORS) if c in colors
        )
        actions.extend(
            ActionSpec(ActionKind.CLUE_RANK, value=r, target=other) for r in range(1, NUM_RANKS + 1) if r in ranks
        )
    return actions


def _teammate_knowledge_after(
    view: PlayerView, hypothetical_clue: ActionSpec | None
) -> tuple:
    if hypothetical_clue is None:
        return view.teammate_knowledge
    if not hypothetical_clue.is_clue or hypothetical_clue.target == view.viewer:
        raise ContractViolation("hypothetical action must be a clue to the teammate")
    touched = tuple(i for i, c in enumerate(view.teammate_cards) if hypothetical_clue.touches(c))
    return apply_clue(view.teammate_knowledge, touched, hypothetical_clue)


def teammate_play_probs(
    view: PlayerView, hypothetical_clue: ActionSpec | None = None
) -> tuple[tuple[Fraction, ...], tuple[Fraction, ...]]:
    """Model of the teammate's next move, per slot: (P_play, P_discard).

    The teammate is modeled as reading their own cards the same way the
    viewer reads theirs: P_play is the fraction of cards unseen *by the
    teammate* that match the slot's clue constraints and are currently
    playable; P_discard is the analogous non-endangered fraction. When a
    hypothetical clue is supplied, its positive and negative information
    is folded into the teammate's constraints first. The two numbers are
    not a distribution over actions and are consumed unnormalized.
    """
    knowledge = _teammate_knowledge_after(view, hypothetical_clue)
    counts = view.teammate_unseen
    playable = view.playable
    safe = ~view.endangered
    p_play = []
    p_discard = []
    for k in knowledge:
        matching = count_masked(counts, k.mask)
        p_play.append(Fraction(count_masked(counts, k.mask & playable), matching))
        p_discard.append(Fraction(count_masked(counts, k.mask & safe), matching))
    return tuple(p_play), tuple(p_discard)


def _play_confidence(p: Fraction, singled: bool) -> Fraction:
    """Playability a player acts on, per the play conventions.

    Card counting alone justifies a play only when it is airtight (p = 1);
    the other sanctioned play is of a singled-out card, whose clue vouches
    for it, at its counted probability. Anything else is treated as a sure
    misplay so that speculative plays never outbid clues or discards.
    """
    if singled or p == 1:
        return p
    return Fraction(0)


def factor_vector(
    view: PlayerView, action: ActionSpec, w: WeightVector | None = None
) -> FactorVector:
    """Describe one legal action by its factor magnitudes.

    Only the entries that belong to the action's kind are populated; the
    weight vector supplies the give-up curve and the teammate-sum mode
    (defaults are used when it is omitted). Play entries (own and
    modeled) pass through :func:`_play_confidence`, and the singled-out
    play entry carries the probability that the singled play succeeds.
    """
    curve = w.curve if w is not None else DEFAULT_GIVE_UP_CURVE
    if action.kind is ActionKind.PLAY:
        singled = view.own[action.slot].singled_out
        p = float(_play_confidence(prob_playable(view, action.slot), singled))
        miss = 1.0 - p
        return FactorVector(
            play_playable=p,
            misplay_under_two_strikes=miss if view.strikes < 2 else 0.0,
            misplay_at_two_strikes=miss if view.strikes == 2 else 0.0,
            play_singled_out=p if singled else 0.0,
        )
    if action.kind is ActionKind.DISCARD:
        return FactorVector(
            discard_non_endangered=float(prob_non_endangered(view, action.slot)),
            discard_unneeded=float(prob_unneeded(view, action.slot, curve)),
            discard_singled_out=1.0 if view.own[action.slot].singled_out else 0.0,
        )

    # Clues: how the teammate is expected to respond, plus convention terms.
    knowledge = _teammate_knowledge_after(view, action)
    counts = view.teammate_unseen
    playable = view.playable
    playable_sum = []
    misplay_sum = []
    for k, card in zip(knowledge, view.teammate_cards):
        matching = count_masked(counts, k.mask)
        p = _play_confidence(
            Fraction(count_masked(counts, k.mask & playable), matching), k.singled_out
        )
        if playable >> card.identity & 1:
            playable_sum.append(p)
        else:
            misplay_sum.append(p)
    if (w.teammate_play_aggregation if w is not None else "sum") == "max":
        other_play = float(max(playable_sum, default=0))
        other_misplay = float(max(misplay_sum, default=0))
    else:
        other_play = float(sum(playable_sum))
        other_misplay = float(sum(misplay_sum))
    touched = tuple(i for i, c in enumerate(view.teammate_cards) if action.touches(c))
    target = single_out_slot(view.teammate_knowledge, touched, action)
    singles_playable = 0.0
    singles_unplayable = 0.0
    if target is not None:
        if playable >> view.teammate_cards[target].identity & 1:
            singles_playable = 1.0
        else:
            singles_unplayable = 1.0
    return FactorVector(
        teammate_play_playable=other_play,
        teammate_misplay=other_misplay,
        clue_singles_out_playable=singles_playable,
        clue_singles_out_unplayable=singles_unplayable,
        clue_info_tokens_held=float(view.info_tokens),
    )


def expected_values(view: PlayerView, w: WeightVector) -> list[ActionEvaluation]:
    """Evaluate every legal action, in canonical order."""
    evaluations = []
    for action in legal_actions_from_view(view):
        h = factor_vector(view, action, w)
        tier, ev = w.evaluate(h)
        evaluations.append(ActionEvaluation(action=action, h=h, dominant_tier=tier, ev=ev))
    if not evaluations:
        raise ContractViolation("no legal actions to evaluate")
    return evaluations


def choose_action(view: PlayerView, w: WeightVector) -> ActionSpec:
    """Argmax action by (dominance tier, expected value); earliest wins ties."""
    best = None
    for ev in expected_values(view, w):
        if best is None or (ev.dominant_tier, ev.ev) > (best.dominant_tier, best.ev):
            best = ev
    return best.action
