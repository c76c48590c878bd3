"""Two-player Hanabi rules engine.

Ground truth lives in :class:`GameState`; transitions are pure
(``apply_action`` returns a fresh state and never mutates its input).
Per-player information sets are derived elsewhere (:mod:`cyclone.knowledge`).

Conventions pinned here so logs replay identically everywhere:

* the shuffled deck is stored in draw order (index 0 is drawn first);
* player 0 is dealt the first five cards, player 1 the next five;
* removing a hand card shifts later slots left; a drawn card is appended
  at the highest index (newest on the right);
* after the draw that empties the deck, each player takes exactly one
  more turn;
* on the third strike the game ends; the reported final score is 0 by
  default (``strike_out_zero``), or the stack sum if configured.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field, replace
from enum import Enum

from .cards import (
    COLOR_CHARS,
    DECK_SIZE,
    HAND_SIZE,
    NUM_COLORS,
    NUM_RANKS,
    Card,
    full_deck,
)
from .errors import ConfigurationError, ContractViolation, FormatError, IllegalActionError, ReplayError
from .rng import SplitMix64

LOG_FORMAT_VERSION = 1
MAX_INFO_TOKENS = 8
MAX_STRIKES = 3


class ActionKind(str, Enum):
    PLAY = "play"
    DISCARD = "discard"
    CLUE_COLOR = "clue_color"
    CLUE_RANK = "clue_rank"


_KIND_CODES = {
    ActionKind.PLAY: "p",
    ActionKind.DISCARD: "d",
    ActionKind.CLUE_COLOR: "c",
    ActionKind.CLUE_RANK: "r",
}
_CODE_KINDS = {v: k for k, v in _KIND_CODES.items()}


@dataclass(frozen=True, slots=True)
class ActionSpec:
    """One move: play/discard a slot, or clue a color/rank to the other player.

    Exactly the fields for the kind are set: ``slot`` for plays and
    discards, ``value`` and ``target`` for clues (``value`` is a color
    index for color clues, a rank for rank clues).
    """

    kind: ActionKind
    slot: int | None = None
    value: int | None = None
    target: int | None = None

    def __post_init__(self) -> None:
        if self.kind in (ActionKind.PLAY, ActionKind.DISCARD):
            ok = (
                self.slot is not None
                and 0 <= self.slot < HAND_SIZE
                and self.value is None
                and self.target is None
            )
        else:
            lo, hi = (0, NUM_COLORS - 1) if self.kind is ActionKind.CLUE_COLOR else (1, NUM_RANKS)
            ok = (
                self.slot is None
                and self.value is not None
                and lo <= self.value <= hi
                and self.target in (0, 1)
            )
        if not ok:
            raise ValueError(f"malformed action {self.kind} slot={self.slot} value={self.value} target={self.target}")

    @property
    def is_clue(self) -> bool:
        return self.kind in (ActionKind.CLUE_COLOR, ActionKind.CLUE_RANK)

    def touches(self, card: Card) -> bool:
        """Whether this clue names the given card's attribute."""
        if self.kind is ActionKind.CLUE_COLOR:
            return card.color == self.value
        if self.kind is ActionKind.CLUE_RANK:
            return card.rank == self.value
        raise ValueError("touches() is only meaningful for clues")

    def to_record(self) -> dict:
        rec: dict = {"k": _KIND_CODES[self.kind]}
        if self.slot is not None:
            rec["s"] = self.slot
        if self.kind is ActionKind.CLUE_COLOR:
            rec["v"] = COLOR_CHARS[self.value]
            rec["t"] = self.target
        elif self.kind is ActionKind.CLUE_RANK:
            rec["v"] = self.value
            rec["t"] = self.target
        return rec

    @classmethod
    def from_record(cls, rec: dict) -> ActionSpec:
        try:
            kind = _CODE_KINDS[rec["k"]]
            if kind in (ActionKind.PLAY, ActionKind.DISCARD):
                return cls(kind, slot=rec["s"])
            value = COLOR_CHARS.index(rec["v"]) if kind is ActionKind.CLUE_COLOR else int(rec["v"])
            return cls(kind, value=value, target=rec["t"])
        except (KeyError, ValueError, TypeError) as exc:
            raise FormatError(f"bad action record {rec!r}: {exc}") from exc


@dataclass(frozen=True, slots=True)
class ResolvedEvent:
    """What one applied action did, with ground-truth identities.

    ``card`` is the played/discarded card, ``success`` whether a play
    landed, ``touched`` the clued slot indices, ``drawn`` the replacement
    card (None if the deck was empty or the action was a clue).
    """

    turn: int
    actor: int
    action: ActionSpec
    card: Card | None = None
    success: bool | None = None
    touched: tuple[int, ...] | None = None
    drawn: Card | None = None


@dataclass(frozen=True, slots=True)
class RulesConfig:
    """Standard two-player rules; non-standard sizes are rejected.

    ``strike_out_zero`` selects the reported score on a third strike:
    0 when true (the common tournament convention), stack sum otherwise.
    """

    hand_size: int = HAND_SIZE
    num_players: int = 2
    strike_out_zero: bool = True

    def validate(self) -> None:
        if self.num_players != 2:
            raise ConfigurationError(f"only 2 players supported, got {self.num_players}")
        if self.hand_size != HAND_SIZE:
            raise ConfigurationError(f"hand size must be {HAND_SIZE} in standard mode, got {self.hand_size}")

    def to_record(self) -> dict:
        return {
            "hand_size": self.hand_size,
            "players": self.num_players,
            "strike_out_zero": self.strike_out_zero,
        }

    @classmethod
    def from_record(cls, rec: dict) -> RulesConfig:
        try:
            return cls(
                hand_size=rec["hand_size"],
                num_players=rec["players"],
                strike_out_zero=rec["strike_out_zero"],
            )
        except KeyError as exc:
            raise FormatError(f"bad config record {rec!r}") from exc

    def digest(self) -> str:
        text = json.dumps(self.to_record(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(text.encode()).hexdigest()[:12]


@dataclass(frozen=True, slots=True)
class GameState:
    """Full ground-truth position. Immutable; transitions build new states."""

    config: RulesConfig
    seed: int
    deck_order: tuple[Card, ...]  # full 50 cards in draw order
    next_draw: int  # index into deck_order of the next card to draw
    hands: tuple[tuple[Card, ...], tuple[Card, ...]]
    fireworks: tuple[int, ...]  # top rank per color, 0..5
    info_tokens: int
    strikes: int
    discards: tuple[Card, ...]  # in discard order
    current_player: int
    turns_after_deck_empty: int
    history: tuple[ResolvedEvent, ...] = field(default_factory=tuple)

    @property
    def deck_size(self) -> int:
        return len(self.deck_order) - self.next_draw

    @property
    def turn(self) -> int:
        return len(self.history)

    @property
    def score(self) -> int:
        return sum(self.fireworks)

    @property
    def is_terminal(self) -> bool:
        return (
            self.strikes >= MAX_STRIKES
            or all(f == NUM_RANKS for f in self.fireworks)
            or self.turns_after_deck_empty >= 2
        )

    @property
    def final_score(self) -> int:
        """Reported score; only meaningful once terminal."""
        if self.strikes >= MAX_STRIKES and self.config.strike_out_zero:
            return 0
        return self.score

    def to_log(self, include_deck: bool = True) -> GameLog:
        return GameLog(
            seed=self.seed,
            config=self.config,
            deck=self.deck_order if include_deck else None,
            actions=tuple(ev.action for ev in self.history),
        )


def new_game(seed: int, config: RulesConfig | None = None) -> GameState:
    """Shuffle deterministically from ``seed`` and deal both hands."""
    config = config or RulesConfig()
    config.validate()
    deck = full_deck()
    SplitMix64(seed).shuffle(deck)
    return _initial_state(seed, config, tuple(deck))


def _initial_state(seed: int, config: RulesConfig, deck_order: tuple[Card, ...]) -> GameState:
    hands = (deck_order[0:HAND_SIZE], deck_order[HAND_SIZE : 2 * HAND_SIZE])
    return GameState(
        config=config,
        seed=seed,
        deck_order=deck_order,
        next_draw=2 * HAND_SIZE,
        hands=hands,
        fireworks=(0,) * NUM_COLORS,
        info_tokens=MAX_INFO_TOKENS,
        strikes=0,
        discards=(),
        current_player=0,
        turns_after_deck_empty=0,
    )


def illegality_reason(state: GameState, action: ActionSpec) -> str | None:
    """Reason code if ``action`` is illegal in ``state``, else None."""
    if state.is_terminal:
        return "game_over"
    actor = state.current_player
    if action.kind in (ActionKind.PLAY, ActionKind.DISCARD):
        if action.slot >= len(state.hands[actor]):
            return "empty_slot"
        if action.kind is ActionKind.DISCARD and state.info_tokens >= MAX_INFO_TOKENS:
            return "tokens_full"
        return None
    # Clues.
    if state.info_tokens <= 0:
        return "no_tokens"
    if action.target != 1 - actor:
        return "bad_target"
    if not any(action.touches(card) for card in state.hands[action.target]):
        return "clue_touches_nothing"
    return None


def legal_actions(state: GameState) -> list[ActionSpec]:
    """All legal moves in canonical order.

    Plays by slot, discards by slot, color clues by color, rank clues by
    rank. The order is part of the engine contract: the decision layer
    breaks expected-value ties by it.
    """
    if state.is_terminal:
        raise ContractViolation("legal_actions on a terminal state")
    actor = state.current_player
    other = 1 - actor
    hand = state.hands[actor]
    actions = [ActionSpec(ActionKind.PLAY, slot=i) for i in range(len(hand))]
    if state.info_tokens < MAX_INFO_TOKENS:
        actions.extend(ActionSpec(ActionKind.DISCARD, slot=i) for i in range(len(hand)))
    if state.info_tokens > 0:
        target_hand = state.hands[other]
        colors = {card.color for card in target_hand}
        ranks = {card.rank for card in target_hand}
        actions.extend(
            ActionSpec(ActionKind.CLUE_COLOR, value=c, target=other) for c in range(NUM_COLORS) if c in colors
        )
        actions.extend(
            ActionSpec(ActionKind.CLUE_RANK, value=r, target=other) for r in range(1, NUM_RANKS + 1) if r in ranks
        )
    return actions


def apply_action(state: GameState, action: ActionSpec) -> tuple[GameState, ResolvedEvent]:
    """Resolve one action; raises :class:`IllegalActionError` untouched."""
    reason = illegality_reason(state, action)
    if reason is not None:
        raise IllegalActionError(reason, f"{action} at turn {state.turn}")

    actor = state.current_player
    deck_empty_at_start = state.deck_size == 0
    hands = [list(state.hands[0]), list(state.hands[1])]
    fireworks = list(state.fireworks)
    discards = state.discards
    info_tokens = state.info_tokens
    strikes = state.strikes
    next_draw = state.next_draw

    card: Card | None = None
    success: bool | None = None
    touched: tuple[int, ...] | None = None
    drawn: Card | None = None

    if action.kind is ActionKind.PLAY:
        card = hands[actor].pop(action.slot)
        success = card.rank == fireworks[card.color] + 1
        if success:
            fireworks[card.color] = card.rank
            if card.rank == NUM_RANKS:
                info_tokens = min(MAX_INFO_TOKENS, info_tokens + 1)
        else:
            strikes += 1
            discards = discards + (card,)
    elif action.kind is ActionKind.DISCARD:
        card = hands[actor].pop(action.slot)
        discards = discards + (card,)
        info_tokens = min(MAX_INFO_TOKENS, info_tokens + 1)
    else:
        info_tokens -= 1
        touched = tuple(i for i, c in enumerate(hands[action.target]) if action.touches(c))

    if action.kind in (ActionKind.PLAY, ActionKind.DISCARD) and next_draw < len(state.deck_order):
        drawn = state.deck_order[next_draw]
        next_draw += 1
        hands[actor].append(drawn)

    event = ResolvedEvent(
        turn=state.turn,
        actor=actor,
        action=action,
        card=card,
        success=success,
        touched=touched,
        drawn=drawn,
    )
    new_state = replace(
        state,
        next_draw=next_draw,
        hands=(tuple(hands[0]), tuple(hands[1])),
        fireworks=tuple(fireworks),
        info_tokens=info_tokens,
        strikes=strikes,
        discards=discards,
        current_player=1 - actor,
        turns_after_deck_empty=state.turns_after_deck_empty + (1 if deck_empty_at_start else 0),
        history=state.history + (event,),
    )
    return new_state, event


@dataclass(frozen=True, slots=True)
class GameLog:
    """Replayable record of one game: seed, config, actions, optional deck.

    When ``deck`` is present it overrides the seed-derived shuffle, which
    decouples the log from the shuffling PRNG entirely.
    """

    seed: int
    config: RulesConfig
    actions: tuple[ActionSpec, ...]
    deck: tuple[Card, ...] | None = None
    version: int = LOG_FORMAT_VERSION

    def to_text(self) -> str:
        """Line-delimited form: one header line, then one action per line."""
        header = {
            "v": self.version,
            "kind": "gamelog",
            "seed": self.seed,
            "config": self.config.to_record(),
            "config_hash": self.config.digest(),
            "deck": "".join(str(c) for c in self.deck) if self.deck is not None else None,
        }
        lines = [json.dumps(header, sort_keys=True, separators=(",", ":"))]
        lines.extend(json.dumps(a.to_record(), sort_keys=True, separators=(",", ":")) for a in self.actions)
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> GameLog:
        lines = [line for line in text.split("\n") if line]
        if not lines:
            raise FormatError("empty game log")
        try:
            header = json.loads(lines[0])
        except json.JSONDecodeError as exc:
            raise FormatError(f"bad log header: {exc}") from exc
        if header.get("kind") != "gamelog":
            raise FormatError("not a game log")
        if header.get("v") != LOG_FORMAT_VERSION:
            raise FormatError(f"unsupported log version {header.get('v')!r}")
        config = RulesConfig.from_record(header["config"])
        if header.get("config_hash") not in (None, config.digest()):
            raise FormatError("config hash mismatch")
        deck_text = header.get("deck")
        deck = None
        if deck_text is not None:
            if len(deck_text) != 2 * DECK_SIZE:
                raise FormatError(f"deck must list {DECK_SIZE} cards")
            deck = tuple(Card.parse(deck_text[i : i + 2]) for i in range(0, len(deck_text), 2))
        actions = tuple(ActionSpec.from_record(json.loads(line)) for line in lines[1:])
        return cls(seed=header["seed"], config=config, actions=actions, deck=deck)


def replay(log: GameLog) -> GameState:
    """Re-run a log to its final state; errors name the failing index."""
    log.config.validate()
    if log.deck is not None:
        if sorted(log.deck, key=lambda c: c.identity) != sorted(full_deck(), key=lambda c: c.identity):
            raise FormatError("explicit deck is not the standard 50-card multiset")
        state = _initial_state(log.seed, log.config, log.deck)
    else:
        state = new_game(log.seed, log.config)
    for index, action in enumerate(log.actions):
        try:
            state, _ = apply_action(state, action)
        except (IllegalActionError, ContractViolation) as exc:
            raise ReplayError(index, exc) from exc
    return state
