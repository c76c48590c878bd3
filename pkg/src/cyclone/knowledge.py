"""Per-player information sets and the probabilities derived from them.

A :class:`PlayerView` is an immutable snapshot of everything one player
may act on: possibility masks for their own cards (direct clue
constraints only), the teammate's visible cards with *their* knowledge,
the public zones, and unseen-card counts. Probabilities are exact
rationals over those counts, so they can be checked against brute-force
enumeration of the unseen multiset.

Masks are 25-bit integers over card identities (bit ``color*5+rank-1``).
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from functools import cached_property
from typing import TYPE_CHECKING

from .cards import (
    FULL_COUNTS,
    NUM_COLORS,
    NUM_IDENTITIES,
    NUM_RANKS,
    POST_DEAL_DECK_SIZE,
    Card,
    identity_copies,
)
from .engine import ActionKind, ActionSpec, ResolvedEvent
from .errors import ContractViolation, DesyncError

if TYPE_CHECKING:
    from .engine import GameState

FULL_MASK = (1 << NUM_IDENTITIES) - 1
COLOR_MASKS = tuple(0b11111 << (NUM_RANKS * c) for c in range(NUM_COLORS))
RANK_MASKS = tuple(
    sum(1 << (NUM_RANKS * c + r - 1) for c in range(NUM_COLORS)) for r in range(1, NUM_RANKS + 1)
)


def _clue_mask(action: ActionSpec) -> int:
    if action.kind is ActionKind.CLUE_COLOR:
        return COLOR_MASKS[action.value]
    return RANK_MASKS[action.value - 1]


def count_masked(counts: tuple[int, ...], mask: int) -> int:
    """Sum of ``counts`` over the identities set in ``mask``."""
    total = 0
    while mask:
        low = mask & -mask
        total += counts[low.bit_length() - 1]
        mask ^= low
    return total


@dataclass(frozen=True, slots=True)
class CardKnowledge:
    """What the holder knows about one hidden card from clues alone."""

    mask: int = FULL_MASK
    singled_out: bool = False
    drawn_turn: int = 0

    @property
    def known_color(self) -> int | None:
        """The color, when the mask collapses to a single color."""
        for c in range(NUM_COLORS):
            overlap = self.mask & COLOR_MASKS[c]
            if overlap:
                return c if overlap == self.mask else None
        return None

    @property
    def known_rank(self) -> int | None:
        for r in range(1, NUM_RANKS + 1):
            overlap = self.mask & RANK_MASKS[r - 1]
            if overlap:
                return r if overlap == self.mask else None
        return None

    def admits(self, card: Card) -> bool:
        return bool(self.mask >> card.identity & 1)


def single_out_slot(
    knowledge: tuple[CardKnowledge, ...], touched: tuple[int, ...], action: ActionSpec
) -> int | None:
    """Slot singled out by a clue, if any.

    Among the touched slots, the candidates are those whose clued
    attribute was not already determined; the clue singles out a card
    only when exactly one slot qualifies.
    """
    if action.kind is ActionKind.CLUE_COLOR:
        candidates = [i for i in touched if knowledge[i].known_color is None]
    else:
        candidates = [i for i in touched if knowledge[i].known_rank is None]
    return candidates[0] if len(candidates) == 1 else None


def apply_clue(
    knowledge: tuple[CardKnowledge, ...], touched: tuple[int, ...], action: ActionSpec
) -> tuple[CardKnowledge, ...]:
    """Fold one clue into a hand's knowledge.

    Touched cards keep only the clued attribute; untouched cards drop it.
    If the clue singles out a card, the hand's singled-out flag moves to
    that slot.
    """
    target = single_out_slot(knowledge, touched, action)
    attr = _clue_mask(action)
    touched_set = set(touched)
    updated = []
    for i, k in enumerate(knowledge):
        mask = k.mask & attr if i in touched_set else k.mask & ~attr
        singled = k.singled_out if target is None else (i == target)
        updated.append(replace(k, mask=mask, singled_out=singled))
    return tuple(updated)


@dataclass(frozen=True)
class GiveUpCurve:
    """Maximum tolerated deficit as a function of deck size.

    ``threshold(s) = floor + amplitude * (s / 40) ** exponent``. The
    defaults anchor the curve at 5.5 for a full post-deal deck, cross
    below 5 at deck size 29, and bottom out at 1 so immediately playable
    cards are never abandoned.
    """

    floor: float = 1.0
    amplitude: float = 4.5
    exponent: float = 0.4

    def threshold(self, deck_size: int) -> float:
        if not 0 <= deck_size <= POST_DEAL_DECK_SIZE:
            raise ContractViolation(f"deck size {deck_size} out of range")
        return self.floor + self.amplitude * (deck_size / POST_DEAL_DECK_SIZE) ** self.exponent

    def to_record(self) -> dict:
        return {"floor": self.floor, "amplitude": self.amplitude, "exponent": self.exponent}

    @classmethod
    def from_record(cls, rec: dict) -> GiveUpCurve:
        return cls(floor=rec["floor"], amplitude=rec["amplitude"], exponent=rec["exponent"])


DEFAULT_GIVE_UP_CURVE = GiveUpCurve()


def deficit(card: Card, fireworks: tuple[int, ...]) -> int:
    """Rank distance from what the card's color stack has reached."""
    return max(0, card.rank - fireworks[card.color])


def give_up_threshold(deck_size: int, curve: GiveUpCurve = DEFAULT_GIVE_UP_CURVE) -> float:
    return curve.threshold(deck_size)


def playable_mask(fireworks: tuple[int, ...]) -> int:
    """Identities that would advance a stack right now."""
    mask = 0
    for c in range(NUM_COLORS):
        if fireworks[c] < NUM_RANKS:
            mask |= 1 << (NUM_RANKS * c + fireworks[c])
    return mask


def _discard_counts(discards: tuple[Card, ...]) -> list[int]:
    counts = [0] * NUM_IDENTITIES
    for card in discards:
        counts[card.identity] += 1
    return counts


def endangered_mask(fireworks: tuple[int, ...], discards: tuple[Card, ...]) -> int:
    """Unplayed identities with exactly one copy left outside the discard pile."""
    discarded = _discard_counts(discards)
    mask = 0
    for i in range(NUM_IDENTITIES):
        rank = i % NUM_RANKS + 1
        if rank > fireworks[i // NUM_RANKS] and identity_copies(i) - discarded[i] == 1:
            mask |= 1 << i
    return mask


def unneeded_mask(
    fireworks: tuple[int, ...],
    discards: tuple[Card, ...],
    deck_size: int,
    curve: GiveUpCurve = DEFAULT_GIVE_UP_CURVE,
) -> int:
    """Identities that can or will never be played.

    Covers ranks a stack has passed, ranks cut off because every copy of
    a prerequisite is in the discard pile, and ranks whose deficit
    exceeds the give-up threshold for the current deck size.
    """
    discarded = _discard_counts(discards)
    limit = curve.threshold(deck_size)
    mask = 0
    for c in range(NUM_COLORS):
        dead_prefix = False
        for rank in range(1, NUM_RANKS + 1):
            i = NUM_RANKS * c + rank - 1
            if rank <= fireworks[c]:
                mask |= 1 << i
                continue
            if rank - fireworks[c] > limit or dead_prefix:
                mask |= 1 << i
            if discarded[i] == identity_copies(i):
                dead_prefix = True  # cuts off every higher rank of this color
    return mask


@dataclass(frozen=True)
class PlayerView:
    """One player's information set, snapshotted from a game state.

    ``unseen`` counts cards the viewer cannot see (own hand plus deck);
    ``teammate_unseen`` counts cards the *teammate* cannot see (their
    hand plus deck), which is what the teammate mental model reasons
    over. ``history`` is redacted: the identities of the viewer's own
    draws are removed.
    """

    viewer: int
    own: tuple[CardKnowledge, ...]
    teammate_cards: tuple[Card, ...]
    teammate_knowledge: tuple[CardKnowledge, ...]
    fireworks: tuple[int, ...]
    discards: tuple[Card, ...]
    info_tokens: int
    strikes: int
    deck_size: int
    current_player: int
    unseen: tuple[int, ...]
    teammate_unseen: tuple[int, ...]
    history: tuple[ResolvedEvent, ...]

    @property
    def turn(self) -> int:
        return len(self.history)

    @cached_property
    def playable(self) -> int:
        return playable_mask(self.fireworks)

    @cached_property
    def endangered(self) -> int:
        return endangered_mask(self.fireworks, self.discards)

    def unneeded(self, curve: GiveUpCurve = DEFAULT_GIVE_UP_CURVE) -> int:
        return unneeded_mask(self.fireworks, self.discards, self.deck_size, curve)


def _knowledge_from_history(history: tuple[ResolvedEvent, ...]) -> list[list[CardKnowledge]]:
    """Fold the event history into both players' current hand knowledge."""
    hands: list[list[CardKnowledge]] = [
        [CardKnowledge() for _ in range(5)],
        [CardKnowledge() for _ in range(5)],
    ]
    for event in history:
        action = event.action
        if action.is_clue:
            hands[action.target] = list(
                apply_clue(tuple(hands[action.target]), event.touched, action)
            )
        else:
            hands[event.actor].pop(action.slot)
            if event.drawn is not None:
                hands[event.actor].append(CardKnowledge(drawn_turn=event.turn + 1))
    return hands


def _redact(event: ResolvedEvent, viewer: int) -> ResolvedEvent:
    if event.actor == viewer and event.drawn is not None:
        return replace(event, drawn=None)
    return event


def _played_counts(fireworks: tuple[int, ...]) -> list[int]:
    counts = [0] * NUM_IDENTITIES
    for c in range(NUM_COLORS):
        for rank in range(1, fireworks[c] + 1):
            counts[NUM_RANKS * c + rank - 1] = 1
    return counts


def observe(state: GameState, viewer: int) -> PlayerView:
    """Snapshot ``viewer``'s information set from ground truth."""
    teammate = 1 - viewer
    knowledge = _knowledge_from_history(state.history)
    base = list(FULL_COUNTS)
    played = _played_counts(state.fireworks)
    for card in state.discards:
        base[card.identity] -= 1
    for i in range(NUM_IDENTITIES):
        base[i] -= played[i]
    unseen = list(base)
    for card in state.hands[teammate]:
        unseen[card.identity] -= 1
    teammate_unseen = list(base)
    for card in state.hands[viewer]:
        teammate_unseen[card.identity] -= 1
    return PlayerView(
        viewer=viewer,
        own=tuple(knowledge[viewer]),
        teammate_cards=state.hands[teammate],
        teammate_knowledge=tuple(knowledge[teammate]),
        fireworks=state.fireworks,
        discards=state.discards,
        info_tokens=state.info_tokens,
        strikes=state.strikes,
        deck_size=state.deck_size,
        current_player=state.current_player,
        unseen=tuple(unseen),
        teammate_unseen=tuple(teammate_unseen),
        history=tuple(_redact(ev, viewer) for ev in state.history),
    )


def update_knowledge(view: PlayerView, event: ResolvedEvent) -> PlayerView:
    """Advance a view by one engine event.

    Equivalent to re-observing the successor state; raises
    :class:`DesyncError` when the event cannot follow the view.
    """
    if event.turn != view.turn:
        raise DesyncError(f"event for turn {event.turn}, view at turn {view.turn}")
    if event.actor != view.current_player:
        raise DesyncError(f"event actor {event.actor}, expected {view.current_player}")

    action = event.action
    own = list(view.own)
    teammate_cards = list(view.teammate_cards)
    teammate_knowledge = list(view.teammate_knowledge)
    fireworks = list(view.fireworks)
    discards = view.discards
    unseen = list(view.unseen)
    teammate_unseen = list(view.teammate_unseen)
    info_tokens = view.info_tokens
    strikes = view.strikes
    deck_size = view.deck_size

    if action.is_clue:
        if event.touched is None:
            raise DesyncError("clue event without touched slots")
        if action.target == view.viewer:
            own = list(apply_clue(tuple(own), event.touched, action))
        else:
            expected = tuple(i for i, c in enumerate(teammate_cards) if action.touches(c))
            if event.touched != expected:
                raise DesyncError(f"clue touched {event.touched}, visible hand says {expected}")
            teammate_knowledge = list(apply_clue(tuple(teammate_knowledge), event.touched, action))
        info_tokens -= 1
    else:
        if event.card is None:
            raise DesyncError("play/discard event without a card")
        mine = event.actor == view.viewer
        if mine:
            if action.slot >= len(own):
                raise DesyncError(f"slot {action.slot} not in hand")
            own.pop(action.slot)
            unseen[event.card.identity] -= 1  # revealed to the viewer
        else:
            if action.slot >= len(teammate_cards) or teammate_cards[action.slot] != event.card:
                raise DesyncError(f"event card {event.card} does not match visible hand")
            teammate_cards.pop(action.slot)
            teammate_knowledge.pop(action.slot)
            teammate_unseen[event.card.identity] -= 1  # revealed to the teammate
        if action.kind is ActionKind.PLAY and event.success:
            fireworks[event.card.color] = event.card.rank
            if event.card.rank == NUM_RANKS:
                info_tokens = min(8, info_tokens + 1)
        else:
            if action.kind is ActionKind.PLAY:
                strikes += 1
            else:
                info_tokens = min(8, info_tokens + 1)
            discards = discards + (event.card,)
        if deck_size > 0:
            deck_size -= 1
            if mine:
                own.append(CardKnowledge(drawn_turn=event.turn + 1))
                if event.drawn is not None:
                    teammate_unseen[event.drawn.identity] -= 1
            else:
                if event.drawn is None:
                    raise DesyncError("teammate draw must carry the card identity")
                teammate_cards.append(event.drawn)
                teammate_knowledge.append(CardKnowledge(drawn_turn=event.turn + 1))
                unseen[event.drawn.identity] -= 1
        elif event.drawn is not None:
            raise DesyncError("draw from an empty deck")

    return PlayerView(
        viewer=view.viewer,
        own=tuple(own),
        teammate_cards=tuple(teammate_cards),
        teammate_knowledge=tuple(teammate_knowledge),
        fireworks=tuple(fireworks),
        discards=discards,
        info_tokens=info_tokens,
        strikes=strikes,
        deck_size=deck_size,
        current_player=1 - event.actor,
        unseen=tuple(unseen),
        teammate_unseen=tuple(teammate_unseen),
        history=view.history + (_redact(event, view.viewer),),
    )


def _slot_fraction(view: PlayerView, slot: int, favorable_mask: int) -> Fraction:
    if not 0 <= slot < len(view.own):
        raise ContractViolation(f"slot {slot} not occupied")
    mask = view.own[slot].mask
    matching = count_masked(view.unseen, mask)
    if matching == 0:
        raise ContractViolation("no unseen card matches the slot's constraints")
    return Fraction(count_masked(view.unseen, mask & favorable_mask), matching)


def prob_playable(view: PlayerView, slot: int) -> Fraction:
    """Chance the viewer's card is currently playable, given clues and counts."""
    return _slot_fraction(view, slot, view.playable)


def prob_non_endangered(view: PlayerView, slot: int) -> Fraction:
    """Chance the viewer's card is not the last live copy of an unplayed identity."""
    return _slot_fraction(view, slot, FULL_MASK & ~view.endangered)


def prob_unneeded(
    view: PlayerView, slot: int, curve: GiveUpCurve = DEFAULT_GIVE_UP_CURVE
) -> Fraction:
    """Chance the viewer's card can never (or will never) be played."""
    return _slot_fraction(view, slot, view.unneeded(curve))


def single_out_target(view: PlayerView, clue: ActionSpec) -> int | None:
    """Slot of the teammate's card this clue would single out, if any."""
    if not clue.is_clue or clue.target == view.viewer:
        raise ContractViolation("expected a clue aimed at the teammate")
    touched = tuple(i for i, c in enumerate(view.teammate_cards) if clue.touches(c))
    return single_out_slot(view.teammate_knowledge, touched, clue)
