"""Shared helpers: seeded random playouts for sampling game states."""

from __future__ import annotations

import random

import pytest

from cyclone.engine import GameState, apply_action, legal_actions, new_game


def random_playout(rng: random.Random, seed: int | None = None) -> list[GameState]:
    """All states of one random-policy game, initial state included."""
    state = new_game(seed if seed is not None else rng.getrandbits(63))
    states = [state]
    while not state.is_terminal:
        state, _ = apply_action(state, rng.choice(legal_actions(state)))
        states.append(state)
    return states


def sample_states(n: int, seed: int = 0, skip_first: int = 0) -> list[GameState]:
    """About ``n`` states drawn across many random games."""
    rng = random.Random(seed)
    states: list[GameState] = []
    while len(states) < n:
        playout = random_playout(rng)
        states.extend(playout[skip_first :: 3])
    return states[:n]


@pytest.fixture(scope="session")
def midgame_states() -> list[GameState]:
    return [s for s in sample_states(160, seed=11, skip_first=6) if not s.is_terminal][:120]
