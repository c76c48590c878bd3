"""Card vocabulary for the standard two-player Hanabi deck.

Five suits, ranks 1..5, copies 3/2/2/2/1 per suit (10 per suit, 50 total).
Card identities are also addressable as a flat index 0..24
(``color * 5 + rank - 1``), which the knowledge layer uses for
possibility masks and unseen-card counting.
"""

from __future__ import annotations

from dataclasses import dataclass

NUM_COLORS = 5
NUM_RANKS = 5
NUM_IDENTITIES = NUM_COLORS * NUM_RANKS

COLOR_CHARS = "RYGWB"
COLOR_NAMES = ("red", "yellow", "green", "white", "blue")

# Copies per rank: three 1s, two each of 2/3/4, one 5.
RANK_COPIES = (3, 2, 2, 2, 1)

HAND_SIZE = 5
DECK_SIZE = sum(RANK_COPIES) * NUM_COLORS  # 50
POST_DEAL_DECK_SIZE = DECK_SIZE - 2 * HAND_SIZE  # 40
MAX_SCORE = NUM_COLORS * NUM_RANKS  # 25


@dataclass(frozen=True, slots=True)
class Card:
    """One physical card: a color index 0..4 and a rank 1..5."""

    color: int
    rank: int

    def __post_init__(self) -> None:
        if not (0 <= self.color < NUM_COLORS and 1 <= self.rank <= NUM_RANKS):
            raise ValueError(f"invalid card ({self.color}, {self.rank})")

    @property
    def identity(self) -> int:
        """Flat identity index 0..24."""
        return self.color * NUM_RANKS + (self.rank - 1)

    @property
    def copies(self) -> int:
        """Total copies of this identity in the deck."""
        return RANK_COPIES[self.rank - 1]

    def __str__(self) -> str:
        return f"{COLOR_CHARS[self.color]}{self.rank}"

    @classmethod
    def parse(cls, text: str) -> Card:
        """Parse the compact form used in logs, e.g. ``"R1"``."""
        if len(text) != 2 or text[0] not in COLOR_CHARS or not text[1].isdigit():
            raise ValueError(f"unparseable card {text!r}")
        return cls(COLOR_CHARS.index(text[0]), int(text[1]))


def identity_card(identity: int) -> Card:
    """Inverse of :attr:`Card.identity`."""
    return Card(identity // NUM_RANKS, identity % NUM_RANKS + 1)


def identity_copies(identity: int) -> int:
    return RANK_COPIES[identity % NUM_RANKS]


def full_deck() -> list[Card]:
    """The 50-card deck in canonical (unshuffled) order."""
    return [
        Card(color, rank)
        for color in range(NUM_COLORS)
        for rank in range(1, NUM_RANKS + 1)
        for _ in range(RANK_COPIES[rank - 1])
    ]


# Multiset of the full deck as a length-25 count vector.
FULL_COUNTS = tuple(identity_copies(i) for i in range(NUM_IDENTITIES))
