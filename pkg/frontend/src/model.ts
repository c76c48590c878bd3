// Pure board view-model: everything the DOM layer renders is derived here
// from a single service view payload. Controls are enabled strictly by
// membership in the service's legal-action list, so the client can never
// offer a move the engine would reject.

import {
  COLOR_LABELS,
  COLOR_ORDER,
  type ActionDTO,
  type KnowledgeDTO,
  type MoveDTO,
  type ViewDTO,
} from "./types";

export interface CardBadge {
  knownColor: string | null;
  knownRank: number | null;
  // Attributes ruled out by negative information (only shown while the
  // attribute is undetermined).
  ruledOutColors: string[];
  ruledOutRanks: number[];
  singledOut: boolean;
}

export interface Affordances {
  playSlots: number[];
  discardSlots: number[];
  clueColors: string[];
  clueRanks: number[];
}

export interface BoardViewModel {
  status: ViewDTO["status"];
  statusLine: string;
  score: number;
  finalScore: number | null;
  infoTokens: number;
  strikes: number;
  deckSize: number;
  fireworks: { color: string; label: string; height: number }[];
  discardsBySuit: { color: string; cards: string[] }[];
  ownHand: CardBadge[];
  agentHand: { card: string; badge: CardBadge }[];
  affordances: Affordances;
  moveLog: string[];
}

export function badgeFromKnowledge(k: KnowledgeDTO): CardBadge {
  return {
    knownColor: k.known_color,
    knownRank: k.known_rank,
    ruledOutColors:
      k.known_color === null
        ? COLOR_ORDER.filter((c) => !k.possible_colors.includes(c))
        : [],
    ruledOutRanks:
      k.known_rank === null ? [1, 2, 3, 4, 5].filter((r) => !k.possible_ranks.includes(r)) : [],
    singledOut: k.singled_out,
  };
}

export function affordances(view: ViewDTO): Affordances {
  const out: Affordances = { playSlots: [], discardSlots: [], clueColors: [], clueRanks: [] };
  if (view.status !== "human_turn") return out;
  for (const action of view.legal_actions) {
    switch (action.kind) {
      case "play":
        out.playSlots.push(action.slot);
        break;
      case "discard":
        out.discardSlots.push(action.slot);
        break;
      case "clue_color":
        out.clueColors.push(action.value);
        break;
      case "clue_rank":
        out.clueRanks.push(action.value);
        break;
    }
  }
  return out;
}

export function describeAction(action: ActionDTO, actorName: string): string {
  switch (action.kind) {
    case "play":
      return `${actorName} plays slot ${action.slot + 1}`;
    case "discard":
      return `${actorName} discards slot ${action.slot + 1}`;
    case "clue_color":
      return `${actorName} clues ${COLOR_LABELS[action.value] ?? action.value}`;
    case "clue_rank":
      return `${actorName} clues ${action.value}s`;
  }
}

export function describeMove(move: MoveDTO, humanSeat: number): string {
  const actorName = move.actor === humanSeat ? "You" : "Agent";
  let text = `${move.turn + 1}. ${describeAction(move.action, actorName)}`;
  if (move.card) {
    text += ` (${move.card}${move.success === false ? ", strike!" : ""})`;
  }
  if (move.touched && move.touched.length > 0) {
    text += ` touching ${move.touched.map((s) => s + 1).join(", ")}`;
  }
  return text;
}

function statusLine(view: ViewDTO): string {
  if (view.status === "over") {
    return `Game over — final score ${view.final_score}`;
  }
  return view.status === "human_turn" ? "Your turn" : "Agent is thinking…";
}

export function boardViewModel(view: ViewDTO): BoardViewModel {
  const discardsBySuit = COLOR_ORDER.map((color) => ({
    color,
    cards: view.discards.filter((card) => card.startsWith(color)).sort(),
  }));
  return {
    status: view.status,
    statusLine: statusLine(view),
    score: view.score,
    finalScore: view.final_score,
    infoTokens: view.info_tokens,
    strikes: view.strikes,
    deckSize: view.deck_size,
    fireworks: COLOR_ORDER.map((color) => ({
      color,
      label: COLOR_LABELS[color] ?? color,
      height: view.fireworks[color] ?? 0,
    })),
    discardsBySuit,
    ownHand: view.own_hand.map(badgeFromKnowledge),
    agentHand: view.agent_hand.map((entry) => ({
      card: entry.card,
      badge: badgeFromKnowledge(entry.knowledge),
    })),
    affordances: affordances(view),
    moveLog: view.moves.map((m) => describeMove(m, view.seat)),
  };
}

// Click-to-action constructors used by the DOM layer; the clue target is
// filled in by the service (always the other seat).
export const playAction = (slot: number): ActionDTO => ({ kind: "play", slot });
export const discardAction = (slot: number): ActionDTO => ({ kind: "discard", slot });
export const clueColorAction = (value: string): ActionDTO => ({ kind: "clue_color", value });
export const clueRankAction = (value: number): ActionDTO => ({ kind: "clue_rank", value });
