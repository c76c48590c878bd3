// Wire types for the game service's JSON schema (version 1).

export type PlayAction = { kind: "play"; slot: number };
export type DiscardAction = { kind: "discard"; slot: number };
export type ClueColorAction = { kind: "clue_color"; value: string; target?: number };
export type ClueRankAction = { kind: "clue_rank"; value: number; target?: number };
export type ActionDTO = PlayAction | DiscardAction | ClueColorAction | ClueRankAction;

export interface KnowledgeDTO {
  possible_colors: string[];
  possible_ranks: number[];
  known_color: string | null;
  known_rank: number | null;
  singled_out: boolean;
}

export interface MoveDTO {
  turn: number;
  actor: number;
  action: ActionDTO;
  card?: string;
  success?: boolean;
  touched?: number[];
  drawn: string | null;
}

export type GameStatus = "human_turn" | "agent_turn" | "over";

export interface ViewDTO {
  schema: number;
  seat: number;
  preset: string;
  status: GameStatus;
  current_player: number;
  score: number;
  final_score: number | null;
  info_tokens: number;
  strikes: number;
  deck_size: number;
  fireworks: Record<string, number>;
  discards: string[];
  // The player's own cards arrive as knowledge only -- never identities.
  own_hand: KnowledgeDTO[];
  agent_hand: { card: string; knowledge: KnowledgeDTO }[];
  legal_actions: ActionDTO[];
  moves: MoveDTO[];
}

export interface CreateSessionResponse extends ViewDTO {
  session_id: string;
  seed: number;
}

export interface EndSessionResponse {
  schema: number;
  session_id: string;
  score: number;
  terminal: boolean;
  log_text: string;
  decisions_text: string | null;
}

export const COLOR_ORDER = ["R", "Y", "G", "W", "B"] as const;
export const COLOR_LABELS: Record<string, string> = {
  R: "red",
  Y: "yellow",
  G: "green",
  W: "white",
  B: "blue",
};
