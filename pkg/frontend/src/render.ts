// DOM rendering. Renders are full rebuilds from a BoardViewModel; no game
// state lives in the DOM beyond the latest server payload.

import type { BoardViewModel, CardBadge } from "./model";
import { COLOR_LABELS, COLOR_ORDER, type ActionDTO } from "./types";
import {
  clueColorAction,
  clueRankAction,
  discardAction,
  playAction,
} from "./model";

export interface Handlers {
  onAction(action: ActionDTO): void;
  onNewGame(): void;
  onDownloadLog(): void;
  onDownloadDecisions(): void;
}

function el(tag: string, className = "", text = ""): HTMLElement {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text) node.textContent = text;
  return node;
}

function badgeNode(badge: CardBadge): HTMLElement {
  const node = el("div", "badge");
  const known = el(
    "span",
    "known",
    `${badge.knownColor ?? "?"}${badge.knownRank ?? "?"}`,
  );
  node.appendChild(known);
  if (badge.singledOut) node.appendChild(el("span", "singled", "!"));
  const negatives: string[] = [
    ...badge.ruledOutColors.map((c) => `not ${COLOR_LABELS[c] ?? c}`),
    ...badge.ruledOutRanks.map((r) => `not ${r}`),
  ];
  if (negatives.length > 0) {
    const neg = el("span", "negatives", negatives.join(", "));
    node.appendChild(neg);
  }
  return node;
}

function cardNode(card: string): HTMLElement {
  const node = el("div", `card suit-${card[0]}`, card);
  return node;
}

export function renderBoard(root: HTMLElement, model: BoardViewModel, handlers: Handlers): void {
  root.replaceChildren();

  const header = el("div", "header");
  header.appendChild(el("span", "status", model.statusLine));
  header.appendChild(el("span", "meta", `score ${model.score}`));
  header.appendChild(el("span", "meta", `tokens ${model.infoTokens}/8`));
  header.appendChild(el("span", "meta", `strikes ${model.strikes}/3`));
  header.appendChild(el("span", "meta", `deck ${model.deckSize}`));
  root.appendChild(header);

  const fireworks = el("div", "fireworks");
  for (const stack of model.fireworks) {
    const node = el("div", `stack suit-${stack.color}`);
    node.appendChild(el("div", "stack-top", stack.height ? `${stack.color}${stack.height}` : stack.color));
    node.title = `${stack.label} stack at ${stack.height}`;
    fireworks.appendChild(node);
  }
  root.appendChild(fireworks);

  const agent = el("div", "hand agent-hand");
  agent.appendChild(el("h3", "", "Agent hand (face up)"));
  const agentCards = el("div", "cards");
  for (const entry of model.agentHand) {
    const holder = el("div", "card-holder");
    holder.appendChild(cardNode(entry.card));
    holder.appendChild(badgeNode(entry.badge));
    agentCards.appendChild(holder);
  }
  agent.appendChild(agentCards);
  root.appendChild(agent);

  const own = el("div", "hand own-hand");
  own.appendChild(el("h3", "", "Your hand (what you know)"));
  const ownCards = el("div", "cards");
  model.ownHand.forEach((badge, slot) => {
    const holder = el("div", "card-holder");
    const back = el("div", "card card-back", badge.knownColor || badge.knownRank ? "" : "?");
    back.dataset.slot = String(slot);
    holder.appendChild(back);
    holder.appendChild(badgeNode(badge));
    const buttons = el("div", "slot-actions");
    const play = el("button", "", "play") as HTMLButtonElement;
    play.disabled = !model.affordances.playSlots.includes(slot);
    play.dataset.testid = `play-${slot}`;
    play.addEventListener("click", () => handlers.onAction(playAction(slot)));
    const discard = el("button", "", "discard") as HTMLButtonElement;
    discard.disabled = !model.affordances.discardSlots.includes(slot);
    discard.dataset.testid = `discard-${slot}`;
    discard.addEventListener("click", () => handlers.onAction(discardAction(slot)));
    buttons.append(play, discard);
    holder.appendChild(buttons);
    ownCards.appendChild(holder);
  });
  own.appendChild(ownCards);
  root.appendChild(own);

  const clues = el("div", "clues");
  clues.appendChild(el("h3", "", "Give a clue"));
  const colorRow = el("div", "chip-row");
  for (const color of COLOR_ORDER) {
    const chip = el("button", `chip suit-${color}`, COLOR_LABELS[color] ?? color) as HTMLButtonElement;
    chip.disabled = !model.affordances.clueColors.includes(color);
    chip.dataset.testid = `clue-color-${color}`;
    chip.addEventListener("click", () => handlers.onAction(clueColorAction(color)));
    colorRow.appendChild(chip);
  }
  const rankRow = el("div", "chip-row");
  for (const rank of [1, 2, 3, 4, 5]) {
    const chip = el("button", "chip", String(rank)) as HTMLButtonElement;
    chip.disabled = !model.affordances.clueRanks.includes(rank);
    chip.dataset.testid = `clue-rank-${rank}`;
    chip.addEventListener("click", () => handlers.onAction(clueRankAction(rank)));
    rankRow.appendChild(chip);
  }
  clues.append(colorRow, rankRow);
  root.appendChild(clues);

  const discards = el("div", "discards");
  discards.appendChild(el("h3", "", "Discards"));
  for (const suit of model.discardsBySuit) {
    const row = el("div", "discard-row");
    row.appendChild(el("span", `suit-label suit-${suit.color}`, suit.color));
    for (const card of suit.cards) row.appendChild(cardNode(card));
    discards.appendChild(row);
  }
  root.appendChild(discards);

  const log = el("div", "move-log");
  log.appendChild(el("h3", "", "Moves"));
  const list = el("ol");
  for (const line of model.moveLog) list.appendChild(el("li", "", line));
  log.appendChild(list);
  root.appendChild(log);

  if (model.status === "over") {
    const review = el("div", "review");
    review.appendChild(el("h2", "", `Final score: ${model.finalScore}`));
    const logBtn = el("button", "", "Download game log") as HTMLButtonElement;
    logBtn.dataset.testid = "download-log";
    logBtn.addEventListener("click", handlers.onDownloadLog);
    const decBtn = el("button", "", "Download decisions") as HTMLButtonElement;
    decBtn.dataset.testid = "download-decisions";
    decBtn.addEventListener("click", handlers.onDownloadDecisions);
    const again = el("button", "", "New game") as HTMLButtonElement;
    again.addEventListener("click", handlers.onNewGame);
    review.append(logBtn, decBtn, again);
    root.appendChild(review);
  }
}

export function renderError(root: HTMLElement, message: string, onDismiss: () => void): void {
  const banner = el("div", "error-banner");
  banner.appendChild(el("span", "", message));
  const button = el("button", "", "dismiss") as HTMLButtonElement;
  button.addEventListener("click", () => {
    banner.remove();
    onDismiss();
  });
  banner.appendChild(button);
  root.prepend(banner);
}

export function renderLobby(
  root: HTMLElement,
  presets: string[],
  onStart: (preset: string) => void,
): void {
  root.replaceChildren();
  const box = el("div", "lobby");
  box.appendChild(el("h2", "", "Play Hanabi with an agent"));
  const select = document.createElement("select");
  select.dataset.testid = "preset-select";
  for (const preset of presets) {
    const option = document.createElement("option");
    option.value = preset;
    option.textContent = preset;
    select.appendChild(option);
  }
  const start = el("button", "", "Start game") as HTMLButtonElement;
  start.dataset.testid = "start-game";
  start.addEventListener("click", () => onStart(select.value));
  box.append(select, start);
  root.appendChild(box);
}
