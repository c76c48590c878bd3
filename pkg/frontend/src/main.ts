// Entry point: lobby -> live board -> review. The session id is the only
// thing persisted (sessionStorage); reloading mid-game re-fetches the view
// and renders an identical board.

import { GameClient, ServiceError } from "./api";
import { boardViewModel } from "./model";
import { renderBoard, renderError, renderLobby } from "./render";
import type { ActionDTO, EndSessionResponse, ViewDTO } from "./types";

const client = new GameClient("");
const root = document.getElementById("app") as HTMLElement;
const SESSION_KEY = "cyclone-session";

let sessionId: string | null = sessionStorage.getItem(SESSION_KEY);
let lastEnd: EndSessionResponse | null = null;

function download(filename: string, text: string): void {
  const blob = new Blob([text], { type: "application/x-ndjson" });
  const url = URL.createObjectURL(blob);
  const anchor = document.createElement("a");
  anchor.href = url;
  anchor.download = filename;
  anchor.click();
  URL.revokeObjectURL(url);
}

async function showLobby(): Promise<void> {
  sessionStorage.removeItem(SESSION_KEY);
  sessionId = null;
  try {
    const health = await client.health();
    renderLobby(root, health.presets, (preset) => void startGame(preset));
  } catch (error) {
    renderLobby(root, ["human-like", "human-complementary", "self-play"], (preset) =>
      void startGame(preset),
    );
    surfaceError(error);
  }
}

async function startGame(preset: string): Promise<void> {
  try {
    const view = await client.createSession({ preset });
    sessionId = view.session_id;
    sessionStorage.setItem(SESSION_KEY, sessionId);
    renderView(view);
  } catch (error) {
    surfaceError(error);
  }
}

function renderView(view: ViewDTO): void {
  renderBoard(root, boardViewModel(view), {
    onAction: (action) => void submit(action),
    onNewGame: () => void showLobby(),
    onDownloadLog: () => void downloadArtifacts("log"),
    onDownloadDecisions: () => void downloadArtifacts("decisions"),
  });
}

async function submit(action: ActionDTO): Promise<void> {
  if (!sessionId) return;
  try {
    renderView(await client.submitAction(sessionId, action));
  } catch (error) {
    surfaceError(error);
    // Re-fetch so the board always shows the server's view of the world.
    if (sessionId) renderView(await client.getView(sessionId));
  }
}

async function downloadArtifacts(which: "log" | "decisions"): Promise<void> {
  try {
    if (lastEnd === null && sessionId) {
      lastEnd = await client.endSession(sessionId);
      sessionStorage.removeItem(SESSION_KEY);
    }
    if (!lastEnd) return;
    if (which === "log") {
      download(`game-${lastEnd.session_id}.log`, lastEnd.log_text);
    } else if (lastEnd.decisions_text) {
      download(`decisions-${lastEnd.session_id}.db`, lastEnd.decisions_text);
    }
  } catch (error) {
    surfaceError(error);
  }
}

function surfaceError(error: unknown): void {
  const message =
    error instanceof ServiceError
      ? `Service error (${error.status}): ${error.message}`
      : `Cannot reach the game service: ${String(error)}`;
  renderError(root, message, () => undefined);
}

async function boot(): Promise<void> {
  if (sessionId) {
    try {
      lastEnd = null;
      renderView(await client.getView(sessionId));
      return;
    } catch {
      sessionStorage.removeItem(SESSION_KEY);
      sessionId = null;
    }
  }
  await showLobby();
}

void boot();
