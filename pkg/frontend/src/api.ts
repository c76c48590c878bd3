// Thin fetch client for the game service. The client never caches game
// state: every board render follows a fresh server response.

import type { ActionDTO, CreateSessionResponse, EndSessionResponse, ViewDTO } from "./types";

export class ServiceError extends Error {
  constructor(
    public readonly status: number,
    message: string,
  ) {
    super(message);
    this.name = "ServiceError";
  }
}

async function parseError(response: Response): Promise<never> {
  let detail = `HTTP ${response.status}`;
  try {
    const body = (await response.json()) as { detail?: string };
    if (body.detail) detail = body.detail;
  } catch {
    // non-JSON error body; keep the status text
  }
  throw new ServiceError(response.status, detail);
}

export interface CreateSessionOptions {
  preset?: string;
  seed?: number;
  human_seat?: number;
  capture?: boolean;
}

export class GameClient {
  constructor(private readonly baseUrl: string = "") {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await fetch(this.baseUrl + path, {
      headers: { "Content-Type": "application/json" },
      ...init,
    });
    if (!response.ok) await parseError(response);
    return (await response.json()) as T;
  }

  health(): Promise<{ ok: boolean; presets: string[] }> {
    return this.request("/health");
  }

  createSession(options: CreateSessionOptions = {}): Promise<CreateSessionResponse> {
    return this.request("/sessions", { method: "POST", body: JSON.stringify(options) });
  }

  getView(sessionId: string): Promise<ViewDTO> {
    return this.request(`/sessions/${sessionId}`);
  }

  submitAction(sessionId: string, action: ActionDTO): Promise<ViewDTO> {
    return this.request(`/sessions/${sessionId}/actions`, {
      method: "POST",
      body: JSON.stringify({ action }),
    });
  }

  endSession(sessionId: string): Promise<EndSessionResponse> {
    return this.request(`/sessions/${sessionId}/end`, { method: "POST" });
  }
}
