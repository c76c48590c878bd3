import { afterEach, describe, expect, it, vi } from "vitest";

import { GameClient, ServiceError } from "../src/api";

function mockFetch(status: number, body: unknown) {
  const impl = vi.fn(async () => ({
    ok: status >= 200 && status < 300,
    status,
    json: async () => body,
  }));
  vi.stubGlobal("fetch", impl);
  return impl;
}

afterEach(() => {
  vi.unstubAllGlobals();
});

describe("GameClient", () => {
  it("posts session creation options", async () => {
    const impl = mockFetch(200, { session_id: "abc", schema: 1 });
    const client = new GameClient("http://host");
    await client.createSession({ preset: "self-play", seed: 7 });
    expect(impl).toHaveBeenCalledWith(
      "http://host/sessions",
      expect.objectContaining({
        method: "POST",
        body: JSON.stringify({ preset: "self-play", seed: 7 }),
      }),
    );
  });

  it("wraps action submissions", async () => {
    const impl = mockFetch(200, { schema: 1 });
    await new GameClient().submitAction("abc", { kind: "play", slot: 1 });
    expect(impl).toHaveBeenCalledWith(
      "/sessions/abc/actions",
      expect.objectContaining({
        method: "POST",
        body: JSON.stringify({ action: { kind: "play", slot: 1 } }),
      }),
    );
  });

  it("surfaces the service's error detail", async () => {
    mockFetch(409, { detail: "illegal action: tokens_full" });
    const client = new GameClient();
    await expect(client.submitAction("abc", { kind: "discard", slot: 0 })).rejects.toThrowError(
      ServiceError,
    );
    await expect(
      client.submitAction("abc", { kind: "discard", slot: 0 }),
    ).rejects.toMatchObject({ status: 409, message: "illegal action: tokens_full" });
  });

  it("falls back to the HTTP status when the body is not JSON", async () => {
    const impl = vi.fn(async () => ({
      ok: false,
      status: 502,
      json: async () => {
        throw new Error("no body");
      },
    }));
    vi.stubGlobal("fetch", impl);
    await expect(new GameClient().getView("abc")).rejects.toMatchObject({
      status: 502,
      message: "HTTP 502",
    });
  });
});
