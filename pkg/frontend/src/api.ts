/** Typed client for the authentication service HTTP API.
 *
 * Round replies are parsed through a strict whitelist: the client never
 * surfaces anything beyond the round counter and either the next challenge
 * or the final verdict, no matter what the wire payload carries. Round
 * submissions for a session are serialized; a new round is never pipelined
 * behind an unanswered one.
 */

import { type Challenge, type ServiceConfig, parseChallenge } from "./challenge.js";

export class ServiceError extends Error {
  constructor(public readonly status: number, message: string) {
    super(message);
  }
}

export class ReplyShapeError extends Error {}

export type RoundReply =
  | { round: number; done: false; challenge: Challenge }
  | { round: number; done: true; verdict: string };

export interface RegisterReply {
  user: string;
  symbols: string[];
}

export interface SessionReply {
  session: string;
  challenge: Challenge;
}

export function parseRoundReply(payload: unknown): RoundReply {
  const obj = payload as Record<string, unknown>;
  if (typeof obj?.round !== "number" || typeof obj?.done !== "boolean") {
    throw new ReplyShapeError("round reply must carry round and done");
  }
  if (obj.done) {
    if (typeof obj.verdict !== "string") {
      throw new ReplyShapeError("finished reply must carry a verdict");
    }
    return { round: obj.round, done: true, verdict: obj.verdict };
  }
  if (obj.challenge === undefined) {
    throw new ReplyShapeError("unfinished reply must carry the next challenge");
  }
  return { round: obj.round, done: false, challenge: parseChallenge(obj.challenge) };
}

/** Narrow fetch surface so tests can stub the transport. */
export type FetchLike = (url: string, init?: {
  method?: string;
  headers?: Record<string, string>;
  body?: string;
}) => Promise<{ status: number; json(): Promise<unknown> }>;

export class ServiceClient {
  private lastSubmit: Promise<unknown> = Promise.resolve();

  constructor(
    private readonly baseUrl: string,
    private readonly fetchFn: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private async call(method: string, path: string, body?: unknown): Promise<unknown> {
    const init: Parameters<FetchLike>[1] = { method };
    if (body !== undefined) {
      init.headers = { "content-type": "application/json" };
      init.body = JSON.stringify(body);
    }
    const response = await this.fetchFn(this.baseUrl + path, init);
    const payload = await response.json();
    if (response.status < 200 || response.status >= 300) {
      const message = (payload as { error?: string })?.error ?? `HTTP ${response.status}`;
      throw new ServiceError(response.status, message);
    }
    return payload;
  }

  async config(): Promise<ServiceConfig> {
    const payload = (await this.call("GET", "/config")) as ServiceConfig;
    if (!payload?.params || !Array.isArray(payload.symbols)) {
      throw new ReplyShapeError("config reply missing params or symbols");
    }
    return payload;
  }

  async register(user: string, secret: number[],
                 renderings: string[]): Promise<RegisterReply> {
    return (await this.call("POST", "/register",
                            { user, secret, renderings })) as RegisterReply;
  }

  async startSession(user: string): Promise<SessionReply> {
    const payload = (await this.call("POST", "/session", { user })) as {
      session?: unknown; challenge?: unknown;
    };
    if (typeof payload?.session !== "string") {
      throw new ReplyShapeError("session reply missing session id");
    }
    return { session: payload.session, challenge: parseChallenge(payload.challenge) };
  }

  /** Submit one rendering; queued behind any in-flight submission. */
  submitRound(session: string, trace: string): Promise<RoundReply> {
    const next = this.lastSubmit
      .catch(() => undefined)
      .then(() => this.call(
        "POST", `/session/${encodeURIComponent(session)}/response`, { trace }))
      .then(parseRoundReply);
    this.lastSubmit = next.catch(() => undefined);
    return next;
  }

  async transcript(user: string): Promise<unknown> {
    return this.call("GET", `/transcript?user=${encodeURIComponent(user)}`);
  }
}
