/** Trace file schema: JSON lines, one touch event per line, optional
 * header line carrying labels. Mirrors the service's on-disk format so an
 * uploaded rendering re-parses byte-for-byte after serialize/parse.
 */

export const ACTIONS = ["down", "move", "up"] as const;
export type Action = (typeof ACTIONS)[number];

export const MOTION_CHANNELS = 15;

export interface TraceEvent {
  /** Milliseconds since trace start. */
  t: number;
  x: number;
  y: number;
  /** Pressure in [0, 1]; null when the device does not report it. */
  p: number | null;
  /** Contact size in [0, 1]; null when the device does not report it. */
  s: number | null;
  a: Action;
  /** Motion-sensor block (15 channels); always null in the browser. */
  m: number[] | null;
}

export interface TraceHeader {
  user: string | null;
  symbol: string | null;
  session: string | null;
}

export interface TraceFile {
  header: TraceHeader | null;
  events: TraceEvent[];
}

export class TraceFormatError extends Error {}

function checkNumber(value: unknown, what: string): number {
  if (typeof value !== "number" || !Number.isFinite(value)) {
    throw new TraceFormatError(`${what} is not a finite number: ${value}`);
  }
  return value;
}

function checkUnit(value: unknown, what: string): number | null {
  if (value === null || value === undefined) return null;
  const num = checkNumber(value, what);
  if (num < 0 || num > 1) {
    throw new TraceFormatError(`${what}=${num} outside [0, 1]`);
  }
  return num;
}

export function validateEvent(event: TraceEvent, where = "event"): void {
  checkNumber(event.t, `${where}: t`);
  checkNumber(event.x, `${where}: x`);
  checkNumber(event.y, `${where}: y`);
  checkUnit(event.p, `${where}: p`);
  checkUnit(event.s, `${where}: s`);
  if (!ACTIONS.includes(event.a)) {
    throw new TraceFormatError(`${where}: unknown action ${JSON.stringify(event.a)}`);
  }
  if (event.m !== null && event.m.length !== MOTION_CHANNELS) {
    throw new TraceFormatError(
      `${where}: motion block has ${event.m.length} channels, expected ${MOTION_CHANNELS}`);
  }
}

/** Structural rules shared with the verifier: at least a touch-down and a
 * touch-up, in that order, with time never going backwards. */
export function validateEvents(events: TraceEvent[]): void {
  if (events.length < 2) {
    throw new TraceFormatError(`trace needs >= 2 events, got ${events.length}`);
  }
  if (events[0]!.a !== "down") {
    throw new TraceFormatError("first event must be a touch-down");
  }
  if (events[events.length - 1]!.a !== "up") {
    throw new TraceFormatError("last event must be a touch-up");
  }
  events.forEach((event, i) => validateEvent(event, `event ${i}`));
  for (let i = 1; i < events.length; i++) {
    if (events[i]!.t < events[i - 1]!.t) {
      throw new TraceFormatError(
        `time goes backwards: ${events[i - 1]!.t} -> ${events[i]!.t}`);
    }
  }
}

function eventLine(event: TraceEvent): string {
  // Fixed key order keeps our own output byte-stable under a round trip.
  return JSON.stringify({
    t: event.t, x: event.x, y: event.y,
    p: event.p, s: event.s, a: event.a, m: event.m,
  });
}

export function serializeTrace(trace: TraceFile): string {
  validateEvents(trace.events);
  const lines: string[] = [];
  if (trace.header !== null) {
    lines.push(JSON.stringify({
      user: trace.header.user,
      symbol: trace.header.symbol,
      session: trace.header.session,
    }));
  }
  for (const event of trace.events) lines.push(eventLine(event));
  return lines.join("\n") + "\n";
}

function parseEvent(obj: Record<string, unknown>, lineno: number): TraceEvent {
  const missing = ["t", "x", "y", "a"].filter((key) => !(key in obj));
  if (missing.length > 0) {
    throw new TraceFormatError(`line ${lineno}: event missing ${JSON.stringify(missing)}`);
  }
  const event: TraceEvent = {
    t: obj.t as number,
    x: obj.x as number,
    y: obj.y as number,
    p: (obj.p ?? null) as number | null,
    s: (obj.s ?? null) as number | null,
    a: obj.a as Action,
    m: (obj.m ?? null) as number[] | null,
  };
  try {
    validateEvent(event);
  } catch (exc) {
    throw new TraceFormatError(`line ${lineno}: ${(exc as Error).message}`);
  }
  return event;
}

export function parseTrace(text: string): TraceFile {
  const lines = text.split(/\r?\n/).filter((line) => line.trim().length > 0);
  if (lines.length === 0) throw new TraceFormatError("empty trace file");

  const objects = lines.map((line, i) => {
    let parsed: unknown;
    try {
      parsed = JSON.parse(line);
    } catch (exc) {
      throw new TraceFormatError(`line ${i + 1}: invalid JSON: ${(exc as Error).message}`);
    }
    if (typeof parsed !== "object" || parsed === null || Array.isArray(parsed)) {
      throw new TraceFormatError(`line ${i + 1}: expected a JSON object`);
    }
    return parsed as Record<string, unknown>;
  });

  let header: TraceHeader | null = null;
  let start = 0;
  if (!("t" in objects[0]!)) {
    const unknown = Object.keys(objects[0]!)
      .filter((key) => !["user", "symbol", "session"].includes(key));
    if (unknown.length > 0) {
      throw new TraceFormatError(
        `line 1: unknown header fields ${JSON.stringify(unknown.sort())}`);
    }
    header = {
      user: (objects[0]!.user ?? null) as string | null,
      symbol: (objects[0]!.symbol ?? null) as string | null,
      session: (objects[0]!.session ?? null) as string | null,
    };
    start = 1;
  }

  const events = objects.slice(start).map((obj, i) => parseEvent(obj, start + i + 1));
  validateEvents(events);
  return { header, events };
}
