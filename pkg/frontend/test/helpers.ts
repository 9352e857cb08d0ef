import { type TraceEvent, type TraceFile, serializeTrace } from "../src/schema.js";

export function lineEvents(points: Array<[number, number, number]>,
                           pressure: number | null = null): TraceEvent[] {
  return points.map(([t, x, y], i) => ({
    t, x, y, p: pressure, s: null,
    a: i === 0 ? "down" : i === points.length - 1 ? "up" : "move",
    m: null,
  }));
}

/** Deterministic zig-zag rendering; distinct per symbol index. */
export function syntheticRendering(symbol: string, symbolIndex: number,
                                   user: string | null = null): TraceFile {
  const points: Array<[number, number, number]> = [];
  for (let i = 0; i < 24; i++) {
    points.push([
      i * 16,
      20 + i * 6 + 10 * symbolIndex,
      40 + 30 * Math.sin(i / (2 + symbolIndex)),
    ]);
  }
  return {
    header: { user, symbol, session: null },
    events: lineEvents(points, 0.5),
  };
}

export function syntheticRenderingText(symbol: string, symbolIndex: number,
                                       user: string | null = null): string {
  return serializeTrace(syntheticRendering(symbol, symbolIndex, user));
}
