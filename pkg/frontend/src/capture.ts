/** Pointer capture for symbol renderings.
 *
 * The buffer records every sampled pointer event at full fidelity; the
 * on-screen feedback is a dotted trail drawn from every TRAIL_STRIDE-th
 * point only, so a bystander sees a sparse hint of the stroke while the
 * verifier receives the complete series.
 */

import {
  type Action, type TraceEvent, type TraceFile, type TraceHeader,
  serializeTrace, validateEvents,
} from "./schema.js";

export const TRAIL_STRIDE = 5;

export class EmptyStrokeError extends Error {}

export interface PointerSample {
  /** Absolute timestamp in ms (performance.now() scale). */
  timeStamp: number;
  x: number;
  y: number;
  /** Pointer-event pressure when the platform reports one. */
  pressure?: number;
}

export interface TrailPoint {
  x: number;
  y: number;
}

function pressureOf(sample: PointerSample): number | null {
  if (sample.pressure === undefined) return null;
  return Math.min(1, Math.max(0, sample.pressure));
}

export class CaptureBuffer {
  private events: TraceEvent[] = [];
  private origin: number | null = null;
  private drawing = false;
  private completedStrokes = 0;

  get size(): number {
    return this.events.length;
  }

  get strokes(): number {
    return this.completedStrokes;
  }

  /** True until at least one full down..up stroke has been captured. */
  get isEmpty(): boolean {
    return this.completedStrokes === 0;
  }

  private push(sample: PointerSample, action: Action): void {
    this.origin ??= sample.timeStamp;
    let t = sample.timeStamp - this.origin;
    const last = this.events[this.events.length - 1];
    // Timestamps must never go backwards; clamp clock jitter to the last t.
    if (last !== undefined && t < last.t) t = last.t;
    this.events.push({
      t, x: sample.x, y: sample.y,
      p: pressureOf(sample), s: null, a: action, m: null,
    });
  }

  begin(sample: PointerSample): void {
    if (this.drawing) return; // stray second pointer; keep the first stroke
    this.drawing = true;
    this.push(sample, "down");
  }

  move(sample: PointerSample): void {
    if (!this.drawing) return; // hover events carry no stroke information
    this.push(sample, "move");
  }

  end(sample: PointerSample): void {
    if (!this.drawing) return;
    this.push(sample, "up");
    this.drawing = false;
    this.completedStrokes += 1;
  }

  /** Every stride-th recorded point, for the dotted on-screen trail. */
  trail(stride: number = TRAIL_STRIDE): TrailPoint[] {
    return this.events
      .filter((_, i) => i % stride === 0)
      .map((event) => ({ x: event.x, y: event.y }));
  }

  toTrace(header: TraceHeader | null = null): TraceFile {
    if (this.isEmpty) {
      throw new EmptyStrokeError("nothing drawn yet; draw the symbol and retry");
    }
    // An unfinished trailing stroke is dropped; completed strokes stand alone.
    const events = this.drawing
      ? this.events.slice(0, this.lastUpIndex() + 1)
      : this.events.slice();
    validateEvents(events);
    return { header, events };
  }

  serialize(header: TraceHeader | null = null): string {
    return serializeTrace(this.toTrace(header));
  }

  clear(): void {
    this.events = [];
    this.origin = null;
    this.drawing = false;
    this.completedStrokes = 0;
  }

  private lastUpIndex(): number {
    for (let i = this.events.length - 1; i >= 0; i--) {
      if (this.events[i]!.a === "up") return i;
    }
    return -1;
  }
}
