/** Enrollment training game.
 *
 * Five drill stages teach the secret and collect handwriting samples:
 *   1. tap your pass-objects in a growing set, pass-count displayed;
 *   2. hint quiz: write the symbol for each response value once;
 *   3. tap again without the count shown, sets growing further;
 *   4. full weighted challenges answered with value buttons;
 *   5. harder quiz: two more writings per symbol.
 * The writings count toward the registration renderings. The whole game is
 * skippable, and a no-drill regime collects a fixed number of renderings
 * per symbol directly.
 */

import { type Challenge, type SchemeParams } from "./challenge.js";
import { parseTrace } from "./schema.js";

const TAP_SIZES_WITH_COUNT = [5, 10, 15, 20, 25];
const TAP_SIZES_NO_COUNT = [5, 10, 15, 20, 25, 30];
const RESPOND_ROUNDS = 5;
const DEFAULT_WRITINGS_WHEN_SKIPPED = 3;

/** Weighted sum of pass-object weights mod d; null when the window shows
 * no pass-object (any response is acceptable then). */
export function responseSum(secret: number[], challenge: Challenge,
                            d: number): number | null {
  const pass = new Set(secret);
  let sum = 0;
  let overlap = false;
  challenge.a.forEach((object, i) => {
    if (pass.has(object)) {
      overlap = true;
      sum = (sum + challenge.w[i]!) % d;
    }
  });
  return overlap ? sum : null;
}

export function respondAdvances(secret: number[], challenge: Challenge,
                                d: number, pressed: number): boolean {
  const sum = responseSum(secret, challenge, d);
  return sum === null || sum === pressed;
}

export interface TrainingSetup {
  params: SchemeParams;
  symbols: string[];
  secret: number[];
  hints?: Record<string, string>;
  seed?: number;
  /** No-drill regime: collect renderings only. */
  skipDrills?: boolean;
  writingsWhenSkipped?: number;
}

export interface TapPrompt {
  kind: "tap";
  step: 1 | 3;
  objects: number[];
  showCount: boolean;
  passCount: number | null;
}

export interface WritePrompt {
  kind: "write";
  step: 2 | 5;
  value: number;
  symbol: string;
  hint: string;
}

export interface RespondPrompt {
  kind: "respond";
  step: 4;
  challenge: Challenge;
}

export interface DonePrompt {
  kind: "done";
  record: CompletionRecord;
}

export type Prompt = TapPrompt | WritePrompt | RespondPrompt | DonePrompt;

export interface CompletionRecord {
  skipped: boolean;
  stepsCompleted: number[];
  tracesPerSymbol: Record<string, number>;
  attempts: number;
}

/** Small deterministic PRNG so drills replay under a fixed seed. */
function mulberry32(seed: number): () => number {
  let state = seed >>> 0;
  return () => {
    state = (state + 0x6d2b79f5) >>> 0;
    let z = state;
    z = Math.imul(z ^ (z >>> 15), z | 1);
    z ^= z + Math.imul(z ^ (z >>> 7), z | 61);
    return ((z ^ (z >>> 14)) >>> 0) / 4294967296;
  };
}

function sampleWithout(rng: () => number, pool: number[], count: number): number[] {
  const copy = pool.slice();
  for (let i = copy.length - 1; i > 0; i--) {
    const j = Math.floor(rng() * (i + 1));
    [copy[i], copy[j]] = [copy[j]!, copy[i]!];
  }
  return copy.slice(0, count);
}

type PlanItem = Exclude<Prompt, DonePrompt>;

export class TrainingGame {
  private readonly plan: PlanItem[];
  private cursor = 0;
  private attempts = 0;
  private skipped = false;
  private readonly stepsDone = new Set<number>();
  private readonly traces = new Map<string, string[]>();

  constructor(private readonly setup: TrainingSetup) {
    const { params, symbols, secret } = setup;
    if (symbols.length !== params.d) {
      throw new Error(`need ${params.d} symbols, got ${symbols.length}`);
    }
    if (secret.length !== params.k) {
      throw new Error(`secret must list ${params.k} objects, got ${secret.length}`);
    }
    for (const symbol of symbols) this.traces.set(symbol, []);
    const rng = mulberry32(setup.seed ?? 1);
    this.plan = setup.skipDrills
      ? this.writingPlan(setup.writingsWhenSkipped ?? DEFAULT_WRITINGS_WHEN_SKIPPED)
      : [
          ...TAP_SIZES_WITH_COUNT.map((size) => this.tapItem(rng, size, 1 as const)),
          ...this.writeItems(2 as const, 1),
          ...TAP_SIZES_NO_COUNT.map((size) => this.tapItem(rng, size, 3 as const)),
          ...Array.from({ length: RESPOND_ROUNDS },
                        () => this.respondItem(rng)),
          ...this.writeItems(5 as const, 2),
        ];
  }

  private tapItem(rng: () => number, requestedSize: number, step: 1 | 3): TapPrompt {
    const { n, k } = this.setup.params;
    const size = Math.min(requestedSize, n);
    const decoyPool = [...Array(n).keys()]
      .filter((object) => !this.setup.secret.includes(object));
    // At least one pass-object on screen, and never more decoys than exist.
    const minPass = Math.max(1, size - decoyPool.length);
    const maxPass = Math.min(k, size);
    const passCount = minPass + Math.floor(rng() * (maxPass - minPass + 1));
    const objects = [
      ...sampleWithout(rng, this.setup.secret, passCount),
      ...sampleWithout(rng, decoyPool, size - passCount),
    ];
    const shuffled = sampleWithout(rng, objects, objects.length);
    return {
      kind: "tap", step, objects: shuffled,
      showCount: step === 1,
      passCount: step === 1 ? passCount : null,
    };
  }

  private writeItems(step: 2 | 5, repeats: number): WritePrompt[] {
    const items: WritePrompt[] = [];
    for (let round = 0; round < repeats; round++) {
      this.setup.symbols.forEach((symbol, value) => {
        items.push({
          kind: "write", step, value, symbol,
          hint: this.setup.hints?.[symbol] ?? `${value} goes with "${symbol}"`,
        });
      });
    }
    return items;
  }

  private writingPlan(repeats: number): PlanItem[] {
    return this.writeItems(2, repeats);
  }

  private respondItem(rng: () => number): RespondPrompt {
    const { n, l, d } = this.setup.params;
    const a = sampleWithout(rng, [...Array(n).keys()], l);
    const w = a.map(() => Math.floor(rng() * d));
    return { kind: "respond", step: 4, challenge: { a, w } };
  }

  current(): Prompt {
    if (this.skipped || this.cursor >= this.plan.length) {
      return { kind: "done", record: this.completion() };
    }
    return this.plan[this.cursor]!;
  }

  private expect<K extends PlanItem["kind"]>(kind: K): Extract<PlanItem, { kind: K }> {
    const prompt = this.current();
    if (prompt.kind !== kind) {
      throw new Error(`expected a ${prompt.kind} answer, got ${kind}`);
    }
    return prompt as Extract<PlanItem, { kind: K }>;
  }

  private advance(step: number): void {
    this.cursor += 1;
    const remaining = this.plan
      .slice(this.cursor)
      .some((item) => item.step === step);
    if (!remaining && !this.setup.skipDrills) this.stepsDone.add(step);
  }

  /** Tap drill answer: the selected objects must be exactly the shown
   * pass-objects. Returns whether the drill advances. */
  submitTap(selected: number[]): boolean {
    const prompt = this.expect("tap");
    this.attempts += 1;
    const pass = new Set(this.setup.secret);
    const want = prompt.objects.filter((object) => pass.has(object)).sort();
    const got = [...new Set(selected)].sort();
    const correct = want.length === got.length &&
      want.every((object, i) => object === got[i]);
    if (correct) this.advance(prompt.step);
    return correct;
  }

  /** A hint-quiz writing; the trace must parse or it does not count. */
  submitWriting(traceText: string): void {
    const prompt = this.expect("write");
    parseTrace(traceText);
    this.attempts += 1;
    this.traces.get(prompt.symbol)!.push(traceText);
    this.advance(prompt.step);
  }

  /** Value-button answer to a weighted challenge. */
  submitResponse(pressed: number): boolean {
    const prompt = this.expect("respond");
    this.attempts += 1;
    const correct = respondAdvances(this.setup.secret, prompt.challenge,
                                    this.setup.params.d, pressed);
    if (correct) this.advance(prompt.step);
    return correct;
  }

  /** The game is optional; skipping keeps whatever was collected. */
  skip(): CompletionRecord {
    this.skipped = true;
    return this.completion();
  }

  collectedTraces(): Map<string, string[]> {
    return new Map([...this.traces].map(([symbol, texts]) => [symbol, texts.slice()]));
  }

  private completion(): CompletionRecord {
    const tracesPerSymbol: Record<string, number> = {};
    for (const [symbol, texts] of this.traces) {
      tracesPerSymbol[symbol] = texts.length;
    }
    return {
      skipped: this.skipped || this.setup.skipDrills === true,
      stepsCompleted: [...this.stepsDone].sort((a, b) => a - b),
      tracesPerSymbol,
      attempts: this.attempts,
    };
  }
}
