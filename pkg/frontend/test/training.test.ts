import { describe, expect, it } from "vitest";

import { TraceFormatError } from "../src/schema.js";
import {
  TrainingGame, type TrainingSetup, respondAdvances, responseSum,
} from "../src/training.js";
import { syntheticRenderingText } from "./helpers.js";

const WORDS = ["xman", "bmwz", "quak", "hurt", "fogy"];
const SECRET = [0, 7, 13, 21, 34];

function setup(overrides: Partial<TrainingSetup> = {}): TrainingSetup {
  return {
    params: { d: 5, k: 5, l: 24, n: 60, gamma: 2, t: 10 },
    symbols: WORDS,
    secret: SECRET,
    seed: 7,
    ...overrides,
  };
}

function playThrough(game: TrainingGame, secret: number[]) {
  const log: Array<{ kind: string; step: number; size?: number }> = [];
  for (;;) {
    const prompt = game.current();
    if (prompt.kind === "done") return { log, record: prompt.record };
    if (prompt.kind === "tap") {
      log.push({ kind: "tap", step: prompt.step, size: prompt.objects.length });
      const pass = prompt.objects.filter((object) => secret.includes(object));
      expect(game.submitTap(pass)).toBe(true);
    } else if (prompt.kind === "write") {
      log.push({ kind: "write", step: prompt.step });
      game.submitWriting(syntheticRenderingText(prompt.symbol, prompt.value));
    } else {
      log.push({ kind: "respond", step: prompt.step });
      const sum = responseSum(secret, prompt.challenge, 5);
      expect(game.submitResponse(sum ?? 0)).toBe(true);
    }
  }
}

describe("weighted-sum helper", () => {
  it("sums pass-object weights mod d", () => {
    expect(responseSum([0, 2], { a: [0, 1, 2], w: [3, 4, 4] }, 5)).toBe(2);
  });

  it("returns null when the window misses the secret entirely", () => {
    expect(responseSum([9], { a: [0, 1, 2], w: [3, 4, 4] }, 5)).toBeNull();
  });

  it("advance rule: exact button on overlap, any button otherwise", () => {
    const challenge = { a: [0, 1], w: [2, 3] };
    expect(respondAdvances([0], challenge, 5, 2)).toBe(true);
    expect(respondAdvances([0], challenge, 5, 3)).toBe(false);
    expect(respondAdvances([9], challenge, 5, 4)).toBe(true);
  });
});

describe("full drill sequence", () => {
  const game = new TrainingGame(setup());
  const { log, record } = playThrough(game, SECRET);

  it("runs the five stages in order", () => {
    const stages = log.map((entry) => entry.step);
    expect([...new Set(stages)]).toEqual([1, 2, 3, 4, 5]);
    expect(stages).toEqual([...stages].sort((a, b) => a - b));
  });

  it("grows counted tap sets from 5 to 25", () => {
    const sizes = log.filter((e) => e.kind === "tap" && e.step === 1)
      .map((e) => e.size);
    expect(sizes).toEqual([5, 10, 15, 20, 25]);
  });

  it("grows uncounted tap sets from 5 to 30", () => {
    const sizes = log.filter((e) => e.kind === "tap" && e.step === 3)
      .map((e) => e.size);
    expect(sizes).toEqual([5, 10, 15, 20, 25, 30]);
  });

  it("quizzes one writing per symbol, then two more", () => {
    expect(log.filter((e) => e.kind === "write" && e.step === 2)).toHaveLength(5);
    expect(log.filter((e) => e.kind === "write" && e.step === 5)).toHaveLength(10);
  });

  it("poses full weighted challenges", () => {
    expect(log.filter((e) => e.kind === "respond")).toHaveLength(5);
  });

  it("collects three renderings per symbol toward registration", () => {
    expect(record.skipped).toBe(false);
    expect(record.stepsCompleted).toEqual([1, 2, 3, 4, 5]);
    expect(record.tracesPerSymbol).toEqual(
      Object.fromEntries(WORDS.map((word) => [word, 3])));
    const collected = game.collectedTraces();
    expect(collected.get("quak")).toHaveLength(3);
  });
});

describe("drill prompts", () => {
  it("counted taps show the pass count, uncounted taps hide it", () => {
    const game = new TrainingGame(setup());
    const first = game.current();
    if (first.kind !== "tap") throw new Error("expected a tap prompt");
    expect(first.showCount).toBe(true);
    const shownPass = first.objects.filter((o) => SECRET.includes(o));
    expect(first.passCount).toBe(shownPass.length);
    expect(first.passCount).toBeGreaterThanOrEqual(1);
  });

  it("a wrong tap keeps the prompt; the right set advances", () => {
    const game = new TrainingGame(setup());
    const before = game.current();
    if (before.kind !== "tap") throw new Error("expected a tap prompt");
    expect(game.submitTap([])).toBe(false);
    expect(game.current()).toEqual(before);
    const pass = before.objects.filter((o) => SECRET.includes(o));
    expect(game.submitTap(pass)).toBe(true);
    expect(game.current()).not.toEqual(before);
  });

  it("button answers advance only on the weighted sum", () => {
    const game = new TrainingGame(setup());
    // fast-forward to the respond stage
    for (;;) {
      const prompt = game.current();
      if (prompt.kind === "respond") break;
      if (prompt.kind === "tap") {
        game.submitTap(prompt.objects.filter((o) => SECRET.includes(o)));
      } else if (prompt.kind === "write") {
        game.submitWriting(syntheticRenderingText(prompt.symbol, prompt.value));
      } else {
        throw new Error("drills ended before the respond stage");
      }
    }
    const prompt = game.current();
    if (prompt.kind !== "respond") throw new Error("expected a respond prompt");
    expect(prompt.challenge.a).toHaveLength(24);
    expect(prompt.challenge.w.every((w) => w >= 0 && w < 5)).toBe(true);
    const sum = responseSum(SECRET, prompt.challenge, 5);
    if (sum !== null) {
      expect(game.submitResponse((sum + 1) % 5)).toBe(false);
      expect(game.current()).toEqual(prompt);
      expect(game.submitResponse(sum)).toBe(true);
    }
  });

  it("a malformed writing neither counts nor advances", () => {
    const game = new TrainingGame(setup({ skipDrills: true }));
    const prompt = game.current();
    if (prompt.kind !== "write") throw new Error("expected a write prompt");
    expect(() => game.submitWriting("not a trace")).toThrow(TraceFormatError);
    expect(game.current()).toEqual(prompt);
    expect(game.skip().tracesPerSymbol[prompt.symbol]).toBe(0);
  });

  it("write prompts carry a hint, custom when provided", () => {
    const hinted = new TrainingGame(setup({
      skipDrills: true, hints: { xman: "zero rhymes with hero" },
    }));
    const prompt = hinted.current();
    if (prompt.kind !== "write") throw new Error("expected a write prompt");
    expect(prompt.symbol).toBe("xman");
    expect(prompt.hint).toBe("zero rhymes with hero");
  });
});

describe("skipping and the no-drill regime", () => {
  it("skip() is always allowed and keeps partial progress", () => {
    const game = new TrainingGame(setup());
    const first = game.current();
    if (first.kind !== "tap") throw new Error("expected a tap prompt");
    game.submitTap(first.objects.filter((o) => SECRET.includes(o)));
    const record = game.skip();
    expect(record.skipped).toBe(true);
    expect(game.current().kind).toBe("done");
  });

  it("the no-drill regime collects three renderings per symbol", () => {
    const game = new TrainingGame(setup({ skipDrills: true }));
    const { log, record } = playThrough(game, SECRET);
    expect(log.every((entry) => entry.kind === "write")).toBe(true);
    expect(log).toHaveLength(15);
    expect(record.skipped).toBe(true);
    expect(record.stepsCompleted).toEqual([]);
    expect(record.tracesPerSymbol).toEqual(
      Object.fromEntries(WORDS.map((word) => [word, 3])));
  });
});

describe("setup validation", () => {
  it("rejects symbol and secret lists of the wrong size", () => {
    expect(() => new TrainingGame(setup({ symbols: WORDS.slice(0, 3) })))
      .toThrow("symbols");
    expect(() => new TrainingGame(setup({ secret: [1, 2] })))
      .toThrow("secret");
  });
});
