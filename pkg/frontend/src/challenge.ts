/** Pure screen model for one authentication round: the object grid with
 * weights, and the legend mapping response values to symbols. The DOM layer
 * renders this model; tests exercise the model directly.
 */

export interface SchemeParams {
  d: number;
  k: number;
  l: number;
  n: number;
  gamma: number;
  t: number;
}

export interface ServiceConfig {
  params: SchemeParams;
  symbols: string[];
  /** The n object identifiers; strings double as display labels. */
  pool: Array<number | string>;
}

export interface Challenge {
  a: number[];
  w: number[];
}

/** index (as a string) -> image path; the asset pack is configuration. */
export type AssetManifest = Record<string, string>;

export interface GridCell {
  index: number;
  weight: number;
  image: string | null;
  /** Shown when no image asset exists for the object. */
  glyph: string;
}

export interface LegendEntry {
  value: number;
  symbol: string;
}

export interface ChallengeScreen {
  cells: GridCell[];
  legend: LegendEntry[];
}

export class ChallengeShapeError extends Error {}

const FALLBACK_GLYPHS = [
  "■", "▲", "●", "◆", "★", "♥", "♠",
  "♣", "♦", "☺", "♫", "☂", "✈", "⚓",
  "☀", "☾", "❄", "⚡", "⚽", "☕",
];

/** Deterministic stand-in when an image asset is missing. */
export function placeholderGlyph(index: number): string {
  return FALLBACK_GLYPHS[index % FALLBACK_GLYPHS.length]!;
}

export function parseChallenge(payload: unknown): Challenge {
  const obj = payload as { a?: unknown; w?: unknown };
  if (!Array.isArray(obj?.a) || !Array.isArray(obj?.w)) {
    throw new ChallengeShapeError("challenge must carry arrays a and w");
  }
  if (obj.a.length !== obj.w.length) {
    throw new ChallengeShapeError(
      `challenge has ${obj.a.length} objects but ${obj.w.length} weights`);
  }
  const a = obj.a.map((v) => Number(v));
  const w = obj.w.map((v) => Number(v));
  if (![...a, ...w].every((v) => Number.isInteger(v) && v >= 0)) {
    throw new ChallengeShapeError("challenge entries must be non-negative integers");
  }
  return { a, w };
}

export function renderChallenge(
  config: ServiceConfig,
  challenge: Challenge,
  manifest: AssetManifest = {},
): ChallengeScreen {
  const { d, l, n } = config.params;
  if (challenge.a.length !== l) {
    throw new ChallengeShapeError(
      `challenge shows ${challenge.a.length} objects, config says l=${l}`);
  }
  if (config.symbols.length !== d) {
    throw new ChallengeShapeError(
      `config lists ${config.symbols.length} symbols for d=${d}`);
  }
  const cells = challenge.a.map((index, i) => {
    const weight = challenge.w[i]!;
    if (index < 0 || index >= n) {
      throw new ChallengeShapeError(`object index ${index} outside pool of ${n}`);
    }
    if (weight < 0 || weight >= d) {
      throw new ChallengeShapeError(`weight ${weight} outside Z_${d}`);
    }
    return {
      index,
      weight,
      image: manifest[String(index)] ?? null,
      glyph: placeholderGlyph(index),
    };
  });
  const legend = config.symbols.map((symbol, value) => ({ value, symbol }));
  return { cells, legend };
}
