import { readFileSync, readdirSync } from "node:fs";
import { join } from "node:path";

import { describe, expect, it } from "vitest";

/** The client must never re-derive scores: every composite, delta, and
 * flag on screen is a server response. These checks keep the scaling
 * formula (and the rubric's anchor texts) out of the client sources. */

const SRC_DIR = join(__dirname, "..", "src");

const FORBIDDEN_PATTERNS: [string, RegExp][] = [
  ["hundred-over-thirty scaling", /100\s*\/\s*30/],
  ["division by the 30-point raw range", /\/\s*30(?![0-9])/],
  ["repeating-third constants", /3\.3{2,}/],
  ["level-sum scaling", /(raw_?sum|levelSum|sumLevels)\s*\*\s*100/i],
  ["score rounding", /Math\.round\s*\(/],
  ["embedded anchor text", /No other known IU can compare/],
  ["embedded anchor text", /minimal economic impact/],
];

describe("client performs no rubric arithmetic", () => {
  const files = readdirSync(SRC_DIR).filter((name) => name.endsWith(".ts"));

  it("scans every client source file", () => {
    expect(files.length).toBeGreaterThanOrEqual(6);
  });

  for (const file of files) {
    it(`${file} contains no scaling arithmetic or hardcoded anchors`, () => {
      const source = readFileSync(join(SRC_DIR, file), "utf-8");
      for (const [label, pattern] of FORBIDDEN_PATTERNS) {
        expect(pattern.test(source), `${file}: found ${label} (${pattern})`).toBe(false);
      }
    });
  }
});
