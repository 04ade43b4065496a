import { describe, expect, it } from "vitest";

import { normalizeWord, stem, tokenize } from "../src/stem";

// Frozen parity vectors: identical outputs to the Python pipeline so term
// keys match sentence words the same way on both sides.
const PARITY: Array<[string, string]> = [
  ["equities", "equiti"],
  ["equity", "equiti"],
  ["bonds", "bond"],
  ["covered", "cover"],
  ["futures", "futur"],
  ["future", "futur"],
  ["swaps", "swap"],
  ["options", "option"],
  ["currencies", "currenc"],
  ["securities", "secur"],
  ["debenture", "debentur"],
  ["convertible", "convert"],
  ["generalization", "gener"],
  ["pricing", "price"],
  ["caresses", "caress"],
  ["ponies", "poni"],
  ["relational", "relat"],
  ["happy", "happi"],
  ["cds", "cd"],
];

describe("stem", () => {
  it.each(PARITY)("stem(%s) == %s", (word, expected) => {
    expect(stem(word)).toBe(expected);
  });

  it("is idempotent on the parity vocabulary", () => {
    for (const [word] of PARITY) {
      expect(stem(stem(word))).toBe(stem(word));
    }
  });

  it("leaves short or non-alphabetic tokens unchanged", () => {
    for (const token of ["ab", "x", "2023", "cds1", ""]) {
      expect(stem(token)).toBe(token);
    }
  });
});

describe("tokenize", () => {
  it("splits on punctuation and whitespace", () => {
    expect(tokenize("Convertible Bonds, 2023")).toEqual(["Convertible", "Bonds", "2023"]);
    expect(tokenize("credit-default swap")).toEqual(["credit", "default", "swap"]);
    expect(tokenize("")).toEqual([]);
  });
});

describe("normalizeWord", () => {
  it("lower-cases then stems", () => {
    expect(normalizeWord("Bonds")).toBe("bond");
    expect(normalizeWord("Covered")).toBe("cover");
  });
});
