// fmt12 must reproduce the engine's canonical float strings exactly: every
// vector pair below was emitted by the server-side serializer.

import { describe, expect, it } from "vitest";
import { readFileSync } from "node:fs";
import { fileURLToPath } from "node:url";
import { dirname, join } from "node:path";

import { fmt12 } from "../src/format.js";

const here = dirname(fileURLToPath(import.meta.url));
const vectors: { v: number; s: string }[] = JSON.parse(
  readFileSync(join(here, "fixtures", "fmt12_vectors.json"), "utf-8"),
);

describe("fmt12", () => {
  it("matches the engine serializer on every frozen vector", () => {
    expect(vectors.length).toBeGreaterThan(500);
    for (const { v, s } of vectors) {
      expect(fmt12(v), `value ${v}`).toBe(s);
    }
  });

  it("handles structural cases", () => {
    expect(fmt12(0)).toBe("0");
    expect(fmt12(-0)).toBe("0");
    expect(fmt12(1)).toBe("1");
    expect(fmt12(1.5)).toBe("1.5");
    expect(fmt12(1e12)).toBe("1e+12");
    expect(fmt12(999999999999)).toBe("999999999999");
    expect(fmt12(1e-5)).toBe("1e-05");
    expect(fmt12(0.0001)).toBe("0.0001");
    expect(fmt12(-2 / 3)).toBe("-0.666666666667");
    expect(fmt12(Infinity)).toBe("null");
  });
});
