import { readFileSync, readdirSync } from "node:fs";
import { describe, expect, it } from "vitest";
import { SpecError, validateSpec } from "../src/spec.js";

const SPEC_DIR = new URL("../specs/", import.meta.url);

describe("validateSpec", () => {
  it("accepts every bundled figure spec", () => {
    const files = readdirSync(SPEC_DIR).filter((f) => f.endsWith(".json"));
    expect(files.length).toBe(7);
    for (const file of files) {
      const raw = JSON.parse(readFileSync(new URL(file, SPEC_DIR), "utf-8"));
      const spec = validateSpec(raw);
      expect(spec.panels.length).toBeGreaterThan(0);
      expect(spec.x).toBe("t");
    }
  });

  it("rejects panels with both column forms", () => {
    expect(() =>
      validateSpec({
        x: "t",
        panels: [{ column: "a", columns: ["b"] }],
      }),
    ).toThrow(SpecError);
  });

  it("rejects missing x", () => {
    expect(() => validateSpec({ panels: [{ column: "a" }] })).toThrow(
      /'x' column/,
    );
  });

  it("rejects unknown keys", () => {
    expect(() =>
      validateSpec({ x: "t", panels: [{ column: "a" }], colour: "red" }),
    ).toThrow(/unknown figure-spec key/);
  });

  it("rejects non-numeric hlines", () => {
    expect(() =>
      validateSpec({ x: "t", panels: [{ column: "a" }], hlines: [{ y: "b" }] }),
    ).toThrow(/finite numeric/);
  });
});
