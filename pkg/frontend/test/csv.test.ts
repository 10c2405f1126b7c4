import { readFile } from "node:fs/promises";
import path from "node:path";
import { describe, expect, it } from "vitest";

import { CsvSchemaError, parseSweepCsv } from "../src/csv.js";

const FIXTURE = path.join(__dirname, "fixtures", "sweep_aggregates.csv");

describe("parseSweepCsv", () => {
  it("parses the harness fixture", async () => {
    const rows = parseSweepCsv(await readFile(FIXTURE, "utf-8"));
    expect(rows.length).toBeGreaterThan(0);
    const algorithms = new Set(rows.map((r) => r.algorithm));
    expect(algorithms).toContain("classic");
    expect(algorithms).toContain("maximin-u");
    for (const row of rows) {
      expect(row.k).toBeGreaterThanOrEqual(1);
      expect(Number.isFinite(row.mean)).toBe(true);
      expect(row.ci95).toBeGreaterThanOrEqual(0);
    }
  });

  it("rejects an empty file", () => {
    expect(() => parseSweepCsv("")).toThrow(CsvSchemaError);
    expect(() => parseSweepCsv("\n\n")).toThrow(/empty/);
  });

  it("rejects a header-only file", () => {
    expect(() => parseSweepCsv("algorithm,K,mean,ci95\n")).toThrow(/no data rows/);
  });

  it("reports unexpected columns by name", () => {
    expect(() => parseSweepCsv("alg,K,mean,ci\nx,1,0.1,0.01")).toThrow(
      /unexpected columns \[alg, K, mean, ci\]/
    );
  });

  it("rejects malformed numbers", () => {
    expect(() => parseSweepCsv("algorithm,K,mean,ci95\nx,two,0.1,0.01")).toThrow(
      /K must be a positive integer/
    );
    expect(() => parseSweepCsv("algorithm,K,mean,ci95\nx,2,abc,0.01")).toThrow(
      /mean\/ci95/
    );
  });

  it("skips comment lines", () => {
    const rows = parseSweepCsv(
      "algorithm,K,mean,ci95\nclassic,1,0.02,0.001\n# truncated: whatever\n"
    );
    expect(rows).toHaveLength(1);
  });
});
