/**
 * Parser for the harness's figure-data CSV: `algorithm,K,mean,ci95`.
 */

export interface SweepRow {
  algorithm: string;
  k: number;
  mean: number;
  ci95: number;
}

export const EXPECTED_HEADER = ["algorithm", "K", "mean", "ci95"];

export class CsvSchemaError extends Error {}

export function parseSweepCsv(text: string): SweepRow[] {
  const lines = text
    .split(/\r?\n/)
    .map((line) => line.trim())
    .filter((line) => line.length > 0 && !line.startsWith("#"));
  if (lines.length === 0) {
    throw new CsvSchemaError("CSV is empty");
  }
  const header = lines[0].split(",").map((c) => c.trim());
  if (
    header.length !== EXPECTED_HEADER.length ||
    header.some((c, i) => c !== EXPECTED_HEADER[i])
  ) {
    throw new CsvSchemaError(
      `unexpected columns [${header.join(", ")}]; ` +
        `expected [${EXPECTED_HEADER.join(", ")}]`
    );
  }
  if (lines.length === 1) {
    throw new CsvSchemaError("CSV has a header but no data rows");
  }
  return lines.slice(1).map((line, i) => {
    const cells = line.split(",").map((c) => c.trim());
    if (cells.length !== EXPECTED_HEADER.length) {
      throw new CsvSchemaError(
        `row ${i + 2}: got ${cells.length} cells, expected ${EXPECTED_HEADER.length}`
      );
    }
    const [algorithm, kText, meanText, ciText] = cells;
    const k = Number(kText);
    const mean = Number(meanText);
    const ci95 = Number(ciText);
    if (!Number.isInteger(k) || k < 1) {
      throw new CsvSchemaError(`row ${i + 2}: K must be a positive integer, got ${kText}`);
    }
    if (!Number.isFinite(mean) || !Number.isFinite(ci95)) {
      throw new CsvSchemaError(`row ${i + 2}: mean/ci95 must be numbers`);
    }
    return { algorithm, k, mean, ci95 };
  });
}
