#!/usr/bin/env node
/**
 * render_figs <aggregates.csv> <outdir> [--logy]
 *
 * Reads the harness's figure-data CSV and writes sweep.svg plus a
 * rasterized sweep.png into <outdir>.
 */

import { mkdir, readFile, writeFile } from "node:fs/promises";
import path from "node:path";
import sharp from "sharp";

import { CsvSchemaError, parseSweepCsv } from "./csv.js";
import { buildSweepFigure } from "./figure.js";

export async function renderFigures(
  csvPath: string,
  outDir: string,
  logy: boolean
): Promise<string[]> {
  const text = await readFile(csvPath, "utf-8");
  const rows = parseSweepCsv(text);
  const svg = buildSweepFigure(rows, { logy });
  await mkdir(outDir, { recursive: true });
  const svgPath = path.join(outDir, "sweep.svg");
  await writeFile(svgPath, svg);
  const pngPath = path.join(outDir, "sweep.png");
  await sharp(Buffer.from(svg), { density: 144 }).png().toFile(pngPath);
  return [svgPath, pngPath];
}

async function main(): Promise<number> {
  const args = process.argv.slice(2);
  const logy = args.includes("--logy");
  const positional = args.filter((a) => !a.startsWith("--"));
  const unknown = args.filter((a) => a.startsWith("--") && a !== "--logy");
  if (unknown.length > 0 || positional.length !== 2) {
    console.error("usage: render_figs <aggregates.csv> <outdir> [--logy]");
    return 1;
  }
  const [csvPath, outDir] = positional;
  try {
    const written = await renderFigures(csvPath, outDir, logy);
    for (const file of written) console.log(`wrote ${file}`);
    return 0;
  } catch (err) {
    if (err instanceof CsvSchemaError) {
      console.error(`schema error in ${csvPath}: ${err.message}`);
      return 2;
    }
    console.error(`error: ${err instanceof Error ? err.message : err}`);
    return 1;
  }
}

main().then((code) => {
  process.exitCode = code;
});
