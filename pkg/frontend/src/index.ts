export { CsvSchemaError, EXPECTED_HEADER, parseSweepCsv } from "./csv.js";
export type { SweepRow } from "./csv.js";
export { buildSweepFigure } from "./figure.js";
export type { FigureOptions } from "./figure.js";
export { renderFigures } from "./cli.js";
