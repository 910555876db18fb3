/** Minimal CSV reader for the report/sweep contract (no quoting needed). */

export interface CsvTable {
  header: string[];
  rows: string[][];
}

export function parseCsv(text: string): CsvTable {
  const lines = text.split(/\r?\n/).filter((line) => line.length > 0);
  if (lines.length === 0) {
    return { header: [], rows: [] };
  }
  const header = lines[0].split(",");
  const rows = lines.slice(1).map((line) => line.split(","));
  return { header, rows };
}

/** Column lookup that names the missing column in its failure. */
export function columnIndex(table: CsvTable, name: string, source: string): number {
  const idx = table.header.indexOf(name);
  if (idx < 0) {
    throw new SchemaMismatchError(`${source}: missing column '${name}' (header: ${table.header.join(",")})`);
  }
  return idx;
}

export class SchemaMismatchError extends Error {}
