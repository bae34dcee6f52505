/** Parsing for the simulator's result CSV schema. */

export interface ResultRow {
  scheme: string;
  group: number;
  user: string;
  snr_db: number;
  chi: number;
  xi: number;
  csi_error: number;
  metric: string;
  source: string;
  value: number;
  std_error: number;
  trials: number;
  seed: number;
}

export const CSV_COLUMNS = [
  'scheme', 'group', 'user', 'snr_db', 'chi', 'xi', 'csi_error',
  'metric', 'source', 'value', 'std_error', 'trials', 'seed',
] as const;

const NUMERIC: ReadonlySet<string> = new Set([
  'group', 'snr_db', 'chi', 'xi', 'csi_error', 'value', 'std_error', 'trials', 'seed',
]);

export class SchemaError extends Error {}

/** Parse CSV text; '#' lines are config-echo comments. Throws SchemaError
 *  naming the first missing column when the header does not match. */
export function parseResultCsv(text: string): ResultRow[] {
  const lines = text.split('\n').filter((l) => l.length > 0 && !l.startsWith('#'));
  if (lines.length === 0) {
    throw new SchemaError('empty CSV: no header line found');
  }
  const header = lines[0].split(',');
  for (const col of CSV_COLUMNS) {
    if (!header.includes(col)) {
      throw new SchemaError(`missing column '${col}' in CSV header`);
    }
  }
  const idx = new Map(header.map((h, i) => [h, i]));
  const rows: ResultRow[] = [];
  for (const line of lines.slice(1)) {
    const parts = line.split(',');
    if (parts.length !== header.length) {
      throw new SchemaError(`malformed row: expected ${header.length} fields, got ${parts.length}`);
    }
    const row: Record<string, string | number> = {};
    for (const col of CSV_COLUMNS) {
      const raw = parts[idx.get(col)!];
      if (NUMERIC.has(col)) {
        const v = Number(raw);
        if (!Number.isFinite(v)) {
          throw new SchemaError(`column '${col}': not a finite number (${raw})`);
        }
        row[col] = v;
      } else {
        row[col] = raw;
      }
    }
    rows.push(row as unknown as ResultRow);
  }
  if (rows.length === 0) {
    throw new SchemaError('empty CSV: header only, no data rows');
  }
  return rows;
}
