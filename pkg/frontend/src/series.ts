/** Grouping of result rows into plot series.
 *
 * A series collects the points of one curve: fixed (scheme, user, metric,
 * source) plus any impairment values that are not the x-axis variable.
 * Analytic sources render as lines, Monte Carlo sources as markers.
 */

import { ResultRow } from './csv.js';

export type XAxis = 'snr_db' | 'xi';

export interface Point {
  x: number;
  y: number;
}

export interface Series {
  key: string;
  label: string;
  scheme: string;
  user: string;
  metric: string;
  source: string;
  points: Point[];
}

function curveTag(row: ResultRow, xAxis: XAxis): string {
  const parts: string[] = [];
  if (xAxis !== 'xi' && row.xi !== 0) parts.push(`xi=${row.xi}`);
  if (row.chi !== 0) parts.push(`chi=${row.chi}`);
  if (row.csi_error !== 0) parts.push(`eps=${row.csi_error}`);
  if (xAxis !== 'snr_db') parts.push(`snr=${row.snr_db}`);
  return parts.join(' ');
}

export function groupSeries(
  rows: ResultRow[],
  metrics: string[],
  xAxis: XAxis,
): Series[] {
  const wanted = new Set(metrics);
  const bySeries = new Map<string, Series>();
  for (const row of rows) {
    if (!wanted.has(row.metric)) continue;
    const tag = curveTag(row, xAxis);
    const key = [row.scheme, row.user, row.metric, row.source, tag].join('|');
    let s = bySeries.get(key);
    if (!s) {
      const userPart = row.user === 'sum' ? '' : ` u${row.user}`;
      const metricPart = metrics.length > 1 ? ` ${row.metric.replace('outage_', '')}` : '';
      s = {
        key,
        label: `${row.scheme}${userPart}${metricPart} [${row.source}]${tag ? ' ' + tag : ''}`,
        scheme: row.scheme,
        user: row.user,
        metric: row.metric,
        source: row.source,
        points: [],
      };
      bySeries.set(key, s);
    }
    s.points.push({ x: xAxis === 'xi' ? row.xi : row.snr_db, y: row.value });
  }
  const series = [...bySeries.values()];
  for (const s of series) {
    s.points.sort((a, b) => a.x - b.x);
  }
  series.sort((a, b) => (a.key < b.key ? -1 : a.key > b.key ? 1 : 0));
  return series;
}

/** Distinct (scheme, user, source) combinations among the plotted metrics —
 *  the structural closure the rendering is checked against. */
export function seriesClosure(rows: ResultRow[], metrics: string[]): number {
  const wanted = new Set(metrics);
  const combos = new Set<string>();
  for (const row of rows) {
    if (!wanted.has(row.metric)) continue;
    combos.add([row.scheme, row.user, row.source].join('|'));
  }
  return combos.size;
}
