/** PlotSpec orchestration: CSV in, SVG file out. */

import { readFileSync, writeFileSync } from 'node:fs';

import { parseResultCsv } from './csv.js';
import { renderSvg } from './plot.js';
import { presetPlot } from './presets.js';
import { groupSeries, seriesClosure, Series } from './series.js';

export interface PlotSpec {
  preset: string;
  csvPath: string;
  outPath: string;
}

export interface RenderResult {
  seriesCount: number;
  closure: number;
  series: Series[];
  svg: string;
}

/** Render a preset's CSV to an SVG image; the input file is only read. */
export function render(spec: PlotSpec): RenderResult {
  const plot = presetPlot(spec.preset);
  const rows = parseResultCsv(readFileSync(spec.csvPath, 'utf-8'));
  const series = groupSeries(rows, plot.metrics, plot.xAxis);
  if (series.length === 0) {
    throw new Error(
      `no rows with metrics [${plot.metrics.join(', ')}] found for preset '${spec.preset}'`,
    );
  }
  const svg = renderSvg(series, {
    title: plot.title,
    xLabel: plot.xLabel,
    yLabel: plot.yLabel,
    logY: plot.logY,
  });
  if (!spec.outPath.endsWith('.svg')) {
    throw new Error(`output must be an .svg path, got '${spec.outPath}'`);
  }
  writeFileSync(spec.outPath, svg, 'utf-8');
  return {
    seriesCount: series.length,
    closure: seriesClosure(rows, plot.metrics),
    series,
    svg,
  };
}
