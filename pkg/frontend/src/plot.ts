/** Deterministic SVG rendering: lines for analytic series, markers for MC. */

import { Series } from './series.js';

export const STYLE_VERSION = '1';

const PALETTE = [
  '#1f77b4', '#ff7f0e', '#2ca02c', '#d62728', '#9467bd', '#8c564b',
  '#e377c2', '#7f7f7f', '#bcbd22', '#17becf', '#393b79', '#ad494a',
  '#637939', '#7b4173', '#3182bd', '#e6550d', '#31a354', '#756bb1',
];

export interface PlotOptions {
  title: string;
  xLabel: string;
  yLabel: string;
  logY: boolean;
}

const W = 960;
const H = 600;
const MARGIN = { left: 70, right: 290, top: 40, bottom: 55 };

function fmt(v: number): string {
  return Number(v.toFixed(3)).toString();
}

function niceTicksLinear(lo: number, hi: number, n = 6): number[] {
  if (!(hi > lo)) return [lo];
  const span = hi - lo;
  const step = Math.pow(10, Math.floor(Math.log10(span / n)));
  const candidates = [step, 2 * step, 2.5 * step, 5 * step, 10 * step];
  const s = candidates.find((c) => span / c <= n) ?? 10 * step;
  const ticks: number[] = [];
  for (let t = Math.ceil(lo / s) * s; t <= hi + 1e-12; t += s) ticks.push(Number(t.toPrecision(12)));
  return ticks;
}

function decadeTicks(lo: number, hi: number): number[] {
  const ticks: number[] = [];
  for (let e = Math.ceil(Math.log10(lo)); Math.pow(10, e) <= hi * 1.0001; e++) {
    ticks.push(Math.pow(10, e));
  }
  if (ticks.length === 0) ticks.push(lo, hi);
  return ticks;
}

export function renderSvg(series: Series[], opts: PlotOptions): string {
  const pts = series.flatMap((s) => s.points);
  const xs = pts.map((p) => p.x);
  let ys = pts.map((p) => p.y);
  if (opts.logY) {
    ys = ys.filter((y) => y > 0);
    if (ys.length === 0) ys = [1e-6, 1];
  }
  const xLo = Math.min(...xs);
  const xHi = Math.max(...xs);
  let yLo = Math.min(...ys);
  let yHi = Math.max(...ys);
  if (opts.logY) {
    yLo = Math.pow(10, Math.floor(Math.log10(yLo)));
    yHi = Math.pow(10, Math.ceil(Math.log10(yHi)));
    if (yLo === yHi) yHi = yLo * 10;
  } else {
    if (yLo === yHi) {
      yLo -= 0.5;
      yHi += 0.5;
    } else {
      const pad = 0.05 * (yHi - yLo);
      yLo = Math.max(0, yLo - pad);
      yHi += pad;
    }
  }
  const plotW = W - MARGIN.left - MARGIN.right;
  const plotH = H - MARGIN.top - MARGIN.bottom;
  const sx = (x: number) =>
    MARGIN.left + (xHi === xLo ? 0.5 : (x - xLo) / (xHi - xLo)) * plotW;
  const syLin = (y: number) => MARGIN.top + (1 - (y - yLo) / (yHi - yLo)) * plotH;
  const syLog = (y: number) =>
    MARGIN.top + (1 - (Math.log10(y) - Math.log10(yLo)) / (Math.log10(yHi) - Math.log10(yLo))) * plotH;
  const sy = opts.logY ? syLog : syLin;

  const el: string[] = [];
  el.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${W}" height="${H}" ` +
    `viewBox="0 0 ${W} ${H}" data-style-version="${STYLE_VERSION}" ` +
    `data-series-count="${series.length}">`,
  );
  el.push(`<rect width="${W}" height="${H}" fill="white"/>`);
  el.push(
    `<text x="${W / 2}" y="22" text-anchor="middle" font-family="sans-serif" ` +
    `font-size="16">${opts.title}</text>`,
  );

  // axes frame
  el.push(
    `<rect x="${MARGIN.left}" y="${MARGIN.top}" width="${plotW}" height="${plotH}" ` +
    `fill="none" stroke="#333" stroke-width="1"/>`,
  );
  const xTicks = niceTicksLinear(xLo, xHi, 8);
  for (const t of xTicks) {
    const x = sx(t);
    el.push(`<line x1="${fmt(x)}" y1="${MARGIN.top + plotH}" x2="${fmt(x)}" y2="${MARGIN.top + plotH + 5}" stroke="#333"/>`);
    el.push(`<text x="${fmt(x)}" y="${MARGIN.top + plotH + 20}" text-anchor="middle" font-family="sans-serif" font-size="11">${t}</text>`);
  }
  const yTicks = opts.logY ? decadeTicks(yLo, yHi) : niceTicksLinear(yLo, yHi, 7);
  for (const t of yTicks) {
    const y = sy(t);
    el.push(`<line x1="${MARGIN.left - 5}" y1="${fmt(y)}" x2="${MARGIN.left}" y2="${fmt(y)}" stroke="#333"/>`);
    const lbl = opts.logY ? `1e${Math.round(Math.log10(t))}` : `${Number(t.toPrecision(6))}`;
    el.push(`<text x="${MARGIN.left - 9}" y="${fmt(y + 4)}" text-anchor="end" font-family="sans-serif" font-size="11">${lbl}</text>`);
    el.push(`<line x1="${MARGIN.left}" y1="${fmt(y)}" x2="${MARGIN.left + plotW}" y2="${fmt(y)}" stroke="#ddd" stroke-width="0.5"/>`);
  }
  el.push(
    `<text x="${MARGIN.left + plotW / 2}" y="${H - 14}" text-anchor="middle" ` +
    `font-family="sans-serif" font-size="13">${opts.xLabel}</text>`,
  );
  el.push(
    `<text x="20" y="${MARGIN.top + plotH / 2}" text-anchor="middle" font-family="sans-serif" ` +
    `font-size="13" transform="rotate(-90 20 ${MARGIN.top + plotH / 2})">${opts.yLabel}</text>`,
  );

  // series
  series.forEach((s, i) => {
    const color = PALETTE[i % PALETTE.length];
    const visible = s.points.filter((p) => !opts.logY || p.y > 0);
    const coords = visible.map((p) => `${fmt(sx(p.x))},${fmt(sy(Math.max(p.y, opts.logY ? yLo : -Infinity)))}`);
    if (s.source === 'analytic') {
      el.push(
        `<polyline data-series="${s.key}" data-points="${visible.length}" fill="none" ` +
        `stroke="${color}" stroke-width="1.6" points="${coords.join(' ')}"/>`,
      );
    } else {
      const dots = visible
        .map((p) => `<circle cx="${fmt(sx(p.x))}" cy="${fmt(sy(Math.max(p.y, opts.logY ? yLo : -Infinity)))}" r="3.5" fill="none" stroke="${color}" stroke-width="1.4"/>`)
        .join('');
      el.push(`<g data-series="${s.key}" data-points="${visible.length}">${dots}</g>`);
    }
    // legend entry
    const ly = MARGIN.top + 14 * i;
    if (ly < H - MARGIN.bottom) {
      const lx = W - MARGIN.right + 14;
      if (s.source === 'analytic') {
        el.push(`<line x1="${lx}" y1="${ly}" x2="${lx + 20}" y2="${ly}" stroke="${color}" stroke-width="1.6"/>`);
      } else {
        el.push(`<circle cx="${lx + 10}" cy="${ly}" r="3.5" fill="none" stroke="${color}" stroke-width="1.4"/>`);
      }
      el.push(`<text x="${lx + 26}" y="${ly + 4}" font-family="sans-serif" font-size="10">${s.label}</text>`);
    }
  });
  el.push('</svg>');
  return el.join('\n') + '\n';
}
