/** Per-preset plot specifications: metrics, axes and scales. */

import { XAxis } from './series.js';

export interface PresetPlot {
  metrics: string[];
  xAxis: XAxis;
  xLabel: string;
  yLabel: string;
  logY: boolean;
  title: string;
}

const OUTAGE: Omit<PresetPlot, 'title'> = {
  metrics: ['outage_common', 'outage_private'],
  xAxis: 'snr_db',
  xLabel: 'SNR (dB)',
  yLabel: 'Outage probability',
  logY: true,
};

const SUM_RATE_SNR: Omit<PresetPlot, 'title'> = {
  metrics: ['outage_sum_rate'],
  xAxis: 'snr_db',
  xLabel: 'SNR (dB)',
  yLabel: 'Outage sum-rate (bpcu)',
  logY: false,
};

const ERGODIC: Omit<PresetPlot, 'title'> = {
  metrics: ['ergodic_sum'],
  xAxis: 'snr_db',
  xLabel: 'SNR (dB)',
  yLabel: 'Ergodic sum-rate (bpcu)',
  logY: false,
};

export const PRESET_PLOTS: Record<string, PresetPlot> = {
  'outage-pmux-ideal': { ...OUTAGE, title: 'Polarization multiplexing, ideal cross-polar isolation' },
  'outage-pmux-chi': { ...OUTAGE, title: 'Polarization multiplexing vs cross-polar leakage' },
  'outage-pdiv-ideal': { ...OUTAGE, title: 'Polarization diversity, ideal conditions' },
  'outage-pdiv-xi': { ...OUTAGE, title: 'Polarization diversity vs residual SIC error' },
  'outage-spmux-ideal': { ...OUTAGE, title: 'Per-polarization RSMA, ideal conditions' },
  'outage-spmux-xi': { ...OUTAGE, title: 'Per-polarization RSMA vs residual SIC error' },
  'outage-compare': {
    ...OUTAGE,
    metrics: ['outage_total'],
    title: 'Scheme comparison: total outage',
  },
  'outage-sumrate-vs-snr': { ...SUM_RATE_SNR, title: 'Outage sum-rate vs SNR' },
  'outage-sumrate-vs-xi': {
    ...SUM_RATE_SNR,
    xAxis: 'xi',
    xLabel: 'Residual SIC error factor',
    title: 'Outage sum-rate vs SIC error at 24 dB',
  },
  'ergodic-pmux-chi': { ...ERGODIC, title: 'Polarization multiplexing: ergodic sum-rate' },
  'ergodic-pdiv-xi': { ...ERGODIC, title: 'Polarization diversity: ergodic sum-rate' },
  'ergodic-schemes-xi': { ...ERGODIC, title: 'RSMA schemes vs residual SIC error' },
  'ergodic-schemes-chi': { ...ERGODIC, title: 'RSMA schemes vs cross-polar leakage' },
  'ergodic-all-ma': { ...ERGODIC, title: 'All multiple-access schemes: ergodic sum-rate' },
  'ergodic-sdma-csi': { ...ERGODIC, title: 'RSMA vs SDMA under imperfect CSI' },
};

export function presetPlot(name: string): PresetPlot {
  const spec = PRESET_PLOTS[name];
  if (!spec) {
    throw new Error(
      `unknown preset '${name}'; known: ${Object.keys(PRESET_PLOTS).sort().join(', ')}`,
    );
  }
  return spec;
}
