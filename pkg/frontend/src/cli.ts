#!/usr/bin/env node
/** CLI: dprsma-render render --csv <path> --preset <name> --out <path.svg> */

import { render } from './render.js';

function parseArgs(argv: string[]): Map<string, string> {
  const out = new Map<string, string>();
  for (let i = 0; i < argv.length; i++) {
    const a = argv[i];
    if (a.startsWith('--')) {
      const val = argv[i + 1];
      if (val === undefined || val.startsWith('--')) {
        throw new Error(`missing value for ${a}`);
      }
      out.set(a.slice(2), val);
      i++;
    }
  }
  return out;
}

export function main(argv: string[]): number {
  if (argv[0] !== 'render') {
    console.error('usage: dprsma-render render --csv <path> --preset <name> --out <path.svg>');
    return 2;
  }
  let args: Map<string, string>;
  try {
    args = parseArgs(argv.slice(1));
  } catch (e) {
    console.error(String(e instanceof Error ? e.message : e));
    return 2;
  }
  const csv = args.get('csv');
  const preset = args.get('preset');
  const out = args.get('out');
  if (!csv || !preset || !out) {
    console.error('render requires --csv, --preset and --out');
    return 2;
  }
  try {
    const result = render({ preset, csvPath: csv, outPath: out });
    console.log(`wrote ${out}: ${result.seriesCount} series`);
    return 0;
  } catch (e) {
    console.error(String(e instanceof Error ? e.message : e));
    return 1;
  }
}

process.exit(main(process.argv.slice(2)));
