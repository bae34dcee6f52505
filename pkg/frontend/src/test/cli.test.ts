import assert from 'node:assert/strict';
import { spawnSync } from 'node:child_process';
import { existsSync, mkdtempSync } from 'node:fs';
import { tmpdir } from 'node:os';
import { join } from 'node:path';
import { test } from 'node:test';
import { fileURLToPath } from 'node:url';

const CLI = fileURLToPath(new URL('../cli.js', import.meta.url));
const FIXTURES = fileURLToPath(new URL('../../fixtures/', import.meta.url));
const OUT = mkdtempSync(join(tmpdir(), 'dprsma-cli-'));

test('render subcommand writes an SVG and reports series', () => {
  const out = join(OUT, 'fig.svg');
  const res = spawnSync('node', [
    CLI, 'render',
    '--csv', FIXTURES + 'outage-pdiv-xi.csv',
    '--preset', 'outage-pdiv-xi',
    '--out', out,
  ], { encoding: 'utf-8' });
  assert.equal(res.status, 0, res.stderr);
  assert.ok(existsSync(out));
  assert.match(res.stdout, /series/);
});

test('unknown preset exits nonzero with message', () => {
  const res = spawnSync('node', [
    CLI, 'render', '--csv', FIXTURES + 'outage-pdiv-xi.csv',
    '--preset', 'bogus', '--out', join(OUT, 'y.svg'),
  ], { encoding: 'utf-8' });
  assert.notEqual(res.status, 0);
  assert.match(res.stderr, /unknown preset/);
});

test('missing arguments exit with usage error', () => {
  const res = spawnSync('node', [CLI, 'render', '--csv', 'x.csv'], { encoding: 'utf-8' });
  assert.equal(res.status, 2);
});
