import { describe, expect, it } from 'vitest';
import { countBelow, cropFrame, scanCsv, type RasterFrame } from '../src/scan.js';

function frameValues(n: number, rows: number, cols: number): number[][] {
  const out: number[][] = [];
  for (let r = 0; r < rows; r++) {
    const row: number[] = [];
    for (let c = 0; c < cols; c++) row.push(n * 100 + r * cols + c);
    out.push(row);
  }
  return out;
}

function blankCsv(nframe: number, rows: number, cols: number): string {
  const lines: string[] = [];
  for (let k = 0; k < nframe; k++) {
    lines.push('');
    for (const row of frameValues(k, rows, cols)) lines.push(row.join(','));
  }
  return lines.join('\n') + '\n';
}

function rowCsv(nframe: number, rows: number, cols: number, marker = 'FRAME'): string {
  const lines: string[] = [];
  for (let k = 0; k < nframe; k++) {
    lines.push(marker);
    for (const row of frameValues(k, rows, cols)) lines.push(row.join(','));
  }
  return lines.join('\n') + '\n';
}

function colCsv(nframe: number, rows: number, cols: number, colId = 1): string {
  const lines: string[] = [];
  for (let k = 0; k < nframe; k++) {
    for (const row of frameValues(k, rows, cols)) {
      const cells = row.map(String);
      cells.splice(colId - 1, 0, String(k + 1));
      lines.push(cells.join(','));
    }
  }
  return lines.join('\n') + '\n';
}

function expectFrames(frames: RasterFrame[], nframe: number, rows: number, cols: number): void {
  expect(frames).toHaveLength(nframe);
  frames.forEach((f, k) => {
    expect(f.rows).toBe(rows);
    expect(f.cols).toBe(cols);
    const want = frameValues(k, rows, cols).flat();
    expect(Array.from(f.values)).toEqual(want);
  });
}

describe('scanCsv', () => {
  it('reads the blank layout', () => {
    const frames = scanCsv(blankCsv(3, 4, 5), { mode: 'blank', nframe: 3, nrow: 4, ncol: 5 });
    expectFrames(frames, 3, 4, 5);
  });

  it('reads the marker-row layout', () => {
    const frames = scanCsv(rowCsv(2, 3, 3), { mode: 'row', nframe: 2, nrow: 3, ncol: 3, row_id: 'FRAME' });
    expectFrames(frames, 2, 3, 3);
  });

  it('reads the id-column layout', () => {
    const frames = scanCsv(colCsv(2, 3, 4, 2), { mode: 'col', nframe: 2, nrow: 3, ncol: 4, col_id: 2 });
    expectFrames(frames, 2, 3, 4);
  });

  it('skips header noise in id-column files', () => {
    const text = 'time,a,b,c,d\n' + colCsv(2, 2, 4, 1);
    const frames = scanCsv(text, { mode: 'col', nframe: 2, nrow: 2, ncol: 4, col_id: 1 });
    expectFrames(frames, 2, 2, 4);
  });

  it('keeps only the first nframe frames', () => {
    const frames = scanCsv(blankCsv(5, 2, 2), { mode: 'blank', nframe: 3, nrow: 2, ncol: 2 });
    expect(frames).toHaveLength(3);
  });

  it('tolerates CRLF line endings', () => {
    const text = blankCsv(2, 2, 2).replace(/\n/g, '\r\n');
    expectFrames(scanCsv(text, { mode: 'blank', nframe: 2, nrow: 2, ncol: 2 }), 2, 2, 2);
  });

  it('rejects truncated frames', () => {
    const text = '\n1,2\n';
    expect(() => scanCsv(text, { mode: 'blank', nframe: 1, nrow: 2, ncol: 2 })).toThrow(/too few|truncated/);
  });

  it('rejects non-numeric cells', () => {
    const text = '\n1,x\n3,4\n';
    expect(() => scanCsv(text, { mode: 'blank', nframe: 1, nrow: 2, ncol: 2 })).toThrow(/not a number/);
  });

  it('rejects files with no frames at all', () => {
    expect(() => scanCsv('1,2\n3,4\n', { mode: 'blank', nframe: 1, nrow: 2, ncol: 2 })).toThrow(/no frames/);
  });

  it('round-trips float text exactly', () => {
    const v = '0.10000000000000001';
    const frames = scanCsv(`\n${v}\n`, { mode: 'blank', nframe: 1, nrow: 1, ncol: 1 });
    expect(frames[0].values[0]).toBe(Number(v));
  });
});

describe('cropFrame', () => {
  const frame = scanCsv(blankCsv(1, 4, 5), { mode: 'blank', nframe: 1, nrow: 4, ncol: 5 })[0];

  it('slices the requested block', () => {
    const out = cropFrame(frame, { row0: 1, col0: 2, height: 2, width: 3 });
    expect(out.rows).toBe(2);
    expect(out.cols).toBe(3);
    expect(Array.from(out.values)).toEqual([7, 8, 9, 12, 13, 14]);
  });

  it('identity crop copies the frame', () => {
    const out = cropFrame(frame, { row0: 0, col0: 0, height: 4, width: 5 });
    expect(Array.from(out.values)).toEqual(Array.from(frame.values));
  });
});

describe('countBelow', () => {
  it('counts strictly below the cutoff', () => {
    const frame: RasterFrame = { rows: 1, cols: 4, values: Float64Array.from([1, 2, 2, 3]) };
    expect(countBelow(frame, 2)).toBe(1);
    expect(countBelow(frame, 2.5)).toBe(3);
  });
});
