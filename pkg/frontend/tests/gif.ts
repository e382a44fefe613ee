// Minimal GIF reader used by the tests to check client-side rendering
// against the movies the server encodes. Decodes the first frame only.

export interface GifFrame {
  width: number;
  height: number;
  rgb: Uint8Array; // 3 bytes per pixel
}

class BitReader {
  private pos = 0;
  private bit = 0;

  constructor(private bytes: Uint8Array) {}

  read(nbits: number): number {
    let out = 0;
    for (let i = 0; i < nbits; i++) {
      const byte = this.bytes[this.pos];
      if (byte === undefined) throw new Error('gif: bitstream ran out');
      out |= ((byte >> this.bit) & 1) << i;
      this.bit++;
      if (this.bit === 8) {
        this.bit = 0;
        this.pos++;
      }
    }
    return out;
  }
}

function lzwDecode(minCodeSize: number, data: Uint8Array, npix: number): Uint8Array {
  const clear = 1 << minCodeSize;
  const eoi = clear + 1;
  const out = new Uint8Array(npix);
  let outPos = 0;

  let codeSize = minCodeSize + 1;
  let dict: number[][] = [];
  const reset = () => {
    dict = [];
    for (let i = 0; i < clear; i++) dict.push([i]);
    dict.push([], []);
    codeSize = minCodeSize + 1;
  };
  reset();

  const reader = new BitReader(data);
  let prev: number[] | null = null;
  while (outPos < npix) {
    const code = reader.read(codeSize);
    if (code === clear) {
      reset();
      prev = null;
      continue;
    }
    if (code === eoi) break;
    let entry: number[];
    if (code < dict.length && dict[code].length) {
      entry = dict[code];
    } else if (prev) {
      entry = prev.concat(prev[0]);
    } else {
      throw new Error('gif: bad first code');
    }
    for (const v of entry) {
      if (outPos < npix) out[outPos++] = v;
    }
    if (prev) {
      dict.push(prev.concat(entry[0]));
      if (dict.length === 1 << codeSize && codeSize < 12) codeSize++;
    }
    prev = entry;
  }
  return out;
}

/** Decode the first image of a GIF into packed RGB. */
export function decodeFirstFrame(bytes: Uint8Array): GifFrame {
  const sig = String.fromCharCode(...bytes.slice(0, 6));
  if (sig !== 'GIF87a' && sig !== 'GIF89a') throw new Error(`gif: bad signature ${sig}`);

  let pos = 6;
  const u16 = (at: number) => bytes[at] | (bytes[at + 1] << 8);
  pos += 4; // logical screen size
  const flags = bytes[pos];
  pos += 3;
  let palette: Uint8Array | null = null;
  if (flags & 0x80) {
    const size = 3 * (1 << ((flags & 0x07) + 1));
    palette = bytes.slice(pos, pos + size);
    pos += size;
  }

  for (;;) {
    const block = bytes[pos++];
    if (block === 0x3b || block === undefined) throw new Error('gif: no image block');
    if (block === 0x21) {
      pos++; // extension label
      for (;;) {
        const len = bytes[pos++];
        if (len === 0) break;
        pos += len;
      }
      continue;
    }
    if (block !== 0x2c) throw new Error(`gif: unexpected block 0x${block.toString(16)}`);

    const width = u16(pos + 4);
    const height = u16(pos + 6);
    const localFlags = bytes[pos + 8];
    pos += 9;
    let framePalette = palette;
    if (localFlags & 0x80) {
      const size = 3 * (1 << ((localFlags & 0x07) + 1));
      framePalette = bytes.slice(pos, pos + size);
      pos += size;
    }
    if (!framePalette) throw new Error('gif: no palette');

    const minCodeSize = bytes[pos++];
    const chunks: Uint8Array[] = [];
    let total = 0;
    for (;;) {
      const len = bytes[pos++];
      if (len === 0) break;
      chunks.push(bytes.slice(pos, pos + len));
      total += len;
      pos += len;
    }
    const data = new Uint8Array(total);
    let off = 0;
    for (const c of chunks) {
      data.set(c, off);
      off += c.length;
    }

    let indexes = lzwDecode(minCodeSize, data, width * height);
    if (localFlags & 0x40) {
      // interlaced: rows arrive in four passes
      const order: number[] = [];
      for (let r = 0; r < height; r += 8) order.push(r);
      for (let r = 4; r < height; r += 8) order.push(r);
      for (let r = 2; r < height; r += 4) order.push(r);
      for (let r = 1; r < height; r += 2) order.push(r);
      const straight = new Uint8Array(width * height);
      for (let i = 0; i < order.length; i++) {
        straight.set(indexes.subarray(i * width, (i + 1) * width), order[i] * width);
      }
      indexes = straight;
    }
    const rgb = new Uint8Array(width * height * 3);
    for (let i = 0; i < width * height; i++) {
      const k = indexes[i] * 3;
      rgb[3 * i] = framePalette[k];
      rgb[3 * i + 1] = framePalette[k + 1];
      rgb[3 * i + 2] = framePalette[k + 2];
    }
    return { width, height, rgb };
  }
}
