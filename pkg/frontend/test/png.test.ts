import { crc32, inflateSync } from "node:zlib";

import { describe, expect, it } from "vitest";

import { encodePng } from "../src/png.js";

/** Independent chunk walker; CRCs are checked against zlib's crc32. */
function parseChunks(buf: Buffer): { type: string; data: Buffer }[] {
  const chunks: { type: string; data: Buffer }[] = [];
  let at = 8; // past the signature
  while (at < buf.length) {
    const length = buf.readUInt32BE(at);
    const type = buf.subarray(at + 4, at + 8).toString("ascii");
    const data = buf.subarray(at + 8, at + 8 + length);
    const stored = buf.readUInt32BE(at + 8 + length);
    const expected = crc32(buf.subarray(at + 4, at + 8 + length));
    expect(stored).toBe(expected);
    chunks.push({ type, data });
    at += 12 + length;
  }
  return chunks;
}

describe("encodePng", () => {
  const width = 3;
  const height = 2;
  // distinctive byte per channel so transposition bugs cannot cancel
  const pixels = Uint8Array.from(
    { length: 4 * width * height },
    (_, i) => (7 * i + 13) % 256,
  );

  it("emits the PNG signature and IHDR/IDAT/IEND with valid CRCs", () => {
    const png = encodePng(width, height, pixels);
    expect([...png.subarray(0, 8)]).toEqual([
      0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a,
    ]);
    const chunks = parseChunks(png);
    expect(chunks.map((c) => c.type)).toEqual(["IHDR", "IDAT", "IEND"]);
    const ihdr = chunks[0]!.data;
    expect(ihdr.readUInt32BE(0)).toBe(width);
    expect(ihdr.readUInt32BE(4)).toBe(height);
    expect(ihdr[8]).toBe(8); // bit depth
    expect(ihdr[9]).toBe(6); // RGBA
    expect(ihdr[10]).toBe(0); // compression
    expect(ihdr[11]).toBe(0); // filter
    expect(ihdr[12]).toBe(0); // no interlace
  });

  it("round-trips the pixel bytes through inflate and defilter", () => {
    const png = encodePng(width, height, pixels);
    const idat = parseChunks(png).find((c) => c.type === "IDAT")!.data;
    const raw = inflateSync(idat);
    const stride = 1 + 4 * width;
    expect(raw.length).toBe(stride * height);
    for (let y = 0; y < height; y++) {
      expect(raw[y * stride]).toBe(0); // filter type: none
      const line = raw.subarray(y * stride + 1, (y + 1) * stride);
      expect([...line]).toEqual([
        ...pixels.subarray(4 * width * y, 4 * width * (y + 1)),
      ]);
    }
  });

  it("is byte-for-byte deterministic", () => {
    const a = encodePng(width, height, pixels);
    const b = encodePng(width, height, Uint8Array.from(pixels));
    expect(a.equals(b)).toBe(true);
  });

  it("rejects a pixel buffer of the wrong size", () => {
    expect(() => encodePng(2, 2, new Uint8Array(15))).toThrow(
      /15 bytes, expected 16/,
    );
  });
});
