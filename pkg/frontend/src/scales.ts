export function linearScale(
  d0: number,
  d1: number,
  r0: number,
  r1: number,
): (x: number) => number {
  const span = d1 - d0 || 1;
  return (x) => r0 + ((x - d0) / span) * (r1 - r0);
}

/** Round tick positions covering [lo, hi], at most n of them. */
export function ticks(lo: number, hi: number, n = 6): number[] {
  if (!(hi > lo)) return [lo];
  const raw = (hi - lo) / n;
  const mag = 10 ** Math.floor(Math.log10(raw));
  const step = [1, 2, 5, 10].map((m) => m * mag).find((s) => s >= raw)!;
  const out: number[] = [];
  for (let v = Math.ceil(lo / step) * step; v <= hi + step / 2; v += step) {
    out.push(Math.abs(v) < step / 2 ? 0 : v);
  }
  return out;
}

function channel(a: number, b: number, t: number): number {
  return Math.round(a + (b - a) * t);
}

function lerpRgb(a: [number, number, number], b: [number, number, number], t: number): string {
  return `rgb(${channel(a[0], b[0], t)},${channel(a[1], b[1], t)},${channel(a[2], b[2], t)})`;
}

const BLUE: [number, number, number] = [33, 102, 172];
const WHITE: [number, number, number] = [247, 247, 247];
const RED: [number, number, number] = [178, 24, 43];
const DEEP: [number, number, number] = [8, 48, 107];

/** Blue-white-red ramp, symmetric around zero with half-width `lim`. */
export function divergingColor(v: number, lim: number): string {
  const t = Math.max(-1, Math.min(1, v / (lim || 1)));
  return t < 0 ? lerpRgb(WHITE, BLUE, -t) : lerpRgb(WHITE, RED, t);
}

/** White-to-dark-blue ramp over [lo, hi]. */
export function sequentialColor(v: number, lo: number, hi: number): string {
  const t = Math.max(0, Math.min(1, (v - lo) / (hi - lo || 1)));
  return lerpRgb(WHITE, DEEP, t);
}
