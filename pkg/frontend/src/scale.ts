/** Linear scales and tick generation for the figure axes. */

export interface LinearScale {
  map(value: number): number;
  invert(position: number): number;
  domain: [number, number];
  range: [number, number];
}

export function linearScale(
  domainMin: number,
  domainMax: number,
  rangeMin: number,
  rangeMax: number,
): LinearScale {
  const span = domainMax - domainMin;
  const width = rangeMax - rangeMin;
  if (!(span > 0)) {
    throw new Error(`degenerate scale domain [${domainMin}, ${domainMax}]`);
  }
  return {
    map: (value) => rangeMin + ((value - domainMin) / span) * width,
    invert: (position) => domainMin + ((position - rangeMin) / width) * span,
    domain: [domainMin, domainMax],
    range: [rangeMin, rangeMax],
  };
}

/** Pad a data extent so marks do not sit on the frame; handles flat data. */
export function padded(lo: number, hi: number, fraction = 0.05): [number, number] {
  if (lo === hi) {
    const bump = lo === 0 ? 1 : Math.abs(lo) * 0.1;
    return [lo - bump, hi + bump];
  }
  const pad = (hi - lo) * fraction;
  return [lo - pad, hi + pad];
}

/** Round ticks covering [lo, hi]: steps of 1/2/5 x 10^k. */
export function ticks(lo: number, hi: number, count = 5): number[] {
  const span = hi - lo;
  if (!(span > 0)) {
    return [lo];
  }
  const rawStep = span / Math.max(1, count);
  const power = Math.floor(Math.log10(rawStep));
  const base = 10 ** power;
  let step = base;
  for (const mult of [1, 2, 5, 10]) {
    step = mult * base;
    if (step >= rawStep) {
      break;
    }
  }
  const start = Math.ceil(lo / step) * step;
  const out: number[] = [];
  for (let v = start; v <= hi + step * 1e-9; v += step) {
    out.push(Number(v.toPrecision(12)));
  }
  return out;
}

/** Compact tick label: plain for small magnitudes, exponent otherwise. */
export function tickLabel(value: number): string {
  if (value === 0) {
    return "0";
  }
  const magnitude = Math.abs(value);
  if (magnitude >= 1e5 || magnitude < 1e-3) {
    return value.toExponential(1).replace("+", "");
  }
  return String(Number(value.toPrecision(6)));
}
