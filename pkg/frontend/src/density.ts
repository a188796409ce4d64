import { writeFileSync } from "node:fs";
import { readSamplesCsv, SchemaError } from "./csv.js";
import { axes, fmt, linearScale, svgDocument, HEIGHT, MARGIN, WIDTH } from "./svg.js";

export interface DensityFigureSpec {
  input: string;
  output: string;
  /** Index of the reference exponential-functional density (must exceed 1). */
  kappa: number;
}

export const LOW_N_THRESHOLD = 50;

/** Lanczos approximation of log Gamma, g=7, n=9 (Numerical Recipes coefficients). */
export function logGamma(x: number): number {
  const c = [
    0.99999999999980993, 676.5203681218851, -1259.1392167224028,
    771.32342877765313, -176.61502916214059, 12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7,
  ];
  if (x < 0.5) {
    return Math.log(Math.PI / Math.sin(Math.PI * x)) - logGamma(1 - x);
  }
  x -= 1;
  let a = c[0];
  const t = x + 7.5;
  for (let i = 1; i < 9; i++) {
    a += c[i] / (x + i);
  }
  return 0.5 * Math.log(2 * Math.PI) + (x + 0.5) * Math.log(t) - t + Math.log(a);
}

/** Inverse-gamma reference density: the law of 2/G with G ~ Gamma(kappa, 1),
 * i.e. f(x) = 2^kappa / Gamma(kappa) * x^(-kappa-1) * exp(-2/x). */
export function referenceDensity(x: number, kappa: number): number {
  if (x <= 0) {
    return 0;
  }
  return Math.exp(
    kappa * Math.log(2) - logGamma(kappa) - (kappa + 1) * Math.log(x) - 2 / x,
  );
}

export function makeDensityOverlay(spec: DensityFigureSpec): void {
  if (!(spec.kappa > 1)) {
    throw new SchemaError(`kappa must exceed 1, got ${spec.kappa}`);
  }
  const samples = readSamplesCsv(spec.input);
  const n = samples.length;

  // histogram support: clip to the 99th percentile so the heavy tail does
  // not flatten the bulk of the plot
  const sorted = [...samples].sort((a, b) => a - b);
  const xMax = Math.max(sorted[Math.min(n - 1, Math.floor(0.99 * n))], 1e-6);
  const nBins = Math.max(10, Math.min(60, Math.floor(Math.sqrt(n))));
  const binWidth = xMax / nBins;
  const counts = new Array<number>(nBins).fill(0);
  let inRange = 0;
  for (const x of samples) {
    if (x >= 0 && x < xMax) {
      counts[Math.floor(x / binWidth)] += 1;
      inRange += 1;
    }
  }
  const density = counts.map((c) => c / (n * binWidth));

  const curveX: number[] = [];
  const curveY: number[] = [];
  for (let i = 0; i <= 300; i++) {
    const x = (i / 300) * xMax;
    curveX.push(x);
    curveY.push(referenceDensity(x, spec.kappa));
  }

  const yMax = 1.1 * Math.max(...density, ...curveY);
  const xScale = linearScale([0, xMax], [MARGIN.left, WIDTH - MARGIN.right]);
  const yScale = linearScale([0, yMax], [HEIGHT - MARGIN.bottom, MARGIN.top]);

  const body = axes(xScale, yScale, "x", "density");
  density.forEach((d, i) => {
    if (d <= 0) {
      return;
    }
    const x0 = xScale(i * binWidth);
    const x1 = xScale((i + 1) * binWidth);
    const y = yScale(d);
    body.push(
      `<rect x="${fmt(x0)}" y="${fmt(y)}" width="${fmt(x1 - x0)}" height="${fmt(yScale(0) - y)}" fill="#9ecae1" stroke="#6baed6"/>`,
    );
  });
  const path = curveX
    .map((x, i) => `${i === 0 ? "M" : "L"}${fmt(xScale(x))},${fmt(yScale(curveY[i]))}`)
    .join(" ");
  body.push(`<path d="${path}" fill="none" stroke="#d62728" stroke-width="2"/>`);

  body.push(
    `<text x="${WIDTH - MARGIN.right}" y="${MARGIN.top - 14}" text-anchor="end" font-size="14">exponential-functional density overlay (kappa = ${fmt(spec.kappa)})</text>`,
    `<text x="${MARGIN.left + 10}" y="${MARGIN.top + 4}" font-size="14">n = ${n} (${inRange} shown)</text>`,
  );
  if (n < LOW_N_THRESHOLD) {
    body.push(
      `<text x="${MARGIN.left + 10}" y="${MARGIN.top + 24}" font-size="14" fill="#d62728">warning: low sample count (n = ${n})</text>`,
    );
  }
  writeFileSync(spec.output, svgDocument(body));
}
