import { writeFileSync } from "node:fs";
import { readTailCsv, SchemaError, TailRow } from "./csv.js";
import { axes, fmt, linearScale, svgDocument, HEIGHT, MARGIN, WIDTH } from "./svg.js";

export interface TailFigureSpec {
  input: string;
  output: string;
  /** Reference tail exponent 1 - kappa drawn alongside the fitted line. */
  referenceSlope: number;
}

export interface LineFit {
  slope: number;
  intercept: number;
}

/** Ordinary least squares on the log-log points (display trendline only;
 * the authoritative exponent fit lives in the primary component). */
export function fitLine(xs: number[], ys: number[]): LineFit {
  const n = xs.length;
  const mx = xs.reduce((a, b) => a + b, 0) / n;
  const my = ys.reduce((a, b) => a + b, 0) / n;
  let sxx = 0;
  let sxy = 0;
  for (let i = 0; i < n; i++) {
    sxx += (xs[i] - mx) ** 2;
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  const slope = sxy / sxx;
  return { slope, intercept: my - slope * mx };
}

export function makeTailFigure(spec: TailFigureSpec): void {
  const rows = readTailCsv(spec.input).filter((row) => row.p_hat > 0);
  if (rows.length < 2) {
    throw new SchemaError(
      `${spec.input}: need at least 2 rows with p_hat > 0 for a tail plot`,
    );
  }
  const log10 = Math.log(10);
  const xs = rows.map((row) => Math.log10(row.r));
  const ys = rows.map((row) => Math.log10(row.p_hat));
  // stderr of p_hat propagated to the log10 scale
  const yerr = rows.map((row) => row.stderr / (row.p_hat * log10));

  const xPad = 0.1 * (Math.max(...xs) - Math.min(...xs) || 1);
  const yLo = Math.min(...ys.map((y, i) => y - yerr[i]));
  const yHi = Math.max(...ys.map((y, i) => y + yerr[i]));
  const yPad = 0.15 * (yHi - yLo || 1);
  const xScale = linearScale(
    [Math.min(...xs) - xPad, Math.max(...xs) + xPad],
    [MARGIN.left, WIDTH - MARGIN.right],
  );
  const yScale = linearScale(
    [yLo - yPad, yHi + yPad],
    [HEIGHT - MARGIN.bottom, MARGIN.top],
  );

  const fit = fitLine(xs, ys);
  const body = axes(xScale, yScale, "log10 r", "log10 p-hat");

  const lineAt = (slope: number, intercept: number, dash: string, color: string) => {
    const [x0, x1] = xScale.domain;
    return (
      `<line x1="${fmt(xScale(x0))}" y1="${fmt(yScale(slope * x0 + intercept))}" ` +
      `x2="${fmt(xScale(x1))}" y2="${fmt(yScale(slope * x1 + intercept))}" ` +
      `stroke="${color}" stroke-width="1.5" clip-path="url(#plot)"${dash ? ` stroke-dasharray="${dash}"` : ""}/>`
    );
  };
  body.push(lineAt(fit.slope, fit.intercept, "", "#1f77b4"));
  // reference line anchored at the first data point
  const refIntercept = ys[0] - spec.referenceSlope * xs[0];
  body.push(lineAt(spec.referenceSlope, refIntercept, "6 4", "#d62728"));

  rows.forEach((row: TailRow, i) => {
    const px = xScale(xs[i]);
    body.push(
      `<line x1="${fmt(px)}" y1="${fmt(yScale(ys[i] - yerr[i]))}" x2="${fmt(px)}" y2="${fmt(yScale(ys[i] + yerr[i]))}" stroke="black"/>`,
      `<circle cx="${fmt(px)}" cy="${fmt(yScale(ys[i]))}" r="4" fill="#1f77b4"/>`,
    );
  });

  body.push(
    `<text x="${MARGIN.left + 10}" y="${MARGIN.top + 4}" font-size="14" fill="#1f77b4">fitted slope = ${fmt(fit.slope)}</text>`,
    `<text x="${MARGIN.left + 10}" y="${MARGIN.top + 24}" font-size="14" fill="#d62728">reference slope 1 - kappa = ${fmt(spec.referenceSlope)}</text>`,
    `<text x="${WIDTH - MARGIN.right}" y="${MARGIN.top - 14}" text-anchor="end" font-size="14">exit-probability tail, log-log</text>`,
  );
  writeFileSync(spec.output, svgDocument(body));
}
