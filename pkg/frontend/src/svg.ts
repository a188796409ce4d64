/** Minimal deterministic SVG assembly helpers (no timestamps, no randomness). */

export const WIDTH = 720;
export const HEIGHT = 520;
export const MARGIN = { top: 40, right: 30, bottom: 60, left: 80 };

export interface Scale {
  (x: number): number;
  domain: [number, number];
}

export function linearScale(
  domain: [number, number],
  range: [number, number],
): Scale {
  const [d0, d1] = domain;
  const [r0, r1] = range;
  const span = d1 - d0 || 1;
  const fn = ((x: number) => r0 + ((x - d0) / span) * (r1 - r0)) as Scale;
  fn.domain = domain;
  return fn;
}

export function fmt(x: number): string {
  return Number(x.toPrecision(6)).toString();
}

export function svgDocument(body: string[]): string {
  const plotW = WIDTH - MARGIN.left - MARGIN.right;
  const plotH = HEIGHT - MARGIN.top - MARGIN.bottom;
  return [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" viewBox="0 0 ${WIDTH} ${HEIGHT}" font-family="sans-serif">`,
    `<defs><clipPath id="plot"><rect x="${MARGIN.left}" y="${MARGIN.top}" width="${plotW}" height="${plotH}"/></clipPath></defs>`,
    `<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`,
    ...body,
    "</svg>",
  ].join("\n");
}

export function axes(
  xScale: Scale,
  yScale: Scale,
  xLabel: string,
  yLabel: string,
  nTicks = 5,
): string[] {
  const x0 = MARGIN.left;
  const x1 = WIDTH - MARGIN.right;
  const y0 = HEIGHT - MARGIN.bottom;
  const y1 = MARGIN.top;
  const parts: string[] = [
    `<line x1="${x0}" y1="${y0}" x2="${x1}" y2="${y0}" stroke="black"/>`,
    `<line x1="${x0}" y1="${y0}" x2="${x0}" y2="${y1}" stroke="black"/>`,
  ];
  for (let i = 0; i <= nTicks; i++) {
    const tx = xScale.domain[0] + (i / nTicks) * (xScale.domain[1] - xScale.domain[0]);
    const px = xScale(tx);
    parts.push(
      `<line x1="${fmt(px)}" y1="${y0}" x2="${fmt(px)}" y2="${y0 + 6}" stroke="black"/>`,
      `<text x="${fmt(px)}" y="${y0 + 22}" text-anchor="middle" font-size="12">${fmt(tx)}</text>`,
    );
    const ty = yScale.domain[0] + (i / nTicks) * (yScale.domain[1] - yScale.domain[0]);
    const py = yScale(ty);
    parts.push(
      `<line x1="${x0 - 6}" y1="${fmt(py)}" x2="${x0}" y2="${fmt(py)}" stroke="black"/>`,
      `<text x="${x0 - 10}" y="${fmt(py + 4)}" text-anchor="end" font-size="12">${fmt(ty)}</text>`,
    );
  }
  parts.push(
    `<text x="${(x0 + x1) / 2}" y="${HEIGHT - 14}" text-anchor="middle" font-size="14">${xLabel}</text>`,
    `<text x="20" y="${(y0 + y1) / 2}" text-anchor="middle" font-size="14" transform="rotate(-90 20 ${(y0 + y1) / 2})">${yLabel}</text>`,
  );
  return parts;
}
