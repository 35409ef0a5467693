// Small SVG/canvas helpers. No charting library: the encodings (rank bars,
// trend lines, MDS scatter, distortion heatmap, gauges) are simple enough to
// emit directly, and keeping the dependency surface empty lets the bundle be
// plain tsc output.

export const COLORS = {
  protected: "#e08214", // protected group hue
  nonProtected: "#35978f", // non-protected group hue
  fairness: "#2166ac", // fairness trend (dark blue)
  utility: "#b2182b", // utility trend (dark red)
  between: [123, 50, 148] as const, // between-group pair hue (purple)
  within: [231, 41, 138] as const, // within-group pair hue (pink)
  highlight: "#000000",
  neighbor: "#1f78ff",
};

export function esc(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function scaleLinear(d0: number, d1: number, r0: number, r1: number) {
  const span = d1 - d0;
  return (v: number) => (span === 0 ? (r0 + r1) / 2 : r0 + ((v - d0) / span) * (r1 - r0));
}

export function polyline(points: Array<[number, number] | null>, stroke: string, width = 1.5): string {
  const runs: string[] = [];
  let current: string[] = [];
  for (const pt of points) {
    if (pt === null) {
      if (current.length > 1) runs.push(current.join(" "));
      current = [];
    } else {
      current.push(`${pt[0].toFixed(1)},${pt[1].toFixed(1)}`);
    }
  }
  if (current.length > 1) runs.push(current.join(" "));
  return runs
    .map((pts) => `<polyline points="${pts}" fill="none" stroke="${stroke}" stroke-width="${width}"/>`)
    .join("");
}

export function hatchDefs(): string {
  return `<defs>
    <pattern id="hatch" width="4" height="4" patternTransform="rotate(45)" patternUnits="userSpaceOnUse">
      <rect width="4" height="4" fill="white"/>
      <line x1="0" y1="0" x2="0" y2="4" stroke="#444" stroke-width="1.6"/>
    </pattern>
  </defs>`;
}

export function miniHistogram(
  counts: number[], width: number, height: number, color: string,
): string {
  const max = Math.max(1, ...counts);
  const bw = width / counts.length;
  const bars = counts
    .map((c, i) => {
      const h = (c / max) * (height - 1);
      return `<rect x="${(i * bw).toFixed(1)}" y="${(height - h).toFixed(1)}" width="${Math.max(
        bw - 1,
        1,
      ).toFixed(1)}" height="${h.toFixed(1)}" fill="${color}"/>`;
    })
    .join("");
  return `<svg width="${width}" height="${height}" class="mini-hist">${bars}</svg>`;
}

export function gauge(value: number | null, ideal: number, max: number, width: number): string {
  const h = 16;
  const sc = scaleLinear(0, max, 2, width - 2);
  const v = value === null ? max : Math.min(value, max);
  const parts = [
    `<line x1="2" y1="${h / 2}" x2="${width - 2}" y2="${h / 2}" stroke="#ccc" stroke-width="2"/>`,
    // ideal marker: diamond
    `<rect x="${sc(ideal) - 4}" y="${h / 2 - 4}" width="8" height="8" transform="rotate(45 ${sc(
      ideal,
    )} ${h / 2})" fill="none" stroke="#555" stroke-width="1.4"/>`,
    // current score: triangle
    `<path d="M ${sc(v) - 5} ${h - 2} L ${sc(v) + 5} ${h - 2} L ${sc(v)} ${h / 2 + 1} Z" fill="${
      COLORS.fairness
    }"/>`,
  ];
  return `<svg width="${width}" height="${h}" class="gauge">${parts.join("")}</svg>`;
}

export function heatmapInto(
  canvas: HTMLCanvasElement,
  n: number,
  distortion: number[],
  isProtected: boolean[],
): void {
  canvas.width = n;
  canvas.height = n;
  const ctx = canvas.getContext("2d");
  if (!ctx) return; // e.g. jsdom in tests
  const img = ctx.createImageData(n, n);
  const [br, bg, bb] = COLORS.between;
  const [wr, wg, wb] = COLORS.within;
  for (let i = 0; i < n; i++) {
    for (let j = 0; j < n; j++) {
      const v = distortion[i * n + j];
      const between = isProtected[i] !== isProtected[j];
      const [r, g, b] = between ? [br, bg, bb] : [wr, wg, wb];
      // darkness proportional to distortion; zero distortion stays white
      const t = Math.max(0, Math.min(1, v));
      const o = (i * n + j) * 4;
      img.data[o] = Math.round(255 + (r - 255) * t);
      img.data[o + 1] = Math.round(255 + (g - 255) * t);
      img.data[o + 2] = Math.round(255 + (b - 255) * t);
      img.data[o + 3] = 255;
    }
  }
  ctx.putImageData(img, 0, 0);
}
