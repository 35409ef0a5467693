// Feature inspection: per-feature outlier-vs-all distributions with the
// distortion score, and the perturbation mini-chart (bars ordered by
// after-perturbation rank, height = before-perturbation rank, blue = was in
// the top-k before perturbation).

import type { AuditFeature, RunDocument } from "../api.js";
import { esc, scaleLinear } from "../charts.js";
import { fmt12 } from "../format.js";
import type { ViewState } from "../state.js";

const HIST_W = 150;
const HIST_H = 40;
const PERT_W = 220;
const PERT_H = 46;

function outlierHistogram(f: AuditFeature & { histogram?: { all: number[]; outliers: number[] } }): string {
  const hist = f.histogram;
  if (!hist) return "";
  const max = Math.max(1, ...hist.all);
  const bw = HIST_W / hist.all.length;
  const bars = hist.all
    .map((c, i) => {
      const hAll = (c / max) * (HIST_H - 2);
      const hOut = (hist.outliers[i] / max) * (HIST_H - 2);
      return `<rect x="${(i * bw).toFixed(1)}" y="${(HIST_H - hAll).toFixed(1)}" width="${(bw - 1).toFixed(1)}" height="${hAll.toFixed(1)}" fill="#bbb"/>
        <rect x="${(i * bw).toFixed(1)}" y="${(HIST_H - hOut).toFixed(1)}" width="${(bw - 1).toFixed(1)}" height="${hOut.toFixed(1)}" fill="#d7301f"/>`;
    })
    .join("");
  return `<svg width="${HIST_W}" height="${HIST_H}" title="all individuals (gray) vs outliers (red)">${bars}</svg>`;
}

function perturbationChart(run: RunDocument, f: AuditFeature): string {
  const n = run.n;
  const sx = scaleLinear(0, n, 0, PERT_W);
  const w = Math.max(PERT_W / n - 0.3, 0.6);
  const k = run.config.k;
  const bars = f.perturbation.ranking
    .map((id, pos) => {
      const before = run.ranking.rank[id]; // 1 = best
      const h = ((n - before + 1) / n) * (PERT_H - 2);
      const wasTopK = before <= k;
      return `<rect x="${sx(pos).toFixed(1)}" y="${(PERT_H - h).toFixed(1)}" width="${w.toFixed(1)}" height="${h.toFixed(1)}"
        fill="${wasTopK ? "#6baed6" : "#ccc"}" fill-opacity="${wasTopK ? 0.85 : 0.8}"/>`;
    })
    .join("");
  return `<svg width="${PERT_W}" height="${PERT_H}" title="x: rank after perturbing this feature; height: rank before (blue = was in top-k)">${bars}</svg>`;
}

export function renderFeatures(root: HTMLElement, state: ViewState): void {
  const run = state.run;
  if (!run) {
    root.innerHTML = `<h2>Feature inspection</h2><p class="muted">No run loaded.</p>`;
    return;
  }
  const audit = run.audit;
  const rows = audit.features
    .map(
      (f) => `<tr>
        <td>${esc(f.name)}</td>
        <td>${f.correlation === null ? `<span class="muted">sensitive</span>` : fmt12(f.correlation)}</td>
        <td>${fmt12(f.distortion_score)}<br>${outlierHistogram(f as never)}</td>
        <td>${perturbationChart(run, f)}<br>
          <span class="muted">ΔGFDCG ${f.perturbation.gfdcg_drop === null ? "∞" : fmt12(f.perturbation.gfdcg_drop)},
          Δutility ${f.perturbation.utility_drop === null ? "∞" : fmt12(f.perturbation.utility_drop)}</span></td>
      </tr>`,
    )
    .join("");
  root.innerHTML = `<h2>Feature inspection</h2>
    <div class="muted">outliers: ${audit.outliers.length} instance(s) in the top distortion tail
      ${audit.outliers_degenerate ? "(degenerate: all tied)" : ""}</div>
    <table class="audit-table">
      <thead><tr><th>feature</th><th>correlation</th><th>distortion (outliers vs all)</th><th>perturbation</th></tr></thead>
      <tbody>${rows}</tbody>
    </table>`;
}
