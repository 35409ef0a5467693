// Local inspection: instance-level bias readouts and the feature table
// comparing the hovered individual's values with its neighbors' averages;
// the group tab shows per-group means instead.

import type { InstanceDetail, InstanceFeatureRow, RunDocument } from "../api.js";
import { esc } from "../charts.js";
import { fmt12, fmtShort } from "../format.js";
import type { ViewState } from "../state.js";

function freqText(freq: Record<string, number>): string {
  return Object.entries(freq)
    .filter(([, v]) => v > 0)
    .map(([level, v]) => `${esc(level)} ${fmtShort(v, 2)}`)
    .join(", ");
}

function instanceRow(f: InstanceFeatureRow): string {
  if (f.kind === "continuous") {
    const own = f.own as number;
    const nb = f.neighbors_mean ?? NaN;
    const delta = own - nb;
    return `<tr><td>${esc(f.name)}</td><td>${fmtShort(own)}</td><td>${fmtShort(nb)}</td>
      <td class="${Math.abs(delta) > 1e-9 ? "delta" : ""}">${fmtShort(delta)}</td></tr>`;
  }
  return `<tr><td>${esc(f.name)}</td><td>${esc(String(f.own))}</td>
    <td colspan="2">${freqText(f.neighbors_freq ?? {})}</td></tr>`;
}

function groupRow(f: InstanceFeatureRow): string {
  if (f.kind === "continuous") {
    const g = f.group_means!;
    return `<tr><td>${esc(f.name)}</td><td>${fmtShort(g.s_plus)}</td><td>${fmtShort(g.s_minus)}</td></tr>`;
  }
  const g = f.group_freq!;
  return `<tr><td>${esc(f.name)}</td><td>${freqText(g.s_plus)}</td><td>${freqText(g.s_minus)}</td></tr>`;
}

export function renderLocal(root: HTMLElement, state: ViewState): void {
  const run = state.run;
  if (!run) {
    root.innerHTML = `<h2>Local inspection</h2><p class="muted">No run loaded.</p>`;
    return;
  }
  if (state.tab === "group") {
    const detail = state.detail;
    const rows = detail ? detail.features.map(groupRow).join("") : "";
    root.innerHTML = `<h2>Local inspection · groups</h2>
      ${detail
        ? `<table class="detail-table"><thead><tr><th>feature</th><th>S+ mean</th><th>S− mean</th></tr></thead>
           <tbody>${rows}</tbody></table>`
        : `<p class="muted">Hover an individual to load the group means table.</p>`}`;
    return;
  }
  const detail = state.detail;
  if (!detail) {
    root.innerHTML = `<h2>Local inspection</h2>
      <p class="muted">Hover an individual in any space panel.</p>`;
    return;
  }
  const gainClass = detail.gain_delta >= 0 ? "gain-pos" : "gain-neg";
  root.innerHTML = `<h2>Local inspection · id ${detail.id}</h2>
    <div class="readout"><span>rank</span><b>${detail.rank}</b></div>
    <div class="readout"><span>group</span><b>${detail.protected ? "S+" : "S−"}</b></div>
    <div class="readout"><span>label</span><b>${detail.label}</b></div>
    <div class="readout"><span>rNN</span><b data-measure="rnn">${fmt12(detail.rnn)}</b></div>
    <div class="readout"><span>rNN gain − 1</span>
      <b class="${gainClass}" data-measure="gain_delta">${fmt12(detail.gain_delta)}</b></div>
    <div class="readout"><span>neighbors</span><b>${detail.neighbors.join(", ")}</b></div>
    <table class="detail-table">
      <thead><tr><th>feature</th><th>own</th><th>neighbors'</th><th>Δ</th></tr></thead>
      <tbody>${detail.features.map(instanceRow).join("")}</tbody>
    </table>`;
}
