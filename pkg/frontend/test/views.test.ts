// @vitest-environment jsdom
//
// UI consistency against frozen engine payloads: measure readouts must equal
// the API's canonical strings, the k=n slider position must show parity 1,
// hover highlighting must use exactly the instance endpoint's neighbor ids,
// and a full 250-instance dashboard render must stay under one second.

import { beforeEach, describe, expect, it, vi } from "vitest";
import { readFileSync } from "node:fs";
import { fileURLToPath } from "node:url";
import { dirname, join } from "node:path";

import type { DatasetFeatures, InstanceDetail, RunDocument, RunSummary } from "../src/api.js";
import { fmt12 } from "../src/format.js";
import { initialState, Store } from "../src/state.js";
import { boot, layout, renderAll } from "../src/main.js";
import { renderRanking } from "../src/views/ranking.js";
import { renderRuns } from "../src/views/runs.js";
import { renderSpaces } from "../src/views/spaces.js";
import { renderLocal } from "../src/views/local.js";

const here = dirname(fileURLToPath(import.meta.url));
const load = <T>(name: string): T =>
  JSON.parse(readFileSync(join(here, "fixtures", name), "utf-8")) as T;

const runFixtureText = readFileSync(join(here, "fixtures", "run.json"), "utf-8");
const runFixture = JSON.parse(runFixtureText) as RunDocument;
const runsList = load<RunSummary[]>("runs_list.json");
const featuresDoc = load<DatasetFeatures>("features.json");
const instance5 = load<InstanceDetail>("instance5.json");

function loadedState() {
  const s = initialState();
  s.run = runFixture;
  s.runs = runsList;
  s.featureDoc = featuresDoc;
  s.datasetId = featuresDoc.dataset_id;
  s.sensitive = featuresDoc.sensitive;
  s.protectedValue = featuresDoc.protected;
  s.selected = new Set(runFixture.config.features);
  s.sliderK = runFixture.ranking.k;
  s.viewWindow = [1, runFixture.n];
  return s;
}

describe("measure rendering equals API values", () => {
  it("ranking readouts are the canonical strings", () => {
    const root = document.createElement("div");
    renderRanking(root, loadedState());
    const text = (name: string) =>
      root.querySelector(`[data-measure="${name}"]`)!.textContent;
    expect(text("parity")).toBe(fmt12(runFixture.measures.parity as number));
    expect(text("utility (linear nDCG)")).toBe(fmt12(runFixture.measures.utility));
    expect(text("rNN mean")).toBe(fmt12(runFixture.measures.rnn_mean));
    const k = runFixture.ranking.k;
    expect(text("GFDCG")).toBe(fmt12(runFixture.measures.curves.gfdcg[k - 1] as number));
    expect(text("precision")).toBe(fmt12(runFixture.measures.curves.precision[k - 1] as number));
    // the rendered strings appear verbatim inside the raw API response body
    expect(runFixtureText).toContain(`"rnn_mean":${text("rNN mean")}`);
    expect(runFixtureText).toContain(`"utility":${text("utility (linear nDCG)")}`);
  });

  it("ranking list gauges show canonical strings", () => {
    const root = document.createElement("div");
    renderRuns(root, loadedState());
    const row = root.querySelector(`[data-run="${runFixture.run_id}"]`)!;
    const summary = runsList.find((r) => r.run_id === runFixture.run_id)!;
    const values = Array.from(row.querySelectorAll(".gauge-value")).map(
      (el) => el.textContent,
    );
    expect(values).toEqual([
      fmt12(summary.parity as number),
      fmt12(summary.rnn_mean),
      fmt12(summary.utility),
    ]);
  });

  it("slider at k=n shows parity exactly 1", () => {
    const state = loadedState();
    state.sliderK = runFixture.n;
    const root = document.createElement("div");
    renderRanking(root, state);
    // the within-ranking parity readout (the second of the two) follows the slider
    const all = Array.from(root.querySelectorAll(`[data-measure="parity"]`));
    expect(all.length).toBe(2);
    expect(all[all.length - 1].textContent).toBe("1");
  });
});

describe("hover neighbors come from the instance endpoint", () => {
  it("highlights exactly the endpoint's neighbor ids in all space panels", () => {
    const state = loadedState();
    state.hoverId = instance5.id;
    state.detail = instance5;
    const root = document.createElement("div");
    renderSpaces(root, state);
    const highlighted = Array.from(
      root.querySelectorAll(`#input-scatter [data-instance][stroke="#1f78ff"]`),
    ).map((el) => parseInt((el as HTMLElement).dataset.instance!, 10));
    expect(highlighted.sort((a, b) => a - b)).toEqual(
      [...instance5.neighbors].sort((a, b) => a - b),
    );
    const stripHighlighted = Array.from(
      root.querySelectorAll(`#output-strip [data-instance][stroke="#1f78ff"]`),
    ).map((el) => parseInt((el as HTMLElement).dataset.instance!, 10));
    expect(stripHighlighted.sort((a, b) => a - b)).toEqual(
      [...instance5.neighbors].sort((a, b) => a - b),
    );
    const hovered = root.querySelector(`#input-scatter [data-instance="5"]`)!;
    expect(hovered.getAttribute("stroke")).toBe("#000000");
  });

  it("local inspection renders the endpoint's values verbatim", () => {
    const state = loadedState();
    state.detail = instance5;
    state.hoverId = instance5.id;
    const root = document.createElement("div");
    renderLocal(root, state);
    expect(root.querySelector(`[data-measure="rnn"]`)!.textContent).toBe(
      fmt12(instance5.rnn),
    );
    expect(root.querySelector(`[data-measure="gain_delta"]`)!.textContent).toBe(
      fmt12(instance5.gain_delta),
    );
    expect(root.textContent).toContain(instance5.neighbors.join(", "));
  });

  it("hover wiring fetches /instances/{i} and stores its neighbors", async () => {
    const calls: string[] = [];
    vi.stubGlobal("fetch", (url: string) => {
      calls.push(String(url));
      const body = String(url).includes("/instances/")
        ? JSON.stringify(instance5)
        : String(url).endsWith("/api/runs")
          ? JSON.stringify(runsList)
          : "{}";
      return Promise.resolve(new Response(body, { status: 200 }));
    });
    try {
      const root = document.createElement("div");
      document.body.appendChild(root);
      const store = boot(root);
      store.update((s) => Object.assign(s, loadedState()));
      const bar = root.querySelector<HTMLElement>(`#rank-strip [data-instance="5"]`)!;
      bar.dispatchEvent(new MouseEvent("mouseover", { bubbles: true }));
      await new Promise((resolve) => setTimeout(resolve, 150));
      expect(calls.some((u) => u.endsWith(`/api/runs/${runFixture.run_id}/instances/5`))).toBe(true);
      expect(store.state.detail?.neighbors).toEqual(instance5.neighbors);
      root.remove();
    } finally {
      vi.unstubAllGlobals();
    }
  });
});

describe("interaction contracts", () => {
  beforeEach(() => {
    document.body.innerHTML = "";
  });

  it("slider movement issues no network request", () => {
    const fetchSpy = vi.fn(() =>
      Promise.resolve(new Response("[]", { status: 200 })),
    );
    vi.stubGlobal("fetch", fetchSpy);
    try {
      const root = document.createElement("div");
      document.body.appendChild(root);
      const store = boot(root);
      store.update((s) => Object.assign(s, loadedState()));
      fetchSpy.mockClear();
      const slider = root.querySelector<HTMLInputElement>("#k-slider")!;
      slider.value = String(runFixture.n);
      slider.dispatchEvent(new Event("input", { bubbles: true }));
      expect(store.state.sliderK).toBe(runFixture.n);
      expect(fetchSpy).not.toHaveBeenCalled();
      const parities = root
        .querySelector("#ranking")!
        .querySelectorAll(`[data-measure="parity"]`);
      expect(parities[parities.length - 1].textContent).toBe("1");
    } finally {
      vi.unstubAllGlobals();
    }
  });

  it("run button disabled with zero features selected", () => {
    const root = document.createElement("div");
    document.body.appendChild(root);
    layout(root);
    const store = new Store();
    store.update((s) => {
      Object.assign(s, loadedState());
      s.selected = new Set();
    });
    renderAll(root, store);
    const btn = root.querySelector<HTMLButtonElement>("#run-btn")!;
    expect(btn.disabled).toBe(true);
  });

  it("renders the full 250-instance dashboard in under a second", () => {
    const root = document.createElement("div");
    document.body.appendChild(root);
    layout(root);
    const store = new Store();
    store.update((s) => Object.assign(s, loadedState()));
    const t0 = performance.now();
    renderAll(root, store);
    const elapsed = performance.now() - t0;
    expect(root.querySelectorAll("#rank-strip [data-instance]").length).toBe(250);
    expect(elapsed).toBeLessThan(1000);
  });
});
