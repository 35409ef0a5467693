// App bootstrap: layout skeleton, state wiring, API calls and event
// delegation. Every panel re-renders from the shared state; heavy panels
// (the distortion heatmap) paint onto canvas after the DOM swap.

import { api, ApiError } from "./api.js";
import { heatmapInto } from "./charts.js";
import { Store } from "./state.js";
import { renderFeatures } from "./views/features.js";
import { renderGenerator } from "./views/generator.js";
import { renderLocal } from "./views/local.js";
import { renderRanking } from "./views/ranking.js";
import { renderRuns } from "./views/runs.js";
import { renderSpaces } from "./views/spaces.js";

export function layout(root: HTMLElement): void {
  root.innerHTML = `
    <header><h1>fairrank</h1>
      <span class="subtitle">rank · measure · identify · mitigate</span></header>
    <main>
      <aside id="generator" class="card"></aside>
      <section class="center">
        <div id="ranking" class="card"></div>
        <div id="spaces" class="card"></div>
        <div id="features" class="card"></div>
      </section>
      <aside class="right">
        <div id="local" class="card"></div>
        <div id="runs" class="card"></div>
      </aside>
    </main>`;
}

export function renderAll(root: HTMLElement, store: Store): void {
  const state = store.state;
  renderGenerator(root.querySelector("#generator")!, state);
  renderRanking(root.querySelector("#ranking")!, state);
  renderSpaces(root.querySelector("#spaces")!, state);
  renderLocal(root.querySelector("#local")!, state);
  renderFeatures(root.querySelector("#features")!, state);
  renderRuns(root.querySelector("#runs")!, state);
  const canvas = root.querySelector<HTMLCanvasElement>("#distortion-canvas");
  if (canvas && state.run?.distortion) {
    heatmapInto(canvas, state.run.n, state.run.distortion, state.run.ranking.protected);
  }
}

function describe(err: unknown): string {
  if (err instanceof ApiError) {
    return `${err.error_code}${err.phase ? ` [${err.phase}]` : ""}: ${err.message}`;
  }
  return String(err);
}

export function wire(root: HTMLElement, store: Store): void {
  let hoverTimer: number | undefined;

  async function loadFeatures(datasetId: string, sensitive?: string, protectedValue?: string) {
    const doc = await api.features(datasetId, sensitive, protectedValue);
    store.update((s) => {
      s.datasetId = datasetId;
      s.featureDoc = doc;
      s.sensitive = doc.sensitive;
      s.protectedValue = doc.protected;
      if (s.selected.size === 0) s.selected = new Set(doc.features.map((f) => f.name));
      s.k = Math.min(s.k, doc.n);
      s.error = null;
    });
  }

  async function loadRun(runId: number) {
    const run = await api.run(runId);
    store.update((s) => {
      s.run = run;
      s.sliderK = run.ranking.k;
      s.viewWindow = [1, run.n];
      s.hoverId = null;
      s.detail = null;
      s.error = null;
    });
  }

  async function refreshRuns() {
    const runs = await api.runs();
    store.update((s) => {
      s.runs = runs;
    });
  }

  async function hover(runId: number, instance: number) {
    try {
      const detail = await api.instance(runId, instance);
      // ignore stale responses: only apply if the pointer is still there
      if (store.state.hoverId === instance) {
        store.update((s) => {
          s.detail = detail;
        });
      }
    } catch (err) {
      store.update((s) => {
        s.error = describe(err);
      });
    }
  }

  root.addEventListener("change", async (ev) => {
    const el = ev.target as HTMLInputElement;
    try {
      if (el.id === "sensitive-pick" && store.state.datasetId) {
        const doc = store.state.featureDoc!;
        const feature = doc.features.find((f) => f.name === el.value);
        const firstLevel = feature?.categories?.[0];
        await loadFeatures(store.state.datasetId, el.value, firstLevel);
      } else if (el.id === "protected-pick" && store.state.datasetId) {
        await loadFeatures(store.state.datasetId, store.state.sensitive ?? undefined, el.value);
      } else if (el.dataset.feature) {
        store.update((s) => {
          if (el.checked) s.selected.add(el.dataset.feature!);
          else s.selected.delete(el.dataset.feature!);
        });
      } else if (el.id === "model-pick") {
        store.update((s) => {
          s.model = el.value as "logistic" | "acf_logistic";
        });
      } else if (el.id === "k-input") {
        store.update((s) => {
          s.k = parseInt(el.value, 10) || 1;
        });
      } else if (el.id === "h-input") {
        store.update((s) => {
          s.h = parseInt(el.value, 10) || 4;
        });
      } else if (el.id === "seed-input") {
        store.update((s) => {
          s.seed = parseInt(el.value, 10) || 0;
        });
      } else if (el.id === "rerank-toggle") {
        store.update((s) => {
          s.rerank.enabled = el.checked;
        });
      } else if (el.id === "rerank-p") {
        store.update((s) => {
          s.rerank.p = parseFloat(el.value) || 0;
        });
      } else if (el.id === "rerank-seed") {
        store.update((s) => {
          s.rerank.seed = parseInt(el.value, 10) || 0;
        });
      } else if (el.id === "win-lo" || el.id === "win-hi") {
        const lo = parseInt((root.querySelector("#win-lo") as HTMLInputElement).value, 10) || 1;
        const hi = parseInt((root.querySelector("#win-hi") as HTMLInputElement).value, 10) || 1;
        store.update((s) => {
          const n = s.run?.n ?? 1;
          s.viewWindow = [Math.max(1, Math.min(lo, n)), Math.max(lo, Math.min(hi, n))];
        });
      }
    } catch (err) {
      store.update((s) => {
        s.error = describe(err);
      });
    }
  });

  // the top-k slider is read-only over stored curves: no network traffic
  root.addEventListener("input", (ev) => {
    const el = ev.target as HTMLInputElement;
    if (el.id === "k-slider") {
      store.update((s) => {
        s.sliderK = parseInt(el.value, 10) || 1;
      });
    }
  });

  root.addEventListener("click", async (ev) => {
    const target = ev.target as HTMLElement;
    try {
      if (target.id === "upload-btn") {
        const csv = (root.querySelector("#csv-file") as HTMLInputElement).files?.[0];
        const schema = (root.querySelector("#schema-file") as HTMLInputElement).files?.[0];
        if (!csv || !schema) {
          store.update((s) => {
            s.error = "choose both a CSV file and a schema file";
          });
          return;
        }
        const datasetId = await api.uploadDataset(csv, schema);
        await loadFeatures(datasetId);
      } else if (target.id === "run-btn") {
        const s0 = store.state;
        if (!s0.datasetId || s0.busy) return;
        store.update((s) => {
          s.busy = true;
          s.error = null;
        });
        try {
          const config: Record<string, unknown> = {
            dataset_id: s0.datasetId,
            features: [...s0.selected],
            sensitive: s0.sensitive,
            protected: s0.protectedValue,
            model_kind: s0.model,
            k: s0.k,
            h: s0.h,
            seed: s0.seed,
          };
          if (s0.rerank.enabled) config.rerank = { p: s0.rerank.p, seed: s0.rerank.seed };
          const run = await api.createRun(config);
          await refreshRuns();
          store.update((s) => {
            s.run = run;
            s.sliderK = run.ranking.k;
            s.viewWindow = [1, run.n];
            s.hoverId = null;
            s.detail = null;
          });
        } finally {
          store.update((s) => {
            s.busy = false;
          });
        }
      } else {
        const tab = target.closest<HTMLElement>("[data-tab]");
        if (tab) {
          store.update((s) => {
            s.tab = tab.dataset.tab as "individual" | "group";
          });
          return;
        }
        const row = target.closest<HTMLElement>("[data-run]");
        if (row) await loadRun(parseInt(row.dataset.run!, 10));
      }
    } catch (err) {
      store.update((s) => {
        s.busy = false;
        s.error = describe(err);
      });
    }
  });

  root.addEventListener("mouseover", (ev) => {
    const el = (ev.target as HTMLElement).closest<HTMLElement>("[data-instance]");
    if (!el || !store.state.run) return;
    const id = parseInt(el.dataset.instance!, 10);
    if (store.state.hoverId === id) return;
    store.update((s) => {
      s.hoverId = id;
    });
    window.clearTimeout(hoverTimer);
    hoverTimer = window.setTimeout(() => void hover(store.state.run!.run_id, id), 60);
  });

  void refreshRuns().catch((err) =>
    store.update((s) => {
      s.error = describe(err);
    }),
  );
}

export function boot(root: HTMLElement): Store {
  const store = new Store();
  layout(root);
  store.subscribe(() => renderAll(root, store));
  wire(root, store);
  renderAll(root, store);
  return store;
}

if (typeof document !== "undefined" && document.querySelector("#app")) {
  boot(document.querySelector("#app") as HTMLElement);
}
