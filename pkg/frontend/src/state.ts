// Single mutable view state with a change-notification hook. All views render
// from this object; interactions mutate it through update() so every panel
// stays consistent (hover highlighting in particular spans three panels).

import type { DatasetFeatures, InstanceDetail, RunDocument, RunSummary } from "./api.js";

export interface RerankDraft {
  enabled: boolean;
  p: number;
  seed: number;
}

export interface ViewState {
  datasetId: string | null;
  featureDoc: DatasetFeatures | null;
  selected: Set<string>;
  sensitive: string | null;
  protectedValue: string | null;
  model: "logistic" | "acf_logistic";
  k: number;
  h: number;
  seed: number;
  rerank: RerankDraft;
  runs: RunSummary[];
  run: RunDocument | null;
  sliderK: number; // within-ranking threshold explored in the Ranking view
  viewWindow: [number, number]; // rank interval shown in the bar strip
  hoverId: number | null;
  detail: InstanceDetail | null;
  tab: "individual" | "group";
  busy: boolean;
  error: string | null;
}

export function initialState(): ViewState {
  return {
    datasetId: null,
    featureDoc: null,
    selected: new Set(),
    sensitive: null,
    protectedValue: null,
    model: "logistic",
    k: 45,
    h: 4,
    seed: 0,
    rerank: { enabled: false, p: 0.5, seed: 0 },
    runs: [],
    run: null,
    sliderK: 45,
    viewWindow: [1, 1],
    hoverId: null,
    detail: null,
    tab: "individual",
    busy: false,
    error: null,
  };
}

type Listener = (state: ViewState) => void;

export class Store {
  state: ViewState = initialState();
  private listeners: Listener[] = [];

  subscribe(fn: Listener): void {
    this.listeners.push(fn);
  }

  update(mutate: (state: ViewState) => void): void {
    mutate(this.state);
    for (const fn of this.listeners) fn(this.state);
  }
}
