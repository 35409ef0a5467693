// Typed client for the engine's JSON HTTP API. The UI never recomputes a
// measure: everything rendered comes from these payloads.

export interface Histogram {
  kind: "continuous" | "categorical";
  bin_edges?: number[];
  levels?: string[];
  s_plus: number[];
  s_minus: number[];
}

export interface FeatureInfo {
  name: string;
  kind: "continuous" | "categorical";
  is_sensitive: boolean;
  correlation: number | null;
  histogram: Histogram;
  range?: [number, number];
  categories?: string[];
}

export interface DatasetFeatures {
  dataset_id: string;
  n: number;
  target_positive_rate: number;
  sensitive: string;
  protected: string;
  s_plus_size: number;
  s_minus_size: number;
  features: FeatureInfo[];
}

export interface Curves {
  k: number[];
  gfdcg: (number | null)[];
  precision: (number | null)[];
  parity: (number | null)[];
}

export interface Measures {
  group_separation: number;
  group_skew: number | null;
  group_skew_infinite: boolean;
  rnn_mean: number;
  rnn_s_plus: number;
  rnn_s_minus: number;
  gfdcg: number | null;
  gfdcg_infinite: boolean;
  parity: number | null;
  parity_infinite: boolean;
  utility: number;
  precision: number;
  curves: Curves;
  instances: { id: number; rnn: number; rnn_gain: number; gain_delta: number }[];
}

export interface AuditFeature {
  name: string;
  kind: string;
  correlation: number | null;
  distortion_score: number;
  perturbation: { gfdcg_drop: number | null; utility_drop: number | null; ranking: number[] };
}

export interface AuditReport {
  features: AuditFeature[];
  outliers: number[];
  non_outliers: number[];
  outliers_degenerate: boolean;
  instance_distortions: number[];
}

export interface RunDocument {
  run_id: number;
  created_at: string;
  config: {
    dataset_id: string;
    features: string[];
    sensitive: string;
    protected: string;
    model_kind: string;
    k: number;
    h: number;
    seed: number;
    rerank: { p: number; seed: number } | null;
  };
  n: number;
  ranking: {
    k: number;
    reranked: boolean;
    order: number[];
    rank: number[];
    scores: number[];
    protected: boolean[];
    labels: number[];
  };
  groups: { s_plus: number[]; s_minus: number[] };
  measures: Measures;
  audit: AuditReport;
  embedding: [number, number][];
  neighbors: number[][];
  distortion: number[] | null;
}

export interface RunSummary {
  run_id: number;
  created_at: string;
  config: RunDocument["config"];
  n: number;
  parity: number | null;
  rnn_mean: number;
  utility: number;
  ideal_parity: number;
  ideal_rnn_mean: number;
  ideal_utility: number;
}

export interface InstanceFeatureRow {
  name: string;
  kind: string;
  own: number | string;
  neighbors_mean?: number;
  neighbors_freq?: Record<string, number>;
  group_means?: { s_plus: number; s_minus: number };
  group_freq?: { s_plus: Record<string, number>; s_minus: Record<string, number> };
}

export interface InstanceDetail {
  id: number;
  rnn: number;
  rnn_gain: number;
  gain_delta: number;
  rank: number;
  score: number;
  protected: boolean;
  label: number;
  neighbors: number[];
  features: InstanceFeatureRow[];
}

export class ApiError extends Error {
  constructor(
    public error_code: string,
    public phase: string | null,
    message: string,
  ) {
    super(message);
  }
}

export function apiBase(): string {
  const param = new URLSearchParams(window.location.search).get("api_base");
  if (param !== null) return param.replace(/\/$/, "");
  const injected = (window as { __API_BASE__?: string }).__API_BASE__;
  return injected ?? "";
}

async function raise(resp: Response): Promise<never> {
  let code = `HTTP ${resp.status}`;
  let phase: string | null = null;
  let message = resp.statusText;
  try {
    const doc = await resp.json();
    code = doc.error_code ?? code;
    phase = doc.phase ?? null;
    message = doc.message ?? message;
  } catch {
    // non-JSON error body; keep the HTTP status text
  }
  throw new ApiError(code, phase, message);
}

async function getJSON<T>(path: string): Promise<T> {
  const resp = await fetch(apiBase() + path);
  if (!resp.ok) await raise(resp);
  return resp.json() as Promise<T>;
}

export const api = {
  uploadDataset: async (csv: File, schema: File): Promise<string> => {
    const form = new FormData();
    form.append("csv", csv);
    form.append("schema", schema);
    const resp = await fetch(apiBase() + "/api/datasets", { method: "POST", body: form });
    if (!resp.ok) await raise(resp);
    return (await resp.json()).dataset_id;
  },
  datasets: () => getJSON<{ dataset_ids: string[] }>("/api/datasets"),
  features: (datasetId: string, sensitive?: string, protectedValue?: string) => {
    const params = new URLSearchParams();
    if (sensitive) params.set("sensitive", sensitive);
    if (protectedValue) params.set("protected", protectedValue);
    const suffix = params.toString() ? `?${params}` : "";
    return getJSON<DatasetFeatures>(`/api/datasets/${datasetId}/features${suffix}`);
  },
  createRun: async (config: Record<string, unknown>): Promise<RunDocument> => {
    const resp = await fetch(apiBase() + "/api/runs", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(config),
    });
    if (!resp.ok) await raise(resp);
    return resp.json();
  },
  runs: () => getJSON<RunSummary[]>("/api/runs"),
  run: (id: number) => getJSON<RunDocument>(`/api/runs/${id}`),
  curves: (id: number) => getJSON<Curves>(`/api/runs/${id}/curves`),
  instance: (id: number, i: number) => getJSON<InstanceDetail>(`/api/runs/${id}/instances/${i}`),
  audit: (id: number) => getJSON<AuditReport>(`/api/runs/${id}/audit`),
  compare: (ids: number[]) => getJSON<RunSummary[]>(`/api/runs/compare?ids=${ids.join(",")}`),
};
