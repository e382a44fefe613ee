// Typed client for the snmap HTTP API. All mutations are funneled
// through a single in-flight queue per client so the UI can never race
// the server's per-session state machine.

export interface ScanParams {
  mode: 'row' | 'col' | 'blank';
  nframe: number;
  nrow: number;
  ncol: number;
  row_id?: string;
  col_id?: number;
}

export interface SessionResource {
  id: string;
  state: string;
  progress: number;
  seed: number;
  preprocessed: boolean;
  frame_count: number | null;
  frame_rows: number | null;
  frame_cols: number | null;
  aligned_pairs: number | null;
  warnings: string[];
}

export interface Rect {
  row0: number;
  col0: number;
  height: number;
  width: number;
}

export interface Point {
  row: number;
  col: number;
}

export interface HistogramResponse {
  which: number;
  bin_edges: number[];
  counts: number[];
  n_pixels: number;
}

export interface ThresholdInfo {
  value: number;
  origin: string;
}

export interface SegmentResponse {
  state: string;
  thresholds: Record<string, ThresholdInfo>;
}

export interface Transform {
  theta: number;
  s_x: number;
  s_y: number;
}

export interface Temporal {
  j_max: number;
  avg_cor: number[];
  excluded: number;
  pairs: [number, number][];
}

export interface RegisterResponse {
  state: string;
  temporal: Temporal;
  transforms: Record<string, Transform>;
  overlay_url: string;
}

export interface ConfirmResponse {
  state: string;
  suggestions: string[];
}

export interface Bandwidth {
  h1: number;
  h2: number;
}

export interface AnalyzeRequest {
  alpha?: number;
  sidedness?: 'two' | 'greater';
  display?: 'basic' | 'all';
  pmap_dim?: 2 | 3;
  polygon?: Point[];
  bandwidths?: Bandwidth[];
  fdr_scope?: 'frame' | 'pooled';
  df_method?: 'two-moment' | 'n-minus-6';
  workers?: number;
}

export interface DfInfo {
  sigma_hat: number;
  delta1: number;
  delta2: number;
  nu: number;
  method: string;
}

export interface AnalyzeResponse {
  state: string;
  frames: number;
  alpha: number;
  sidedness: string;
  bandwidths: Bandwidth;
  df: DfInfo[];
  maps: string[];
  movies: string[];
  warnings: string[];
}

export interface MapPayload {
  kind: string;
  frame: number;
  rows: number;
  cols: number;
  dtype: 'f32le';
  data: string;
}

export interface SurfacePayload {
  rows: number;
  cols: number;
  values: number[];
  range: [number, number];
}

export class ApiError extends Error {
  status: number;
  kind: string;
  suggestion: number | null;

  constructor(status: number, detail: unknown) {
    let message = `HTTP ${status}`;
    let kind = 'http';
    let suggestion: number | null = null;
    if (typeof detail === 'string') {
      message = detail;
    } else if (detail && typeof detail === 'object') {
      const d = detail as Record<string, unknown>;
      if (typeof d.message === 'string') message = d.message;
      if (typeof d.error === 'string') kind = d.error;
      if (typeof d.suggestion === 'number') suggestion = d.suggestion;
    }
    super(message);
    this.status = status;
    this.kind = kind;
    this.suggestion = suggestion;
  }
}

/** Decode the base64 f32le payload of a map into a Float32Array. */
export function decodeF32(data: string): Float32Array {
  let bytes: Uint8Array;
  if (typeof atob === 'function') {
    const bin = atob(data);
    bytes = new Uint8Array(bin.length);
    for (let i = 0; i < bin.length; i++) bytes[i] = bin.charCodeAt(i);
  } else {
    // node (tests)
    bytes = new Uint8Array(Buffer.from(data, 'base64'));
  }
  return new Float32Array(bytes.buffer, bytes.byteOffset, bytes.byteLength / 4);
}

type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class Client {
  base: string;
  private fetchImpl: FetchLike;
  private pending: Promise<unknown> = Promise.resolve();

  constructor(base = '', fetchImpl?: FetchLike) {
    this.base = base.replace(/\/$/, '');
    this.fetchImpl = fetchImpl ?? ((url, init) => fetch(url, init));
  }

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const resp = await this.fetchImpl(this.base + path, init);
    if (resp.status === 204) return undefined as T;
    if (!resp.ok) {
      let detail: unknown = resp.statusText;
      try {
        detail = (await resp.json()).detail;
      } catch {
        /* non-JSON error body */
      }
      throw new ApiError(resp.status, detail);
    }
    return (await resp.json()) as T;
  }

  private get<T>(path: string): Promise<T> {
    return this.request<T>(path);
  }

  // Mutations run strictly one after another, even if callers fire
  // several; a failed one does not block the next.
  private mutate<T>(path: string, init: RequestInit): Promise<T> {
    const run = this.pending.then(
      () => this.request<T>(path, init),
      () => this.request<T>(path, init),
    );
    this.pending = run.catch(() => undefined);
    return run;
  }

  private post<T>(path: string, body?: unknown): Promise<T> {
    return this.mutate<T>(path, {
      method: 'POST',
      headers: { 'content-type': 'application/json' },
      body: JSON.stringify(body ?? {}),
    });
  }

  health(): Promise<{ status: string; version: string }> {
    return this.get('/health');
  }

  createSession(seed: number, preprocessed = false): Promise<SessionResource> {
    return this.post('/sessions', { seed, preprocessed });
  }

  getSession(id: string): Promise<SessionResource> {
    return this.get(`/sessions/${id}`);
  }

  deleteSession(id: string): Promise<void> {
    return this.mutate(`/sessions/${id}`, { method: 'DELETE' });
  }

  upload(id: string, which: 1 | 2, csv: string, scan: ScanParams): Promise<SessionResource> {
    const q = new URLSearchParams({
      which: String(which),
      mode: scan.mode,
      nframe: String(scan.nframe),
      nrow: String(scan.nrow),
      ncol: String(scan.ncol),
      row_id: scan.row_id ?? '',
      col_id: String(scan.col_id ?? 1),
    });
    return this.mutate(`/sessions/${id}/upload?${q}`, {
      method: 'POST',
      headers: { 'content-type': 'text/csv' },
      body: csv,
    });
  }

  setRoi(id: string, roi1: Rect | null, roi2: Rect | null): Promise<SessionResource> {
    return this.post(`/sessions/${id}/roi`, { roi1, roi2 });
  }

  histogram(id: string, which: 1 | 2, nbins: number): Promise<HistogramResponse> {
    return this.get(`/sessions/${id}/histogram?which=${which}&nbins=${nbins}`);
  }

  segment(
    id: string,
    body: { mode?: 'auto' | 'manual'; cutoff1?: number; cutoff2?: number; groups?: number | 'auto' },
  ): Promise<SegmentResponse> {
    return this.post(`/sessions/${id}/segment`, body);
  }

  register(id: string, body: { mode?: 'auto' | 'manual'; points?: Point[] }): Promise<RegisterResponse> {
    return this.post(`/sessions/${id}/register`, body);
  }

  overlayUrl(id: string): string {
    return `${this.base}/sessions/${id}/overlay`;
  }

  confirm(id: string, accepted: boolean): Promise<ConfirmResponse> {
    return this.post(`/sessions/${id}/confirm`, { accepted });
  }

  analyze(id: string, body: AnalyzeRequest): Promise<AnalyzeResponse> {
    return this.post(`/sessions/${id}/analyze`, body);
  }

  getMap(id: string, kind: string, frame: number): Promise<MapPayload> {
    return this.get(`/sessions/${id}/maps/${kind}/${frame}`);
  }

  getSurface(id: string, frame: number): Promise<SurfacePayload> {
    return this.get(`/sessions/${id}/surface/P/${frame}`);
  }

  movieUrl(id: string, kind: string): string {
    return `${this.base}/sessions/${id}/movies/${kind}`;
  }
}
