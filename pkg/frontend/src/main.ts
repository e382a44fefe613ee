import {
  ApiError,
  Client,
  decodeF32,
  type HistogramResponse,
  type Point,
  type Rect,
  type ScanParams,
  type SessionResource,
  type SurfacePayload,
} from './api.js';
import { cropFrame, scanCsv, type RasterFrame } from './scan.js';
import { dragMove, dragRect, dragStart, fullFrameRect, rectIsFullFrame, type DragState } from './roi.js';
import { barHeights, clickToValue, snapToEdge, valueToX } from './histogram.js';
import { addPick, emptyPicks, picksCoincident, previewTheta, registrationPoints, type PickState } from './points.js';
import { canDo, stepForState, type ServerState } from './state.js';
import {
  frameRgb,
  initialPlayer,
  setCursor,
  setKind,
  tick,
  togglePlaying,
  toggleView,
  PLAYER_KINDS,
  type MapKind,
  type MapStack,
  type PlayerState,
} from './player.js';
import { drawFrame, drawRgb, eventToFrame, fitScale } from './raster.js';
import { defaultCamera, drawSurface, fitZoom, orbit, zoomBy, type Camera } from './surface3d.js';

const api = new Client('');

const $ = <T extends HTMLElement>(id: string): T => document.getElementById(id) as T;

const STEPS = ['upload', 'roi', 'segment', 'register', 'gate', 'analyze', 'player'] as const;
type Step = (typeof STEPS)[number];

interface AppState {
  session: SessionResource | null;
  step: Step;
  // local rasters of frame 0, used by the roi/segment/register views
  frames: { 1: RasterFrame | null; 2: RasterFrame | null };
  roiWhich: 1 | 2;
  drag: DragState | null;
  pendingRect: { 1: Rect | null; 2: Rect | null };
  segWhich: 1 | 2;
  hist: HistogramResponse | null;
  cutoffs: { 1: number | null; 2: number | null };
  picks: { 1: PickState; 2: PickState };
  stacks: Partial<Record<MapKind, MapStack>> | null;
  surfaces: SurfacePayload[] | null;
  player: PlayerState;
  camera: Camera;
}

const app: AppState = {
  session: null,
  step: 'upload',
  frames: { 1: null, 2: null },
  roiWhich: 1,
  drag: null,
  pendingRect: { 1: null, 2: null },
  segWhich: 1,
  hist: null,
  cutoffs: { 1: null, 2: null },
  picks: { 1: emptyPicks, 2: emptyPicks },
  stacks: null,
  surfaces: null,
  player: initialPlayer(0),
  camera: defaultCamera,
};

// ------------------------------------------------------------ chrome

function showError(err: unknown): void {
  const banner = $('error-banner');
  const msg = err instanceof Error ? err.message : String(err);
  banner.textContent = err instanceof ApiError && err.suggestion !== null
    ? `${msg} (suggested cutoff: ${err.suggestion.toFixed(3)})`
    : msg;
  banner.classList.remove('hidden');
}

function clearError(): void {
  $('error-banner').classList.add('hidden');
}

function showSuggestions(suggestions: string[]): void {
  const list = $('suggestion-list');
  list.innerHTML = '';
  for (const s of suggestions) {
    const li = document.createElement('li');
    li.textContent = s;
    list.appendChild(li);
  }
  $('suggestion-banner').classList.toggle('hidden', suggestions.length === 0);
}

function setStep(step: Step): void {
  app.step = step;
  for (const s of STEPS) {
    $(`panel-${s}`).classList.toggle('hidden', s !== step);
  }
  document.querySelectorAll<HTMLButtonElement>('#stepper button').forEach((b) => {
    b.classList.toggle('current', b.dataset.step === step);
  });
  refreshChrome();
}

function refreshChrome(): void {
  const sess = app.session;
  $('session-label').textContent = sess ? `session ${sess.id.slice(0, 8)}` : 'no session';
  $('state-label').textContent = sess ? sess.state : '';
  if (sess) location.hash = sess.id;
  const state = (sess?.state ?? 'created') as ServerState;
  const pre = sess?.preprocessed ?? false;
  const gate: Record<Step, boolean> = {
    upload: true,
    roi: canDo('roi', state, pre),
    segment: canDo('segment', state, pre),
    register: canDo('register', state, pre),
    gate: canDo('confirm', state, pre),
    analyze: canDo('analyze', state, pre),
    player: canDo('play', state, pre),
  };
  document.querySelectorAll<HTMLButtonElement>('#stepper button').forEach((b) => {
    b.disabled = !gate[b.dataset.step as Step];
  });
  $<HTMLButtonElement>('btn-roi').disabled = !canDo('roi', state, pre);
  $<HTMLButtonElement>('btn-segment').disabled = !canDo('segment', state, pre);
  $<HTMLButtonElement>('btn-register').disabled = !canDo('register', state, pre);
  $<HTMLButtonElement>('btn-analyze').disabled = !canDo('analyze', state, pre);
}

document.querySelectorAll<HTMLButtonElement>('#stepper button').forEach((b) => {
  b.addEventListener('click', () => {
    const step = b.dataset.step as Step;
    if (step === 'segment') refreshHistogram().catch(showError);
    if (step === 'roi') drawRoi();
    if (step === 'register') drawRegCanvases();
    if (step === 'gate') $<HTMLImageElement>('overlay-img').src = overlayUrl();
    setStep(step);
  });
});

function overlayUrl(): string {
  // cache-bust: the overlay changes on every registration
  return `${api.overlayUrl(app.session!.id)}?t=${Date.now()}`;
}

// ------------------------------------------------------------ upload

function readFile(input: HTMLInputElement): Promise<string> {
  const f = input.files?.[0];
  if (!f) return Promise.reject(new Error('pick both CSV files first'));
  return f.text();
}

function scanParams(): ScanParams {
  return {
    mode: $<HTMLSelectElement>('scan-mode').value as ScanParams['mode'],
    nframe: Number($<HTMLInputElement>('nframe').value),
    nrow: Number($<HTMLInputElement>('nrow').value),
    ncol: Number($<HTMLInputElement>('ncol').value),
    row_id: $<HTMLInputElement>('row-id').value,
    col_id: Number($<HTMLInputElement>('col-id').value),
  };
}

$('btn-upload').addEventListener('click', async () => {
  clearError();
  try {
    const spec = scanParams();
    const [text1, text2] = await Promise.all([
      readFile($<HTMLInputElement>('file1')),
      readFile($<HTMLInputElement>('file2')),
    ]);
    // decode locally first so a bad file fails before any upload
    app.frames[1] = scanCsv(text1, spec)[0];
    app.frames[2] = scanCsv(text2, spec)[0];
    const preprocessed = $<HTMLInputElement>('preprocessed').checked;
    const created = await api.createSession(Number($<HTMLInputElement>('seed').value), preprocessed);
    await api.upload(created.id, 1, text1, spec);
    app.session = await api.upload(created.id, 2, text2, spec);
    app.pendingRect = { 1: null, 2: null };
    app.cutoffs = { 1: null, 2: null };
    app.picks = { 1: emptyPicks, 2: emptyPicks };
    if (preprocessed) {
      setStep('analyze');
    } else {
      drawRoi();
      setStep('roi');
    }
  } catch (err) {
    showError(err);
  }
});

// ------------------------------------------------------------ roi

function roiScale(): number {
  const f = app.frames[app.roiWhich];
  return f ? fitScale(f.rows, f.cols) : 1;
}

function drawRoi(): void {
  const frame = app.frames[app.roiWhich];
  if (!frame) return;
  const canvas = $<HTMLCanvasElement>('roi-canvas');
  const scale = roiScale();
  drawFrame(canvas, frame, scale);
  const rect = app.drag ? dragRect(app.drag) : app.pendingRect[app.roiWhich];
  if (rect) {
    const ctx = canvas.getContext('2d')!;
    ctx.strokeStyle = '#ff8800';
    ctx.lineWidth = 2;
    ctx.strokeRect(rect.col0 * scale, rect.row0 * scale, rect.width * scale, rect.height * scale);
    $('roi-readout').textContent =
      `rows ${rect.row0}..${rect.row0 + rect.height - 1}, cols ${rect.col0}..${rect.col0 + rect.width - 1}` +
      ` (${rect.height}x${rect.width})`;
  } else {
    $('roi-readout').textContent = 'full frame';
  }
}

{
  const canvas = $<HTMLCanvasElement>('roi-canvas');
  canvas.addEventListener('mousedown', (ev) => {
    const f = app.frames[app.roiWhich];
    if (!f) return;
    const { row, col } = eventToFrame(canvas, ev, roiScale());
    app.drag = dragStart(row, col, f.rows, f.cols);
    drawRoi();
  });
  window.addEventListener('mousemove', (ev) => {
    const f = app.frames[app.roiWhich];
    if (!app.drag || !f) return;
    const { row, col } = eventToFrame(canvas, ev, roiScale());
    app.drag = dragMove(app.drag, row, col, f.rows, f.cols);
    drawRoi();
  });
  window.addEventListener('mouseup', () => {
    if (!app.drag) return;
    app.pendingRect[app.roiWhich] = dragRect(app.drag);
    app.drag = null;
    drawRoi();
  });
}

document.querySelectorAll<HTMLButtonElement>('#roi-tabs button').forEach((b) => {
  b.addEventListener('click', () => {
    app.roiWhich = Number(b.dataset.which) as 1 | 2;
    document.querySelectorAll('#roi-tabs button').forEach((o) => o.classList.toggle('active', o === b));
    drawRoi();
  });
});

$('btn-roi').addEventListener('click', async () => {
  clearError();
  try {
    const f1 = app.frames[1]!;
    let r1 = app.pendingRect[1];
    let r2 = app.pendingRect[2];
    if (!r1 && !r2) {
      r1 = fullFrameRect(f1.rows, f1.cols);
    }
    if (r1 && rectIsFullFrame(r1, f1.rows, f1.cols) && !r2) {
      // nothing to crop
      setStep('segment');
      await refreshHistogram();
      return;
    }
    app.session = await api.setRoi(app.session!.id, r1, r2);
    // keep the local rasters in step with the server-side crop
    const used1 = r1 ?? r2!;
    const used2 = r2 ?? r1!;
    app.frames[1] = cropFrame(app.frames[1]!, used1);
    app.frames[2] = cropFrame(app.frames[2]!, used2);
    app.pendingRect = { 1: null, 2: null };
    await refreshHistogram();
    setStep('segment');
  } catch (err) {
    showError(err);
  }
});

$('btn-roi-skip').addEventListener('click', async () => {
  clearError();
  try {
    await refreshHistogram();
    setStep('segment');
  } catch (err) {
    showError(err);
  }
});

// ------------------------------------------------------------ segment

async function refreshHistogram(): Promise<void> {
  if (!app.session) return;
  const nbins = Number($<HTMLInputElement>('nbins').value);
  app.hist = await api.histogram(app.session.id, app.segWhich, nbins);
  drawHistogramCanvas();
  drawSegPreview();
}

function drawHistogramCanvas(): void {
  const hist = app.hist;
  const canvas = $<HTMLCanvasElement>('hist-canvas');
  const ctx = canvas.getContext('2d')!;
  ctx.fillStyle = '#fff';
  ctx.fillRect(0, 0, canvas.width, canvas.height);
  if (!hist) return;
  const heights = barHeights(hist);
  const barW = canvas.width / heights.length;
  ctx.fillStyle = '#4a6fa5';
  for (let i = 0; i < heights.length; i++) {
    const h = Math.round(heights[i] * (canvas.height - 4));
    ctx.fillRect(i * barW, canvas.height - h, Math.ceil(barW), h);
  }
  const cutoff = app.cutoffs[app.segWhich];
  if (cutoff !== null) {
    const x = valueToX(cutoff, hist, { width: canvas.width, height: canvas.height });
    ctx.strokeStyle = '#d33';
    ctx.lineWidth = 2;
    ctx.beginPath();
    ctx.moveTo(x, 0);
    ctx.lineTo(x, canvas.height);
    ctx.stroke();
  }
}

function drawSegPreview(): void {
  const frame = app.frames[app.segWhich];
  if (!frame) return;
  const cutoff = app.cutoffs[app.segWhich];
  drawFrame($<HTMLCanvasElement>('seg-preview'), frame, fitScale(frame.rows, frame.cols, 320),
    cutoff ?? undefined);
  const readout = $('cutoff-readout');
  if (cutoff === null) {
    readout.textContent = 'click the histogram to pick a cutoff';
  } else {
    const frameCount = frame.values.length;
    let below = 0;
    for (let i = 0; i < frame.values.length; i++) if (frame.values[i] < cutoff) below++;
    readout.textContent =
      `cutoff ${cutoff.toPrecision(6)}: ${below} of ${frameCount} pixels drop in frame 0`;
  }
}

$('hist-canvas').addEventListener('click', (ev) => {
  if (!app.hist) return;
  const canvas = $<HTMLCanvasElement>('hist-canvas');
  const rect = canvas.getBoundingClientRect();
  const v = clickToValue(ev.clientX - rect.left, app.hist, { width: canvas.width, height: canvas.height });
  app.cutoffs[app.segWhich] = snapToEdge(v, app.hist);
  (document.querySelector('input[name="seg-mode"][value="manual"]') as HTMLInputElement).checked = true;
  drawHistogramCanvas();
  drawSegPreview();
});

$('nbins').addEventListener('input', () => {
  $('nbins-label').textContent = $<HTMLInputElement>('nbins').value;
  refreshHistogram().catch(showError);
});

document.querySelectorAll<HTMLButtonElement>('#seg-tabs button').forEach((b) => {
  b.addEventListener('click', () => {
    app.segWhich = Number(b.dataset.which) as 1 | 2;
    document.querySelectorAll('#seg-tabs button').forEach((o) => o.classList.toggle('active', o === b));
    refreshHistogram().catch(showError);
  });
});

$('btn-segment').addEventListener('click', async () => {
  clearError();
  showSuggestions([]);
  try {
    const mode = (document.querySelector('input[name="seg-mode"]:checked') as HTMLInputElement).value;
    const groupsRaw = $<HTMLInputElement>('groups').value.trim();
    const body =
      mode === 'manual'
        ? { mode: 'manual' as const, cutoff1: app.cutoffs[1] ?? undefined, cutoff2: app.cutoffs[2] ?? undefined }
        : { mode: 'auto' as const, groups: groupsRaw === 'auto' ? ('auto' as const) : Number(groupsRaw) };
    if (mode === 'manual' && (body.cutoff1 === undefined || body.cutoff2 === undefined)) {
      throw new Error('pick a cutoff on both sequences first (use the tabs)');
    }
    const resp = await api.segment(app.session!.id, body);
    app.session = await api.getSession(app.session!.id);
    app.cutoffs = {
      1: resp.thresholds.seq1?.value ?? app.cutoffs[1],
      2: resp.thresholds.seq2?.value ?? app.cutoffs[2],
    };
    app.picks = { 1: emptyPicks, 2: emptyPicks };
    drawRegCanvases();
    setStep('register');
  } catch (err) {
    showError(err);
  }
});

// ------------------------------------------------------------ register

function regScale(which: 1 | 2): number {
  const f = app.frames[which];
  return f ? fitScale(f.rows, f.cols, 360) : 1;
}

function drawRegCanvases(): void {
  for (const which of [1, 2] as const) {
    const frame = app.frames[which];
    if (!frame) continue;
    const canvas = $<HTMLCanvasElement>(`reg-canvas-${which}`);
    const scale = regScale(which);
    drawFrame(canvas, frame, scale, app.cutoffs[which] ?? undefined);
    const ctx = canvas.getContext('2d')!;
    const picks = app.picks[which];
    const dot = (p: Point, color: string) => {
      ctx.fillStyle = color;
      ctx.beginPath();
      ctx.arc((p.col + 0.5) * scale, (p.row + 0.5) * scale, 4, 0, 2 * Math.PI);
      ctx.fill();
    };
    const readout = $(`reg-readout-${which}`);
    if (picks.anchor) dot(picks.anchor, '#ff8800');
    if (picks.direction) dot(picks.direction, '#00bb66');
    if (picks.anchor && picks.direction) {
      if (picksCoincident(picks)) {
        readout.textContent = 'points must differ, click again to restart';
        continue;
      }
      ctx.strokeStyle = '#ff8800';
      ctx.lineWidth = 2;
      ctx.beginPath();
      ctx.moveTo((picks.anchor.col + 0.5) * scale, (picks.anchor.row + 0.5) * scale);
      ctx.lineTo((picks.direction.col + 0.5) * scale, (picks.direction.row + 0.5) * scale);
      ctx.stroke();
      const deg = (previewTheta(picks.anchor, picks.direction) * 180) / Math.PI;
      readout.textContent = `rotation preview ${deg.toFixed(1)} deg`;
    } else if (picks.anchor) {
      readout.textContent = 'now click the direction point';
    } else {
      readout.textContent = 'click the anchor point';
    }
  }
}

for (const which of [1, 2] as const) {
  $(`reg-canvas-${which}`).addEventListener('click', (ev) => {
    const canvas = $<HTMLCanvasElement>(`reg-canvas-${which}`);
    const { row, col } = eventToFrame(canvas, ev as MouseEvent, regScale(which));
    app.picks[which] = addPick(app.picks[which], { row: Math.floor(row), col: Math.floor(col) });
    drawRegCanvases();
  });
}

document.querySelectorAll<HTMLInputElement>('input[name="reg-mode"]').forEach((r) => {
  r.addEventListener('change', () => {
    $('reg-manual').classList.toggle('hidden', r.value !== 'manual' || !r.checked);
    if (r.value === 'manual' && r.checked) drawRegCanvases();
  });
});

$('btn-register').addEventListener('click', async () => {
  clearError();
  try {
    const mode = (document.querySelector('input[name="reg-mode"]:checked') as HTMLInputElement).value;
    const body =
      mode === 'manual'
        ? { mode: 'manual' as const, points: registrationPoints(app.picks[1], app.picks[2]) }
        : { mode: 'auto' as const };
    await api.register(app.session!.id, body);
    app.session = await api.getSession(app.session!.id);
    $<HTMLImageElement>('overlay-img').src = overlayUrl();
    setStep('gate');
  } catch (err) {
    showError(err);
  }
});

// ------------------------------------------------------------ gate

$('btn-gate-yes').addEventListener('click', async () => {
  clearError();
  try {
    await api.confirm(app.session!.id, true);
    app.session = await api.getSession(app.session!.id);
    showSuggestions([]);
    setStep('analyze');
  } catch (err) {
    showError(err);
  }
});

$('btn-gate-no').addEventListener('click', async () => {
  clearError();
  try {
    const resp = await api.confirm(app.session!.id, false);
    app.session = await api.getSession(app.session!.id);
    showSuggestions(resp.suggestions);
    setStep('segment');
    await refreshHistogram();
  } catch (err) {
    showError(err);
  }
});

// ------------------------------------------------------------ analyze

function parseBandwidths(text: string): { h1: number; h2: number }[] | undefined {
  const t = text.trim();
  if (!t) return undefined;
  return t.split(';').map((part) => {
    const nums = part.split(',').map((s) => Number(s.trim()));
    if (nums.some(Number.isNaN)) throw new Error(`bad bandwidth: ${part}`);
    if (nums.length === 1) return { h1: nums[0], h2: nums[0] };
    if (nums.length === 2) return { h1: nums[0], h2: nums[1] };
    throw new Error(`bad bandwidth: ${part}`);
  });
}

$('btn-analyze').addEventListener('click', async () => {
  clearError();
  const progress = $<HTMLProgressElement>('analyze-progress');
  progress.classList.remove('hidden');
  progress.value = 0;
  const poll = window.setInterval(async () => {
    try {
      const sess = await api.getSession(app.session!.id);
      progress.value = sess.progress;
    } catch {
      /* polling is best effort */
    }
  }, 500);
  try {
    const resp = await api.analyze(app.session!.id, {
      alpha: Number($<HTMLInputElement>('alpha').value),
      sidedness: $<HTMLSelectElement>('sided').value as 'two' | 'greater',
      display: $<HTMLSelectElement>('display').value as 'basic' | 'all',
      pmap_dim: Number($<HTMLSelectElement>('pmap-dim').value) as 2 | 3,
      fdr_scope: $<HTMLSelectElement>('fdr').value as 'frame' | 'pooled',
      df_method: $<HTMLSelectElement>('df-method').value as 'two-moment' | 'n-minus-6',
      bandwidths: parseBandwidths($<HTMLInputElement>('bandwidths').value),
      workers: Number($<HTMLInputElement>('workers').value),
    });
    app.session = await api.getSession(app.session!.id);
    await loadMaps(resp.frames);
    setStep('player');
  } catch (err) {
    showError(err);
  } finally {
    window.clearInterval(poll);
    progress.classList.add('hidden');
  }
});

// ------------------------------------------------------------ player

async function loadMaps(frames: number): Promise<void> {
  const id = app.session!.id;
  const stacks: Partial<Record<MapKind, MapStack>> = {};
  for (const kind of PLAYER_KINDS) {
    const payloads = await Promise.all(
      Array.from({ length: frames }, (_, i) => api.getMap(id, kind, i)),
    );
    stacks[kind] = {
      rows: payloads[0].rows,
      cols: payloads[0].cols,
      frames: payloads.map((p) => decodeF32(p.data)),
    };
  }
  const sig = await Promise.all(
    Array.from({ length: frames }, (_, i) => api.getMap(id, 'SIG', i)),
  );
  stacks.P!.sig = sig.map((p) => decodeF32(p.data));
  const dim3 = app.session!.preprocessed
    ? false
    : $<HTMLSelectElement>('pmap-dim').value === '3';
  app.surfaces = dim3
    ? await Promise.all(Array.from({ length: frames }, (_, i) => api.getSurface(id, i)))
    : null;
  app.stacks = stacks;
  app.player = initialPlayer(frames);
  const slider = $<HTMLInputElement>('frame-slider');
  slider.min = '0';
  slider.max = String(frames - 1);
  slider.value = '0';
  renderPlayer();
}

function renderPlayer(): void {
  const { player, stacks } = app;
  if (!stacks) return;
  const stack = stacks[player.kind]!;
  $('frame-label').textContent = `${player.cursor + 1} / ${player.frameCount}`;
  $<HTMLInputElement>('frame-slider').value = String(player.cursor);
  $('btn-play').textContent = player.playing ? 'Pause' : 'Play';
  $('btn-dim').textContent = player.view === '2d' ? '3D' : '2D';
  ($('btn-dim') as HTMLButtonElement).disabled = player.kind !== 'P';
  const show3d = player.kind === 'P' && player.view === '3d';
  $('map-canvas').classList.toggle('hidden', show3d);
  $('surface-canvas').classList.toggle('hidden', !show3d);
  $('player-hint').textContent = show3d ? 'drag to orbit, wheel to zoom' : '';
  if (show3d) {
    renderSurface();
  } else {
    const rgb = frameRgb(player.kind, stack, player.cursor);
    drawRgb($<HTMLCanvasElement>('map-canvas'), rgb, stack.rows, stack.cols,
      fitScale(stack.rows, stack.cols, 560));
  }
}

function currentSurface(): SurfacePayload | null {
  if (app.surfaces) return app.surfaces[app.player.cursor];
  const stack = app.stacks?.P;
  if (!stack) return null;
  // build the height field from the decoded P map when the run was 2D
  return {
    rows: stack.rows,
    cols: stack.cols,
    values: Array.from(stack.frames[app.player.cursor]),
    range: [0, 1],
  };
}

function renderSurface(): void {
  const surface = currentSurface();
  if (!surface) return;
  const canvas = $<HTMLCanvasElement>('surface-canvas');
  if (app.camera.zoom === 1) {
    app.camera = { ...app.camera, zoom: fitZoom(surface, canvas.width, canvas.height) };
  }
  drawSurface(canvas.getContext('2d')!, surface, app.camera, canvas.width, canvas.height);
}

document.querySelectorAll<HTMLButtonElement>('#kind-tabs button').forEach((b) => {
  b.addEventListener('click', () => {
    app.player = setKind(app.player, b.dataset.kind as MapKind);
    document.querySelectorAll('#kind-tabs button').forEach((o) => o.classList.toggle('active', o === b));
    renderPlayer();
  });
});

$('frame-slider').addEventListener('input', () => {
  app.player = setCursor(app.player, Number($<HTMLInputElement>('frame-slider').value));
  renderPlayer();
});

$('btn-play').addEventListener('click', () => {
  app.player = togglePlaying(app.player);
  renderPlayer();
});

$('btn-dim').addEventListener('click', () => {
  app.player = toggleView(app.player);
  renderPlayer();
});

window.setInterval(() => {
  if (app.player.playing && app.stacks) {
    app.player = tick(app.player);
    renderPlayer();
  }
}, 150);

{
  const canvas = $<HTMLCanvasElement>('surface-canvas');
  let dragging = false;
  let lastX = 0;
  let lastY = 0;
  canvas.addEventListener('mousedown', (ev) => {
    dragging = true;
    lastX = ev.clientX;
    lastY = ev.clientY;
  });
  window.addEventListener('mousemove', (ev) => {
    if (!dragging) return;
    app.camera = orbit(app.camera, (ev.clientX - lastX) * 0.01, (ev.clientY - lastY) * 0.01);
    lastX = ev.clientX;
    lastY = ev.clientY;
    renderSurface();
  });
  window.addEventListener('mouseup', () => {
    dragging = false;
  });
  canvas.addEventListener('wheel', (ev) => {
    ev.preventDefault();
    app.camera = zoomBy(app.camera, ev.deltaY < 0 ? 1.15 : 1 / 1.15);
    renderSurface();
  });
}

// ------------------------------------------------------------ resume

async function resume(): Promise<void> {
  const id = location.hash.replace(/^#/, '');
  if (!id) return;
  try {
    const sess = await api.getSession(id);
    app.session = sess;
    const step = stepForState(sess.state as ServerState, sess.preprocessed) as Step;
    if (step === 'gate') {
      $<HTMLImageElement>('overlay-img').src = overlayUrl();
    }
    if (step === 'player' && sess.aligned_pairs) {
      await loadMaps(sess.aligned_pairs);
    }
    if (step === 'segment') {
      await refreshHistogram();
    }
    setStep(step);
  } catch {
    location.hash = '';
  }
}

resume().catch(() => undefined);
refreshChrome();
