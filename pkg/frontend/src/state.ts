// Mirror of the server's per-session state machine. Buttons are enabled
// from this table only, so the client never sends a request the server
// would refuse with a 409.

export type ServerState =
  | 'created'
  | 'scanned'
  | 'cropped'
  | 'segmented'
  | 'registered'
  | 'confirmed'
  | 'analyzed'
  | 'failed';

export type UiAction =
  | 'upload'
  | 'roi'
  | 'histogram'
  | 'segment'
  | 'register'
  | 'confirm'
  | 'analyze'
  | 'play';

const TABLE: Record<ServerState, UiAction[]> = {
  created: ['upload'],
  scanned: ['upload', 'roi', 'histogram', 'segment'],
  cropped: ['roi', 'histogram', 'segment'],
  segmented: ['histogram', 'segment', 'register'],
  registered: ['histogram', 'segment', 'register', 'confirm'],
  confirmed: ['histogram', 'analyze'],
  analyzed: ['histogram', 'analyze', 'play'],
  failed: ['histogram', 'segment', 'register'],
};

// Preprocessed sessions skip segmentation and registration entirely.
const TABLE_PREPROCESSED: Partial<Record<ServerState, UiAction[]>> = {
  created: ['upload'],
  scanned: ['upload', 'histogram', 'analyze'],
  analyzed: ['histogram', 'analyze', 'play'],
};

export function allowedActions(state: ServerState, preprocessed = false): UiAction[] {
  if (preprocessed) return TABLE_PREPROCESSED[state] ?? [];
  return TABLE[state] ?? [];
}

export function canDo(action: UiAction, state: ServerState, preprocessed = false): boolean {
  return allowedActions(state, preprocessed).includes(action);
}

/** Which wizard panel a given server state lands on after a reload. */
export function stepForState(state: ServerState, preprocessed = false): string {
  if (preprocessed) {
    return state === 'analyzed' ? 'player' : state === 'scanned' ? 'analyze' : 'upload';
  }
  switch (state) {
    case 'created':
      return 'upload';
    case 'scanned':
    case 'cropped':
      return 'segment';
    case 'segmented':
      return 'register';
    case 'registered':
      return 'gate';
    case 'failed':
      return 'segment';
    case 'confirmed':
      return 'analyze';
    case 'analyzed':
      return 'player';
  }
}
