// Client-side view state. Mode availability is never computed locally:
// the server's /modes answer is stored verbatim, so the UI can only
// offer transitions the API would accept.

import type {
  CompareReport,
  DecisionTablePayload,
  DoubleCheckReport,
  MetricsPanel,
  Mode,
  ModeInfo,
  ProviderInfo,
  SessionDetail,
  SourceVerification,
} from './types.js';

export class ModeState {
  constructor(
    public current: Mode,
    public allowedTargets: Mode[]
  ) {}

  static fromApi(info: ModeInfo): ModeState {
    return new ModeState(info.current, [...info.allowed_targets]);
  }

  isAllowed(target: Mode): boolean {
    return this.allowedTargets.includes(target);
  }
}

export interface VerificationViews {
  source?: SourceVerification;
  doubleCheck?: DoubleCheckReport;
}

export interface AppState {
  session: SessionDetail | null;
  modeState: ModeState;
  providers: ProviderInfo[];
  metrics: MetricsPanel;
  helpOpen: boolean;
  helpText: string;
  // verification screen state
  selectedResponseId: string | null;
  verificationViews: Record<string, VerificationViews>;
  compareReport: CompareReport | null;
  // decision screen state
  decisionTable: DecisionTablePayload | null;
  toast: string | null;
}

export function initialState(): AppState {
  return {
    session: null,
    modeState: new ModeState('generation', ['generation']),
    providers: [],
    metrics: {},
    helpOpen: false,
    helpText: '',
    selectedResponseId: null,
    verificationViews: {},
    compareReport: null,
    decisionTable: null,
    toast: null,
  };
}
