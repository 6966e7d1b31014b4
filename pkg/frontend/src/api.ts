// Thin fetch client over the workbench API. Errors arrive as
// { error: { code, message } } envelopes and surface as ApiError.

import type {
  CompareReport,
  DecisionRecordPayload,
  DecisionTablePayload,
  DoubleCheckReport,
  Library,
  MetricsPanel,
  Mode,
  ModeInfo,
  ProviderInfo,
  SessionDetail,
  SessionSummary,
  SourceVerification,
  TurnPayload,
} from './types.js';

export class ApiError extends Error {
  constructor(
    public code: string,
    message: string,
    public status: number
  ) {
    super(message);
    this.name = 'ApiError';
  }
}

async function parseError(response: Response): Promise<ApiError> {
  try {
    const body = (await response.json()) as { error?: { code: string; message: string } };
    if (body.error) {
      return new ApiError(body.error.code, body.error.message, response.status);
    }
  } catch {
    // fall through to the generic error
  }
  return new ApiError('UnknownError', response.statusText, response.status);
}

export class ApiClient {
  constructor(private baseUrl: string = '') {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const response = await fetch(this.baseUrl + path, {
      method,
      headers: body === undefined ? {} : { 'Content-Type': 'application/json' },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    if (!response.ok) {
      throw await parseError(response);
    }
    return (await response.json()) as T;
  }

  createSession(title: string): Promise<SessionDetail> {
    return this.request('POST', '/sessions', { title });
  }

  listSessions(): Promise<{ sessions: SessionSummary[] }> {
    return this.request('GET', '/sessions');
  }

  getSession(sessionId: string): Promise<SessionDetail> {
    return this.request('GET', `/sessions/${sessionId}`);
  }

  submitPrompt(sessionId: string, prompt: string, providerIds?: string[]): Promise<TurnPayload> {
    return this.request('POST', `/sessions/${sessionId}/prompts`, {
      prompt,
      provider_ids: providerIds ?? null,
    });
  }

  switchMode(sessionId: string, mode: Mode): Promise<SessionSummary> {
    return this.request('POST', `/sessions/${sessionId}/mode`, { mode });
  }

  allowedModes(sessionId: string): Promise<ModeInfo> {
    return this.request('GET', `/sessions/${sessionId}/modes`);
  }

  manageLibrary(sessionId: string, action: string, payload: Record<string, unknown>): Promise<Library> {
    return this.request('POST', `/sessions/${sessionId}/library`, { action, payload });
  }

  verifySource(sessionId: string, responseId: string): Promise<SourceVerification> {
    return this.request('POST', `/sessions/${sessionId}/verify/source`, {
      response_id: responseId,
    });
  }

  verifyDoubleCheck(sessionId: string, responseId: string): Promise<DoubleCheckReport> {
    return this.request('POST', `/sessions/${sessionId}/verify/double-check`, {
      response_id: responseId,
    });
  }

  runCompare(sessionId: string, prompt: string, providerIds?: string[]): Promise<CompareReport> {
    return this.request('POST', `/sessions/${sessionId}/verify/compare`, {
      prompt,
      provider_ids: providerIds ?? null,
    });
  }

  decisionTable(sessionId: string): Promise<DecisionTablePayload> {
    return this.request('GET', `/sessions/${sessionId}/decision-table`);
  }

  recordDecision(sessionId: string, responseId: string, rationale: string): Promise<DecisionRecordPayload> {
    return this.request('POST', `/sessions/${sessionId}/decision`, {
      response_id: responseId,
      rationale,
    });
  }

  helpText(mode: Mode): Promise<{ mode: Mode; text: string }> {
    return this.request('GET', `/help/${mode}`);
  }

  metricsPanel(): Promise<{ metrics: MetricsPanel }> {
    return this.request('GET', '/metrics-panel');
  }

  providers(): Promise<{ providers: ProviderInfo[] }> {
    return this.request('GET', '/providers');
  }

  ingestCorpus(title: string, body: string): Promise<{ doc_id: string; chunk_count: number }> {
    return this.request('POST', '/corpus', { title, body });
  }
}
