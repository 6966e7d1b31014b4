// Screen behavior over an injected API client. Mode switches are never
// optimistic: the state only changes after the server confirms, and the
// allowed-targets list is refreshed from the server after every change.

import type { ApiClient } from './api.js';
import { ApiError } from './api.js';
import { initialState, ModeState, type AppState } from './state.js';
import type { Mode } from './types.js';

type ClientLike = Pick<
  ApiClient,
  | 'createSession'
  | 'getSession'
  | 'submitPrompt'
  | 'switchMode'
  | 'allowedModes'
  | 'manageLibrary'
  | 'verifySource'
  | 'verifyDoubleCheck'
  | 'runCompare'
  | 'decisionTable'
  | 'recordDecision'
  | 'helpText'
  | 'metricsPanel'
  | 'providers'
>;

export class WorkbenchController {
  state: AppState = initialState();

  constructor(
    private client: ClientLike,
    private onChange: (state: AppState) => void = () => {}
  ) {}

  private emit(): void {
    this.onChange(this.state);
  }

  private async refreshModes(): Promise<void> {
    if (!this.state.session) return;
    const info = await this.client.allowedModes(this.state.session.id);
    this.state.modeState = ModeState.fromApi(info);
  }

  private async refreshSession(): Promise<void> {
    if (!this.state.session) return;
    this.state.session = await this.client.getSession(this.state.session.id);
    await this.refreshModes();
  }

  private toast(message: string): void {
    this.state.toast = message;
    this.emit();
  }

  private async guarded<T>(work: () => Promise<T>): Promise<T | null> {
    try {
      const result = await work();
      this.state.toast = null;
      this.emit();
      return result;
    } catch (error) {
      if (error instanceof ApiError) {
        this.toast(`${error.code}: ${error.message}`);
        return null;
      }
      throw error;
    }
  }

  async start(sessionId?: string, title = 'workbench session'): Promise<void> {
    const [metrics, providers] = await Promise.all([
      this.client.metricsPanel(),
      this.client.providers(),
    ]);
    this.state.metrics = metrics.metrics;
    this.state.providers = providers.providers;
    this.state.session = sessionId
      ? await this.client.getSession(sessionId)
      : await this.client.createSession(title);
    await this.refreshModes();
    this.emit();
  }

  async submitPrompt(prompt: string): Promise<void> {
    const session = this.state.session;
    if (!session || !prompt.trim()) return;
    await this.guarded(async () => {
      await this.client.submitPrompt(session.id, prompt);
      await this.refreshSession();
    });
  }

  async switchMode(target: Mode): Promise<void> {
    const session = this.state.session;
    if (!session) return;
    await this.guarded(async () => {
      await this.client.switchMode(session.id, target);
      await this.refreshSession();
      if (target === 'decision') {
        this.state.decisionTable = await this.client.decisionTable(session.id);
      }
    });
  }

  pickResponse(responseId: string): void {
    this.state.selectedResponseId = responseId;
    this.emit();
  }

  async runSource(): Promise<void> {
    const { session, selectedResponseId } = this.state;
    if (!session || !selectedResponseId) return;
    await this.guarded(async () => {
      const result = await this.client.verifySource(session.id, selectedResponseId);
      const views = this.state.verificationViews[selectedResponseId] ?? {};
      views.source = result;
      this.state.verificationViews[selectedResponseId] = views;
      await this.refreshSession();
    });
  }

  async runDoubleCheck(): Promise<void> {
    const { session, selectedResponseId } = this.state;
    if (!session || !selectedResponseId) return;
    await this.guarded(async () => {
      const result = await this.client.verifyDoubleCheck(session.id, selectedResponseId);
      const views = this.state.verificationViews[selectedResponseId] ?? {};
      views.doubleCheck = result;
      this.state.verificationViews[selectedResponseId] = views;
      await this.refreshSession();
    });
  }

  async runCompare(prompt: string): Promise<void> {
    const session = this.state.session;
    if (!session) return;
    await this.guarded(async () => {
      this.state.compareReport = await this.client.runCompare(session.id, prompt);
      await this.refreshSession();
    });
  }

  async bookmark(responseId: string): Promise<void> {
    const session = this.state.session;
    if (!session) return;
    await this.guarded(async () => {
      await this.client.manageLibrary(session.id, 'add_bookmark', {
        response_id: responseId,
      });
      await this.refreshSession();
    });
  }

  async toggleHelp(): Promise<void> {
    if (this.state.helpOpen) {
      this.state.helpOpen = false;
      this.emit();
      return;
    }
    const help = await this.client.helpText(this.state.modeState.current);
    this.state.helpText = help.text;
    this.state.helpOpen = true;
    this.emit();
  }

  /** Record the chosen row (any rank) and return to generation mode. */
  async chooseDecision(responseId: string, rationale: string): Promise<void> {
    const session = this.state.session;
    if (!session) return;
    await this.guarded(async () => {
      await this.client.recordDecision(session.id, responseId, rationale);
      await this.client.switchMode(session.id, 'generation');
      this.state.decisionTable = null;
      await this.refreshSession();
    });
  }
}
