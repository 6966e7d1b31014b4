// Rendering fidelity against payloads recorded from a live API session.

import { describe, expect, it } from 'vitest';

import { initialState, ModeState } from '../src/state.js';
import {
  renderCompare,
  renderDecisionTable,
  renderDoubleCheck,
  renderHighlightedResponse,
  renderMainScreen,
  renderSourceCitations,
} from '../src/render.js';
import type {
  CompareReport,
  DecisionTablePayload,
  DoubleCheckReport,
  MetricsPanel,
  ModeInfo,
  SessionDetail,
  SourceVerification,
  TurnPayload,
} from '../src/types.js';

import sessionFixture from './fixtures/session.json';
import turnFixture from './fixtures/turn.json';
import doubleCheckFixture from './fixtures/double_check.json';
import sourceFixture from './fixtures/source.json';
import compareFixture from './fixtures/compare.json';
import tableFixture from './fixtures/decision_table.json';
import modesFixture from './fixtures/modes.json';
import metricsFixture from './fixtures/metrics.json';

const session = sessionFixture as unknown as SessionDetail;
const turn = turnFixture as unknown as TurnPayload;
const doubleCheck = doubleCheckFixture as unknown as DoubleCheckReport;
const source = sourceFixture as unknown as SourceVerification;
const compare = compareFixture as unknown as CompareReport;
const table = tableFixture as unknown as DecisionTablePayload;
const modes = modesFixture as unknown as ModeInfo;
const metrics = (metricsFixture as { metrics: MetricsPanel }).metrics;

function stateWithSession() {
  const state = initialState();
  state.session = session;
  state.modeState = ModeState.fromApi(modes);
  state.metrics = metrics;
  return state;
}

describe('main screen', () => {
  const SIX_ELEMENTS = [
    'data-element="mode-menu"', // (1) mode selection sidebar
    'data-element="mode-switch"', // (2) switch control
    'data-element="mode-indicator"', // (3) current mode display
    'data-element="help-control"', // (4) help entry point
    'data-element="workspace-panel"', // (5) metrics + library
    'data-element="prompt-input"', // (6) prompt field
  ];

  it('renders all six screen elements', () => {
    const html = renderMainScreen(stateWithSession());
    for (const marker of SIX_ELEMENTS) {
      expect(html).toContain(marker);
    }
  });

  it('fresh session shows generation as the default mode', () => {
    const state = initialState();
    state.session = { ...session, turns: [], mode: 'generation' };
    state.modeState = new ModeState('generation', ['generation']);
    const html = renderMainScreen(state);
    expect(html).toMatch(/data-element="mode-indicator"[^>]*>\s*Generation mode/);
  });

  it('disables mode buttons the API would reject', () => {
    const state = stateWithSession();
    state.modeState = new ModeState('generation', ['generation']);
    const html = renderMainScreen(state);
    const verificationButton = html.match(
      /<button[^>]*data-mode="verification"[^>]*>/
    )?.[0];
    const decisionButton = html.match(/<button[^>]*data-mode="decision"[^>]*>/)?.[0];
    expect(verificationButton).toContain('disabled');
    expect(decisionButton).toContain('disabled');
    const generationButton = html.match(/<button[^>]*data-mode="generation"[^>]*>/)?.[0];
    expect(generationButton).not.toContain('disabled');
  });

  it('help control opens a per-mode help window', () => {
    const state = stateWithSession();
    state.helpOpen = true;
    state.helpText = 'Pick a response and run any of the three checks.';
    const html = renderMainScreen(state);
    expect(html).toContain('data-element="help-window"');
    expect(html).toContain('three checks');
  });

  it('metrics panel echoes configured metrics with units', () => {
    const html = renderMainScreen(stateWithSession());
    expect(html).toContain('weekly_active_users');
    expect(html).toContain('152000 users');
    expect(html).toContain('2026-07-01');
  });
});

describe('highlight rendering', () => {
  const response = turn.responses[0];
  const claims = turn.claims[response.id];

  it('fixture covers all three statuses', () => {
    const statuses = new Set(doubleCheck.highlights.map((h) => h.status));
    expect(statuses).toEqual(
      new Set(['supported', 'unsupported', 'not_applicable'])
    );
  });

  it('status, color, and payload stay locked together', () => {
    const html = renderDoubleCheck(response, claims, doubleCheck);
    for (const highlight of doubleCheck.highlights) {
      const mark = html.match(
        new RegExp(`<mark[^>]*data-claim-id="${highlight.claim_id}"[^>]*>`)
      );
      if (highlight.status === 'supported') {
        expect(highlight.color).toBe('blue');
        expect(mark?.[0]).toContain('hl-blue');
        // blue <=> evidence links shown
        expect(highlight.evidence.length).toBeGreaterThan(0);
        for (const hit of highlight.evidence) {
          expect(html).toContain(`href="${hit.url}"`);
        }
        expect(html).not.toContain(`data-query="${highlight.claim_id}`);
      } else if (highlight.status === 'unsupported') {
        expect(highlight.color).toBe('red');
        expect(mark?.[0]).toContain('hl-red');
        // red <=> a recommended search is offered
        expect(highlight.recommended_query).not.toBe('');
        const guidance = html.match(
          new RegExp(
            `<div class="guidance guidance-red" data-claim-id="${highlight.claim_id}"[\\s\\S]*?</div>`
          )
        );
        expect(guidance?.[0]).toContain('data-action="recommended-search"');
        expect(guidance?.[0]).not.toContain('<a ');
      } else {
        expect(highlight.color).toBe('none');
        // no highlight rendered at all
        expect(mark).toBeNull();
        expect(html).not.toContain(`data-claim-id="${highlight.claim_id}"`);
      }
    }
  });

  it('non-highlighted text is preserved verbatim', () => {
    const html = renderHighlightedResponse(response, claims, doubleCheck.highlights);
    const stripped = html
      .replace(/<[^>]+>/g, '')
      .replace(/&amp;/g, '&')
      .replace(/&lt;/g, '<')
      .replace(/&gt;/g, '>')
      .replace(/&quot;/g, '"')
      .replace(/&#39;/g, "'");
    expect(stripped).toBe(response.text);
  });

  it('escapes markup in response text', () => {
    const hostile = { ...response, text: '<script>alert(1)</script>' };
    const html = renderHighlightedResponse(hostile, [], []);
    expect(html).not.toContain('<script>');
  });
});

describe('source citations', () => {
  it('renders document title and excerpt from the API message', () => {
    const html = renderSourceCitations(source);
    expect(source.citations.length).toBeGreaterThan(0);
    for (const citation of source.citations) {
      expect(html).toContain(citation.doc_id);
    }
    expect(html).toContain('usability notes');
  });
});

describe('compare view', () => {
  it('shows side-by-side provider columns and marks shared claims', () => {
    const compareTurn = session.turns[compare.turn_index];
    const html = renderCompare(compare, compareTurn);
    for (const providerId of compare.provider_ids) {
      expect(html).toContain(providerId);
    }
    const sharedIds = compare.common_clusters.flatMap((c) =>
      c.members.map(([, claimId]) => claimId)
    );
    for (const claimId of sharedIds) {
      const node = html.match(
        new RegExp(`<p class="claim shared-claim"[^>]*data-claim-id="${claimId}"`)
      );
      expect(node).not.toBeNull();
    }
  });
});

describe('decision table', () => {
  it('renders rows in API order without re-sorting', () => {
    const html = renderDecisionTable(table);
    const apiOrder = table.rows.map((r) => r.response_id);
    const renderedOrder = [...html.matchAll(/<tr data-response-id="([^"]+)"/g)].map(
      (m) => m[1]
    );
    expect(renderedOrder).toEqual(apiOrder);
    const ranks = [...html.matchAll(/<td class="num">(\d+)<\/td>/g)].map((m) =>
      Number(m[1])
    );
    expect(ranks).toEqual(table.rows.map((r) => r.rank));
  });

  it('every row is choosable, not just rank 1', () => {
    const html = renderDecisionTable(table);
    const buttons = [...html.matchAll(/data-action="choose-decision"/g)];
    expect(buttons.length).toBe(table.rows.length);
  });

  it('scores come from the payload verbatim', () => {
    const html = renderDecisionTable(table);
    for (const row of table.rows) {
      expect(html).toContain(row.score.value.toFixed(3));
    }
  });
});
