// Pure HTML-string renderers for every screen. Keeping these free of
// DOM access makes the whole visual layer testable in node; main.ts
// only swaps innerHTML and wires events.

import type { AppState } from './state.js';
import type {
  Claim,
  CompareReport,
  DecisionTablePayload,
  DoubleCheckReport,
  Highlight,
  Library,
  MetricsPanel,
  Mode,
  ResponsePayload,
  SessionDetail,
  SourceVerification,
  TurnPayload,
} from './types.js';

const MODES: Mode[] = ['generation', 'verification', 'decision'];

const MODE_LABELS: Record<Mode, string> = {
  generation: 'Generation',
  verification: 'Verification',
  decision: 'Decision-making',
};

export function escapeHtml(raw: string): string {
  return raw
    .replace(/&/g, '&amp;')
    .replace(/</g, '&lt;')
    .replace(/>/g, '&gt;')
    .replace(/"/g, '&quot;')
    .replace(/'/g, '&#39;');
}

// --- element 1+2: mode menu with switch buttons ------------------------

function renderModeMenu(state: AppState): string {
  const items = MODES.map((mode) => {
    const active = state.modeState.current === mode ? ' active' : '';
    const disabled = state.modeState.isAllowed(mode) ? '' : ' disabled';
    return `
      <button data-element="mode-switch" data-action="switch-mode"
              data-mode="${mode}" class="mode-button${active}"${disabled}>
        ${MODE_LABELS[mode]}
      </button>`;
  }).join('\n');
  return `
  <nav class="sidebar" data-element="mode-menu" aria-label="Modes">
    <h1 class="brand">twai</h1>
    ${items}
  </nav>`;
}

// --- element 3+4: mode indicator and help control ----------------------

function renderHeader(state: AppState): string {
  const mode = state.modeState.current;
  const help = state.helpOpen
    ? `<div class="help-window" data-element="help-window" role="dialog">
         <p>${escapeHtml(state.helpText)}</p>
         <button data-action="close-help">Close</button>
       </div>`
    : '';
  return `
  <header class="topbar">
    <span class="mode-indicator" data-element="mode-indicator">
      ${MODE_LABELS[mode]} mode
    </span>
    <button class="help-button" data-element="help-control" data-action="open-help"
            title="Help for the current mode">?</button>
    ${help}
  </header>`;
}

// --- element 5: metrics and library panel -------------------------------

function renderMetrics(metrics: MetricsPanel): string {
  const names = Object.keys(metrics).sort();
  if (names.length === 0) {
    return '<p class="empty">No service metrics configured.</p>';
  }
  const rows = names
    .map((name) => {
      const entry = metrics[name];
      return `<tr>
        <td>${escapeHtml(name)}</td>
        <td class="num">${escapeHtml(String(entry.value))} ${escapeHtml(entry.unit)}</td>
        <td class="muted">${escapeHtml(entry.as_of)}</td>
      </tr>`;
    })
    .join('\n');
  return `<table class="metrics-table"><tbody>${rows}</tbody></table>`;
}

function renderLibrary(library: Library): string {
  const bookmarks = library.bookmarks
    .map(
      (b) => `<li class="bookmark" data-response-id="${escapeHtml(b.response_id)}">
        ${escapeHtml(b.label || b.response_id)}</li>`
    )
    .join('\n');
  const templates = library.templates
    .map(
      (t) => `<li class="template" data-action="use-template"
        data-body="${escapeHtml(t.body)}">${escapeHtml(t.label || t.body)}</li>`
    )
    .join('\n');
  return `
    <div class="library">
      <h3>Bookmarks</h3>
      <ul>${bookmarks || '<li class="empty">none yet</li>'}</ul>
      <h3>Prompt library</h3>
      <ul>${templates || '<li class="empty">none yet</li>'}</ul>
    </div>`;
}

function renderWorkspacePanel(state: AppState): string {
  const library = state.session?.library ?? { templates: [], bookmarks: [] };
  return `
  <aside class="workspace-panel" data-element="workspace-panel">
    <h3>Service metrics</h3>
    ${renderMetrics(state.metrics)}
    ${renderLibrary(library)}
  </aside>`;
}

// --- element 6: prompt input --------------------------------------------

function renderPromptInput(state: AppState): string {
  const inGeneration = state.modeState.current === 'generation';
  const note = inGeneration
    ? ''
    : '<p class="muted">Prompts are submitted in generation mode.</p>';
  return `
  <form class="prompt-form" data-element="prompt-input" data-action="submit-prompt">
    ${note}
    <input type="text" name="prompt" placeholder="Enter a prompt for all providers"
           ${inGeneration ? '' : 'disabled'} />
    <button type="submit" ${inGeneration ? '' : 'disabled'}>Send</button>
  </form>`;
}

// --- highlight rendering (Figure-5 semantics) ----------------------------

export function renderHighlightedResponse(
  response: ResponsePayload,
  claims: Claim[],
  highlights: Highlight[]
): string {
  const byClaim = new Map(highlights.map((h) => [h.claim_id, h]));
  const ordered = [...claims].sort((a, b) => a.span[0] - b.span[0]);
  const text = response.text;
  let cursor = 0;
  const parts: string[] = [];
  for (const claim of ordered) {
    const [start, end] = claim.span;
    parts.push(escapeHtml(text.slice(cursor, start)));
    const slice = escapeHtml(text.slice(start, end));
    const highlight = byClaim.get(claim.id);
    if (highlight && highlight.color !== 'none') {
      parts.push(
        `<mark class="hl-${highlight.color}" data-claim-id="${escapeHtml(claim.id)}">${slice}</mark>`
      );
    } else {
      parts.push(slice);
    }
    cursor = end;
  }
  parts.push(escapeHtml(text.slice(cursor)));
  return `<p class="response-text">${parts.join('')}</p>`;
}

export function renderHighlightGuidance(highlights: Highlight[]): string {
  const blocks: string[] = [];
  for (const highlight of highlights) {
    if (highlight.status === 'supported') {
      const links = highlight.evidence
        .map(
          (hit) => `<li><a href="${escapeHtml(hit.url)}" target="_blank" rel="noreferrer">
            ${escapeHtml(hit.title || hit.url)}</a></li>`
        )
        .join('\n');
      blocks.push(
        `<div class="guidance guidance-blue" data-claim-id="${escapeHtml(highlight.claim_id)}">
          <span class="badge badge-blue">similar content found</span>
          <ul class="evidence-links">${links}</ul>
        </div>`
      );
    } else if (highlight.status === 'unsupported') {
      blocks.push(
        `<div class="guidance guidance-red" data-claim-id="${escapeHtml(highlight.claim_id)}">
          <span class="badge badge-red">no similar content found</span>
          <button class="recommended-search" data-action="recommended-search"
                  data-query="${escapeHtml(highlight.recommended_query)}">
            Search: ${escapeHtml(highlight.recommended_query)}
          </button>
        </div>`
      );
    }
    // not_applicable: no highlight, no guidance
  }
  return blocks.join('\n');
}

export function renderDoubleCheck(
  response: ResponsePayload,
  claims: Claim[],
  report: DoubleCheckReport
): string {
  return `
  <section class="double-check-result">
    <h4>Double check — coverage ${report.coverage.toFixed(2)}
      ${report.passed ? '<span class="badge badge-pass">passed</span>' : ''}</h4>
    ${renderHighlightedResponse(response, claims, report.highlights)}
    ${renderHighlightGuidance(report.highlights)}
    ${report.warnings.map((w) => `<p class="warning">${escapeHtml(w)}</p>`).join('')}
  </section>`;
}

export function renderSourceCitations(result: SourceVerification): string {
  const chips = result.citations
    .map(
      (c) => `<li class="citation-chip" data-doc-id="${escapeHtml(c.doc_id)}">
        ${escapeHtml(c.message)} <span class="muted">(similarity ${c.similarity.toFixed(2)})</span>
      </li>`
    )
    .join('\n');
  return `
  <section class="source-result">
    <h4>Source — coverage ${result.coverage.toFixed(2)}
      ${result.passed ? '<span class="badge badge-pass">passed</span>' : ''}</h4>
    <ul class="citations">${chips || '<li class="empty">no corpus matches</li>'}</ul>
  </section>`;
}

export function renderCompare(report: CompareReport, turn: TurnPayload): string {
  const commonIds = new Set(
    report.common_clusters.flatMap((c) => c.members.map(([, claimId]) => claimId))
  );
  const columns = turn.responses
    .map((response) => {
      const claims = turn.claims[response.id] ?? [];
      const body = claims
        .map((claim) => {
          const shared = commonIds.has(claim.id);
          return `<p class="${shared ? 'claim shared-claim' : 'claim'}"
                     data-claim-id="${escapeHtml(claim.id)}">${escapeHtml(claim.text)}</p>`;
        })
        .join('\n');
      const coverage = report.per_response_coverage[response.id];
      return `<div class="compare-column" data-response-id="${escapeHtml(response.id)}">
        <h5>${escapeHtml(response.provider_id)}
          <span class="muted">consensus ${coverage === undefined ? '-' : coverage.toFixed(2)}</span></h5>
        ${body}
      </div>`;
    })
    .join('\n');
  const shared = report.common_clusters
    .map(
      (c) => `<li>[${c.support}x] ${escapeHtml(c.representative_text)}</li>`
    )
    .join('\n');
  return `
  <section class="compare-result">
    <h4>Compare — ${report.provider_ids.map(escapeHtml).join(', ')}</h4>
    <div class="compare-grid">${columns}</div>
    <h5>Common content</h5>
    <ul class="common-clusters">${shared || '<li class="empty">no shared claims</li>'}</ul>
  </section>`;
}

// --- per-mode central content ---------------------------------------------

function renderTurnFeed(session: SessionDetail): string {
  if (session.turns.length === 0) {
    return '<p class="empty">No turns yet. Send a prompt below to begin.</p>';
  }
  return session.turns
    .map((turn) => {
      const responses = turn.responses
        .map(
          (response) => `
          <article class="response-card" data-response-id="${escapeHtml(response.id)}">
            <h5>${escapeHtml(response.provider_id)}
              <button data-action="bookmark" data-response-id="${escapeHtml(response.id)}"
                      title="Bookmark this response">&#9734;</button></h5>
            <p>${escapeHtml(response.text)}</p>
          </article>`
        )
        .join('\n');
      const errors = turn.errors
        .map(
          (err) => `<p class="warning">${escapeHtml(err.provider_id)} failed:
            ${escapeHtml(err.error)}</p>`
        )
        .join('\n');
      return `<section class="turn">
        <p class="prompt-echo">&raquo; ${escapeHtml(turn.prompt_text)}</p>
        ${responses}${errors}
      </section>`;
    })
    .join('\n');
}

function renderVerificationScreen(state: AppState): string {
  const session = state.session;
  if (!session || session.turns.length === 0) {
    return `<div class="empty-state" data-element="no-responses-guidance">
      <p>No responses to verify. Return to generation mode and send a prompt first.</p>
    </div>`;
  }
  const options = session.turns
    .flatMap((turn) => turn.responses)
    .map((response) => {
      const selected = response.id === state.selectedResponseId ? ' selected' : '';
      return `<option value="${escapeHtml(response.id)}"${selected}>
        ${escapeHtml(response.provider_id)} — ${escapeHtml(response.text.slice(0, 60))}</option>`;
    })
    .join('\n');
  const selectedId = state.selectedResponseId;
  let results = '';
  if (selectedId && state.verificationViews[selectedId]) {
    const views = state.verificationViews[selectedId];
    const pair = findResponse(session, selectedId);
    if (views.source) {
      results += renderSourceCitations(views.source);
    }
    if (views.doubleCheck && pair) {
      results += renderDoubleCheck(pair.response, pair.claims, views.doubleCheck);
    }
  }
  if (state.compareReport) {
    const turn = session.turns.find((t) => t.index === state.compareReport!.turn_index);
    if (turn) {
      results += renderCompare(state.compareReport, turn);
    }
  }
  return `
  <div class="verification-screen">
    <div class="verify-controls">
      <select data-element="response-picker" data-action="pick-response">${options}</select>
      <button data-action="run-source" ${selectedId ? '' : 'disabled'}>Source</button>
      <button data-action="run-double-check" ${selectedId ? '' : 'disabled'}>Double check</button>
      <button data-action="run-compare">Compare providers</button>
    </div>
    ${results}
  </div>`;
}

export function renderDecisionTable(table: DecisionTablePayload): string {
  // rows come pre-ranked from the API; render them in payload order
  const rows = table.rows
    .map((row) => {
      const criteria = ['source', 'double_check', 'compare']
        .map((name) => {
          const cell = row.criteria[name];
          if (!cell || !cell.evaluated) {
            return `<td class="muted">&mdash;</td>`;
          }
          return `<td>${cell.coverage.toFixed(2)}${cell.passed ? ' &#10003;' : ''}</td>`;
        })
        .join('\n');
      return `<tr data-response-id="${escapeHtml(row.response_id)}">
        <td class="num">${row.rank}</td>
        <td>${escapeHtml(row.provider_id)}</td>
        <td class="num">${row.score.value.toFixed(3)}</td>
        <td>${row.score.fully_verified ? '<span class="badge badge-full">fully verified</span>' : ''}</td>
        ${criteria}
        <td><button data-action="choose-decision"
                    data-response-id="${escapeHtml(row.response_id)}">Choose</button></td>
      </tr>`;
    })
    .join('\n');
  return `
  <table class="decision-table" data-element="decision-table">
    <thead>
      <tr><th>rank</th><th>provider</th><th>score</th><th></th>
          <th>source</th><th>double check</th><th>compare</th><th></th></tr>
    </thead>
    <tbody>${rows}</tbody>
  </table>`;
}

function renderDecisionScreen(state: AppState): string {
  if (!state.decisionTable) {
    return `<div class="empty-state" data-element="no-verifications-guidance">
      <p>No verified responses yet. Run verifications first.</p>
    </div>`;
  }
  return `
  <div class="decision-screen">
    ${renderDecisionTable(state.decisionTable)}
    <form class="rationale-form" data-action="decision-rationale">
      <input type="text" name="rationale" placeholder="Why this response?" />
    </form>
  </div>`;
}

function findResponse(
  session: SessionDetail,
  responseId: string
): { response: ResponsePayload; claims: Claim[] } | null {
  for (const turn of session.turns) {
    for (const response of turn.responses) {
      if (response.id === responseId) {
        return { response, claims: turn.claims[response.id] ?? [] };
      }
    }
  }
  return null;
}

// --- the full screen -----------------------------------------------------

export function renderMainScreen(state: AppState): string {
  const session = state.session;
  let central: string;
  if (!session) {
    central = '<p class="empty">Loading session…</p>';
  } else if (state.modeState.current === 'generation') {
    central = renderTurnFeed(session);
  } else if (state.modeState.current === 'verification') {
    central = renderVerificationScreen(state);
  } else {
    central = renderDecisionScreen(state);
  }
  const toast = state.toast
    ? `<div class="toast">${escapeHtml(state.toast)}</div>`
    : '';
  return `
  <div class="screen">
    ${renderModeMenu(state)}
    <main class="center">
      ${renderHeader(state)}
      <div class="content">${central}</div>
      ${renderPromptInput(state)}
    </main>
    ${renderWorkspacePanel(state)}
    ${toast}
  </div>`;
}
