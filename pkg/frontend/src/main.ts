// Browser bootstrap: build the controller against the API origin,
// re-render on every state change, and translate DOM events into
// controller calls. All markup comes from render.ts.

import { ApiClient } from './api.js';
import { WorkbenchController } from './controller.js';
import { renderMainScreen } from './render.js';
import type { Mode } from './types.js';

const apiBase =
  new URLSearchParams(window.location.search).get('api') ?? '';
const root = document.getElementById('app');

if (root) {
  const controller = new WorkbenchController(new ApiClient(apiBase), (state) => {
    root.innerHTML = renderMainScreen(state);
  });

  root.addEventListener('click', (event) => {
    const target = (event.target as HTMLElement).closest<HTMLElement>('[data-action]');
    if (!target) return;
    const action = target.dataset.action;
    if (action === 'switch-mode' && target.dataset.mode) {
      void controller.switchMode(target.dataset.mode as Mode);
    } else if (action === 'open-help') {
      void controller.toggleHelp();
    } else if (action === 'close-help') {
      void controller.toggleHelp();
    } else if (action === 'run-source') {
      void controller.runSource();
    } else if (action === 'run-double-check') {
      void controller.runDoubleCheck();
    } else if (action === 'run-compare') {
      const prompt = window.prompt('Prompt to send to all providers for comparison:');
      if (prompt) void controller.runCompare(prompt);
    } else if (action === 'bookmark' && target.dataset.responseId) {
      void controller.bookmark(target.dataset.responseId);
    } else if (action === 'choose-decision' && target.dataset.responseId) {
      const rationaleInput =
        root.querySelector<HTMLInputElement>('.rationale-form input[name=rationale]');
      void controller.chooseDecision(
        target.dataset.responseId,
        rationaleInput?.value ?? ''
      );
    } else if (action === 'recommended-search' && target.dataset.query) {
      window.open(
        `https://www.google.com/search?q=${encodeURIComponent(target.dataset.query)}`,
        '_blank'
      );
    } else if (action === 'use-template' && target.dataset.body) {
      const input = root.querySelector<HTMLInputElement>('.prompt-form input[name=prompt]');
      if (input) input.value = target.dataset.body;
    }
  });

  root.addEventListener('submit', (event) => {
    const form = (event.target as HTMLElement).closest<HTMLFormElement>('[data-action]');
    if (!form) return;
    event.preventDefault();
    if (form.dataset.action === 'submit-prompt') {
      const input = form.querySelector<HTMLInputElement>('input[name=prompt]');
      if (input && input.value.trim()) {
        void controller.submitPrompt(input.value);
        input.value = '';
      }
    }
  });

  root.addEventListener('change', (event) => {
    const select = (event.target as HTMLElement).closest<HTMLSelectElement>(
      '[data-action=pick-response]'
    );
    if (select) {
      controller.pickResponse(select.value);
    }
  });

  void controller.start(
    new URLSearchParams(window.location.search).get('session') ?? undefined
  );
}
