import json

import pytest

from twai.config import load_config
from twai.workbench import Workbench

PROMPT_REDESIGN = (
    "I'd like to redesign the UI of Netflix. "
    "Can you select one problem that I need to redesign?"
)
PROMPT_CRITICAL = "Tell me about the most critical problem of Netflix's UI."

RESPONSE_A = (
    "The home screen is cluttered. Users cannot find titles. "
    "The autoplay preview cannot be disabled in the mobile app."
)
RESPONSE_B = (
    "The home screen is cluttered. "
    "Promotional rows push personal lists below the fold."
)

SEARCH_FIXTURE = {
    "The home screen is cluttered": [
        {
            "url": "https://example.org/streaming-ux-review",
            "title": "Streaming UX review",
            "snippet": "The home screen is cluttered",
        }
    ],
    "Users cannot find titles.": [
        {
            "url": "https://example.org/title-discovery-study",
            "title": "Title discovery study",
            "snippet": "Users cannot find titles.",
        }
    ],
    "The autoplay preview cannot be disabled in the mobile app.": [
        {
            "url": "https://example.org/autoplay-complaints",
            "title": "Autoplay complaints thread",
            "snippet": "The autoplay preview cannot be disabled in the mobile app.",
        }
    ],
}


def provider_entry(provider_id, fixtures=None, delay_ms=0, fail=False):
    config = {}
    if fixtures is not None:
        config["fixtures"] = fixtures
    if delay_ms:
        config["delay_ms"] = delay_ms
    if fail:
        config["fail"] = True
    return {
        "id": provider_id,
        "display_name": provider_id,
        "kind": "mock",
        "endpoint_config": config,
    }


DEFAULT_PROVIDERS = [
    provider_entry(
        "mock-a",
        fixtures={PROMPT_REDESIGN: [RESPONSE_A], PROMPT_CRITICAL: [RESPONSE_A]},
    ),
    provider_entry(
        "mock-b",
        fixtures={PROMPT_REDESIGN: [RESPONSE_B], PROMPT_CRITICAL: [RESPONSE_B]},
    ),
]


def make_bench(tmp_path, providers=None, search_fixture=None, name="ws", **config):
    workspace = tmp_path / name
    providers_file = tmp_path / f"{name}-providers.json"
    providers_file.write_text(
        json.dumps(providers if providers is not None else DEFAULT_PROVIDERS)
    )
    fixture_file = tmp_path / f"{name}-search.json"
    fixture_file.write_text(
        json.dumps(search_fixture if search_fixture is not None else SEARCH_FIXTURE)
    )
    cfg = load_config(
        env={},
        overrides={
            "workspace": str(workspace),
            "providers_file": str(providers_file),
            "search_fixture_file": str(fixture_file),
            **config,
        },
    )
    return Workbench(cfg)


@pytest.fixture
def bench(tmp_path):
    return make_bench(tmp_path)
