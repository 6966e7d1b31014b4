"""Trustworthy-AI workbench.

A four-stage collaboration loop over generative-AI providers:
generate responses, verify them three ways (corpus citations, web
double check, cross-provider compare), decide from a reliability-
ranked table, and loop. Runs fully offline against deterministic mock
providers and search fixtures.
"""

from .config import WorkbenchConfig, load_config
from .workbench import Workbench

__version__ = "0.1.0"

__all__ = ["Workbench", "WorkbenchConfig", "load_config", "__version__"]
