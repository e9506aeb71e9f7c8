"""Simulated enterprise backend for development and tests."""

from .api import create_app
from .data import DESCRIPTOR_DOCS, SERVICE_IDS, FixtureDataset, handle_invoke

__all__ = ["DESCRIPTOR_DOCS", "SERVICE_IDS", "FixtureDataset", "create_app", "handle_invoke"]
