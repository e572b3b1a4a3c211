"""Loader for the shipped seed model (Identity Management and Access Control)."""

from __future__ import annotations

from importlib import resources

from .model import MaturityModel
from .modelio import parse_model

_SEED_RESOURCE = "identity_access.json"


def seed_model_bytes() -> bytes:
    return resources.files("famm").joinpath("data", _SEED_RESOURCE).read_bytes()


def load_seed_model() -> MaturityModel:
    return parse_model(seed_model_bytes())
