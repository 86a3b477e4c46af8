"""Shared fixture-loading helpers."""

from __future__ import annotations

from pathlib import Path

import pytest

from semcheck import Gps, Lts, parse_gps, parse_lts

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def load_lts(name: str) -> Lts:
    return parse_lts((FIXTURES / f"{name}.lts").read_text())


def load_gps(name: str) -> Gps:
    return parse_gps((FIXTURES / f"{name}.lts").read_text())


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES
