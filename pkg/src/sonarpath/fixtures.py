"""Bundled example models, loadable without knowing file locations."""

from __future__ import annotations

from importlib import resources

from .io import ModelDocument, loads

def fixture_names() -> list[str]:
    return ["model1", "model2", "model3"]


def fixture_text(name: str) -> str:
    if name not in fixture_names():
        raise KeyError(f"unknown fixture {name!r}")
    return (resources.files("sonarpath") / "data" / f"{name}.json").read_text(
        encoding="utf-8"
    )


def load_fixture(name: str) -> ModelDocument:
    return loads(fixture_text(name))
