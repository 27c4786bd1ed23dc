"""Small reference machines shipped with the package."""

from __future__ import annotations

from importlib import resources

from .formats import parse_tm
from .turing import TuringMachine

NAMES = ("halt1", "loop1", "loop2", "count3")


def machine_text(name: str) -> str:
    return resources.files(__package__).joinpath("machines", f"{name}.tm").read_text()


def load(name: str) -> TuringMachine:
    """``halt1`` halts in one step, ``count3`` in three; ``loop2`` cycles; ``loop1`` runs off to the right."""
    return parse_tm(machine_text(name), f"{name}.tm")
