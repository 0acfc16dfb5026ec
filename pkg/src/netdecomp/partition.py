"""Six-cell node decomposition and the assembled analysis report."""

from __future__ import annotations

from dataclasses import dataclass

from . import __version__
from .controllability import ControllabilityResult, ControllableChoice, control
from .exceptions import MismatchedSystem
from .observability import ObservabilityResult, observe
from .system import NetworkSystem

CELLS = ("C&O", "P&O", "rest&O", "C&notO", "P&notO", "rest&notO")


@dataclass(frozen=True)
class NodePartition:
    cells: dict          # cell name -> frozenset of node indices, keyed by CELLS
    C2: frozenset

    def __getitem__(self, name: str) -> frozenset:
        return self.cells[name]

    def cell_of(self, node: int) -> str:
        return next(name for name in CELLS if node in self.cells[name])

    def to_json(self, labels) -> dict:
        return {"C2": [labels[i] for i in sorted(self.C2)],
                "cells": {name: [labels[i] for i in sorted(self.cells[name])]
                          for name in CELLS}}


def partition(obs: ObservabilityResult, ctrl: ControllabilityResult,
              choice: ControllableChoice) -> NodePartition:
    if obs.fingerprint != ctrl.fingerprint:
        raise MismatchedSystem(
            f"observability ({obs.fingerprint}) and controllability ({ctrl.fingerprint}) "
            "results come from different systems")
    n = obs.O.cols
    O = obs.observable_set
    C, P = choice.C, choice.P
    rest = frozenset(range(n)) - C - P
    notO = frozenset(range(n)) - O
    cells = {
        "C&O": C & O, "P&O": P & O, "rest&O": rest & O,
        "C&notO": C & notO, "P&notO": P & notO, "rest&notO": rest & notO,
    }
    return NodePartition(cells, choice.C2)


def analyze(sys: NetworkSystem, limit: int | None = 64):
    """Run both analyses and partition every reported choice."""
    obs = observe(sys)
    ctrl = control(sys, limit)
    return obs, ctrl, [partition(obs, ctrl, c) for c in ctrl.choices]


def report(sys: NetworkSystem, obs: ObservabilityResult, ctrl: ControllabilityResult,
           parts, seeds=()) -> dict:
    """JSON-ready analysis report; identical inputs give identical output."""
    return {
        "tool": "netdecomp",
        "version": __version__,
        "system": {"n": sys.n, "m": sys.n_inputs, "p": sys.n_outputs,
                   "fingerprint": sys.fingerprint()},
        "observability": obs.to_json(),
        "controllability": {k: v for k, v in ctrl.to_json().items() if k != "choices"},
        "partitions": [p.to_json(sys.labels) for p in parts],
        "seeds": list(seeds),
    }
