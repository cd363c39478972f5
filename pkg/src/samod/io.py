"""JSON serialisation of modules, retraction specs and action tables.

A module reference is a fixture id string, a path to a JSON file, or an
inline dict::

    {"name": "...", "labels": [...], "zero": 0, "add": [[...]], "act": [[...]],
     "ring": "NSAT(3)" | {"labels": [...], "zero": 0, "one": 1, "add": [[...]], "mul": [[...]]}}
"""

from __future__ import annotations

import json
import os

from .actions import ActionTable
from .algebra import FiniteModule, SemiringTable
from .errors import MalformedTableError, SamodError
from .fixtures import make_fixture
from .retraction import RetractionSpec


def ring_to_json(R: SemiringTable) -> dict:
    return {"name": R.name, "labels": list(R.labels), "zero": R.zero, "one": R.one,
            "add": [list(r) for r in R.add], "mul": [list(r) for r in R.mul]}


def module_to_json(V: FiniteModule) -> dict:
    return {"name": V.name, "labels": list(V.labels), "zero": V.zero,
            "add": [list(r) for r in V.add], "act": [list(r) for r in V.act],
            "ring": ring_to_json(V.ring)}


def _table(data, key):
    try:
        return [list(map(int, row)) for row in data[key]]
    except (KeyError, TypeError, ValueError) as e:
        raise MalformedTableError(f"bad or missing table {key!r}") from e


def ring_from_json(data) -> SemiringTable:
    if isinstance(data, str):
        R, _ = make_fixture(data)
        return R
    add = _table(data, "add")
    R = SemiringTable(len(add), add, _table(data, "mul"), int(data.get("zero", 0)), int(data.get("one", 1)),
                      data.get("labels"), data.get("name", ""))
    R.check_structure()
    return R


def module_from_json(data: dict) -> FiniteModule:
    if "fixture" in data:
        return make_fixture(data["fixture"])[1]
    if "ring" not in data:
        raise MalformedTableError("module JSON needs a ring")
    R = ring_from_json(data["ring"])
    add = _table(data, "add")
    V = FiniteModule(R, len(add), add, _table(data, "act"), int(data.get("zero", 0)),
                     data.get("labels"), data.get("name", ""))
    V.check_structure()
    return V


def load_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as e:
        raise SamodError(f"{path}: invalid JSON ({e})") from e


def load_module(ref) -> FiniteModule:
    """Resolve a module reference (fixture id, JSON path or inline dict)."""
    if isinstance(ref, FiniteModule):
        return ref
    if isinstance(ref, dict):
        return module_from_json(ref)
    if isinstance(ref, str) and (ref.endswith(".json") or os.path.sep in ref) and os.path.exists(ref):
        return module_from_json(load_json(ref))
    return make_fixture(ref)[1]


def load_retraction_spec(ref) -> RetractionSpec:
    data = load_json(ref) if isinstance(ref, str) else ref
    return RetractionSpec.from_json(data)


def action_to_json(a: ActionTable, actor_ref=None, target_ref=None) -> dict:
    return {"actor": actor_ref if actor_ref is not None else module_to_json(a.actor),
            "target": target_ref if target_ref is not None else module_to_json(a.target),
            "table": [list(r) for r in a.table]}


def action_from_json(data) -> ActionTable:
    if isinstance(data, str):
        data = load_json(data)
    return ActionTable(load_module(data["actor"]), load_module(data["target"]), _table(data, "table"))


def dumps(obj) -> str:
    """Canonical JSON text: sorted keys, fixed separators, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
