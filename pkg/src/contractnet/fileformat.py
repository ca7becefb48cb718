"""JSON reading and writing for instances, choice specs, systems and split maps.

Instance file::

    {
      "agents": ["1", "2"],
      "contracts": [{"id": "c12", "participants": ["1", "2"]},
                    {"id": "a1", "participants": ["1"], "dummy": true}],
      "preferences": {"1": {"type": "linear", "ranking": ["c12", "a1"]}, ...}
    }

Preference objects (also used standalone as spec files)::

    {"type": "linear", "ranking": [best, ..., worst]}
    {"type": "weak",   "tiers": [[best tier], ..., [worst tier]]}
    {"type": "quota",  "ranking": [...], "quota": b}
    {"type": "union",  "parts": [[ranking], [ranking], ...]}
    {"type": "table",  "ground": [...], "entries": [[[menu], [choice]], ...]}

Table entries must list every menu of the ground set, the empty one included.
"""

from __future__ import annotations

import json
from pathlib import Path

from .choice import ChoiceSpec, Linear, Quota, Table, Union, Weak, powerset
from .core import Contract, Instance
from .errors import InputError


def _ids(value, what):
    if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
        raise InputError(f"{what} must be a list of string ids")
    return value


def spec_from_json(obj) -> ChoiceSpec:
    if not isinstance(obj, dict) or "type" not in obj:
        raise InputError("preference entry must be an object with a 'type' field")
    kind = obj["type"]
    try:
        if kind == "linear":
            return Linear(_ids(obj["ranking"], "ranking"))
        if kind == "weak":
            return Weak([_ids(t, "tier") for t in obj["tiers"]])
        if kind == "quota":
            return Quota(_ids(obj["ranking"], "ranking"), obj["quota"])
        if kind == "union":
            return Union([Linear(_ids(p, "union part")) for p in obj["parts"]])
        if kind == "table":
            ground = _ids(obj["ground"], "ground")
            entries = {}
            for pair in obj["entries"]:
                menu, chosen = pair
                entries[frozenset(_ids(menu, "menu"))] = frozenset(_ids(chosen, "choice"))
            return Table(frozenset(ground), entries)
    except KeyError as exc:
        raise InputError(f"{kind} preference is missing field {exc.args[0]!r}") from None
    except (TypeError, ValueError) as exc:
        if isinstance(exc, InputError):
            raise
        raise InputError(f"malformed {kind} preference: {exc}") from None
    raise InputError(f"unknown preference type {kind!r}")


def spec_to_json(spec: ChoiceSpec) -> dict:
    if isinstance(spec, Linear):
        return {"type": "linear", "ranking": list(spec.ranking)}
    if isinstance(spec, Weak):
        return {"type": "weak", "tiers": [sorted(t) for t in spec.tiers]}
    if isinstance(spec, Quota):
        return {"type": "quota", "ranking": list(spec.ranking), "quota": spec.b}
    if isinstance(spec, Union):
        return {"type": "union", "parts": [list(p.ranking) for p in spec.parts]}
    return {
        "type": "table",
        "ground": sorted(spec.ground),
        "entries": [[sorted(m), sorted(spec.entries[m])] for m in powerset(spec.ground)],
    }


def instance_from_json(obj) -> Instance:
    if not isinstance(obj, dict):
        raise InputError("instance file must hold a JSON object")
    for key in ("agents", "contracts", "preferences"):
        if key not in obj:
            raise InputError(f"instance is missing {key!r}")
    agents = _ids(obj["agents"], "agents")
    contracts = []
    for entry in obj["contracts"]:
        if not isinstance(entry, dict) or "id" not in entry or "participants" not in entry:
            raise InputError("each contract needs 'id' and 'participants'")
        parts = _ids(entry["participants"], f"participants of {entry['id']!r}")
        if len(set(parts)) != len(parts):
            raise InputError(f"contract {entry['id']!r} lists a participant twice")
        contracts.append(Contract(str(entry["id"]), frozenset(parts), bool(entry.get("dummy", False))))
    prefs = obj["preferences"]
    if not isinstance(prefs, dict):
        raise InputError("'preferences' must be an object keyed by agent id")
    equipment = {}
    for a, entry in prefs.items():
        try:
            equipment[a] = spec_from_json(entry)
        except InputError as exc:
            raise InputError(f"agent {a!r}: {exc}") from None
    return Instance.build(agents, contracts, equipment)


def instance_to_json(instance: Instance) -> dict:
    contracts = []
    for c in instance.contracts:
        entry = {"id": c.id, "participants": sorted(c.participants)}
        if c.autarkic_dummy:
            entry["dummy"] = True
        contracts.append(entry)
    return {
        "agents": list(instance.agents),
        "contracts": contracts,
        "preferences": {a: spec_to_json(s) for a, s in instance.equipment.items()},
    }


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def _load_json(path):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc})") from None


def load_instance(path) -> Instance:
    return instance_from_json(_load_json(path))


def save_instance(instance: Instance, path) -> None:
    Path(path).write_text(dumps(instance_to_json(instance)))


def load_spec(path) -> ChoiceSpec:
    return spec_from_json(_load_json(path))


def parse_system(text: str) -> frozenset:
    """A system given inline as a JSON array, or as a path to a file holding one."""
    text = text.strip()
    if text.startswith("["):
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError(f"invalid system {text!r}: {exc}") from None
    else:
        obj = _load_json(text)
    return frozenset(_ids(obj, "system"))


def splitmap_to_json(smap) -> dict:
    return {
        "agent_map": dict(sorted(smap.agent_map.items())),
        "contract_map": dict(sorted(smap.contract_map.items())),
        "steps": [
            {
                "agent": st.agent,
                "new_agents": list(st.new_agents),
                "parts": [spec_to_json(p) for p in st.parts],
                "copies": {c: list(v) for c, v in sorted(st.copies.items())},
            }
            for st in smap.steps
        ],
    }
