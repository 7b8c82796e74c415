"""Instance and placement files.

An instance file is a single JSON object:

    {
      "w0": 1.0,
      "products": [
        {"id": 1, "kind": "organic", "revenue": 10.0, "cost": 2.0, "group": "a"},
        {"id": 9, "kind": "sponsored", "revenue": 6.0}
      ],
      "positions": [
        {"slot": 1, "kind": "reserved"},
        {"slot": 2, "kind": "organic"}
      ],
      "weights": [{"product": 1, "slot": 2, "w": 0.8}],
      "valid_positions": {"9": [1]},
      "constraint": {"type": "none"}
    }

"cost" is required on organic products under a knapsack constraint,
"group" under a partition constraint; both are ignored otherwise.
Constraint objects take one of five shapes: {"type": "none"},
{"type": "cardinality", "max": n}, {"type": "knapsack", "capacity": c},
{"type": "partition", "caps": {label: n}}, or
{"type": "explicit", "feasible": [[ids], ...]}.

A placement file is {"placement": [{"slot": 1, "product": 9}, ...]}.
"""
from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from .errors import ParseError
from .model import (
    Cardinality,
    ConstraintFamily,
    Explicit,
    Instance,
    Knapsack,
    PartitionMatroid,
    Placement,
    UNCONSTRAINED,
)


def _require(data: dict, key: str, kind, where: str):
    if key not in data:
        raise ParseError(f"{where}: missing key {key!r}")
    value = data[key]
    if kind is float:
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            raise ParseError(f"{where}.{key}: expected a number, got {value!r}")
        return float(value)
    if kind is int:
        if not isinstance(value, int) or isinstance(value, bool):
            raise ParseError(f"{where}.{key}: expected an integer, got {value!r}")
        return value
    if not isinstance(value, kind):
        raise ParseError(f"{where}.{key}: expected {kind.__name__}, got {value!r}")
    return value


def _load_json(path: str | Path) -> Any:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path} is not valid JSON: {exc}") from exc


def _parse_constraint(data: Any, organics: dict[int, dict]) -> ConstraintFamily:
    if not isinstance(data, dict):
        raise ParseError(f"constraint: expected an object, got {data!r}")
    ctype = _require(data, "type", str, "constraint")
    if ctype == "none":
        return UNCONSTRAINED
    if ctype == "cardinality":
        return Cardinality(_require(data, "max", int, "constraint"))
    if ctype == "knapsack":
        capacity = _require(data, "capacity", float, "constraint")
        cost = {}
        for i, entry in organics.items():
            if "cost" not in entry:
                raise ParseError(f"products: organic product {i} needs a cost "
                                 "under a knapsack constraint")
            cost[i] = _require(entry, "cost", float, f"products[id={i}]")
        return Knapsack(cost, capacity)
    if ctype == "partition":
        caps_raw = _require(data, "caps", dict, "constraint")
        caps = {}
        for label, cap in caps_raw.items():
            if not isinstance(cap, int) or isinstance(cap, bool):
                raise ParseError(f"constraint.caps.{label}: expected an integer, got {cap!r}")
            caps[label] = cap
        groups = {}
        for i, entry in organics.items():
            if "group" not in entry:
                raise ParseError(f"products: organic product {i} needs a group "
                                 "under a partition constraint")
            groups[i] = _require(entry, "group", str, f"products[id={i}]")
        return PartitionMatroid(groups, caps)
    if ctype == "explicit":
        fsets = _require(data, "feasible", list, "constraint")
        parsed = set()
        for n, s in enumerate(fsets):
            if not isinstance(s, list) or any(
                    not isinstance(i, int) or isinstance(i, bool) for i in s):
                raise ParseError(f"constraint.feasible[{n}]: expected a list of product ids")
            parsed.add(frozenset(s))
        return Explicit(frozenset(parsed))
    raise ParseError(f"constraint.type: unknown type {ctype!r}")


def instance_from_dict(data: Any, where: str = "instance") -> Instance:
    """Build an Instance from parsed JSON; ParseError names the offending
    key, ValidationError covers semantic breaks."""
    if not isinstance(data, dict):
        raise ParseError(f"{where}: expected a JSON object")
    w0 = _require(data, "w0", float, where)
    products = _require(data, "products", list, where)
    organic: dict[int, dict] = {}
    sponsored: dict[int, dict] = {}
    revenue: dict[int, float] = {}
    for n, entry in enumerate(products):
        if not isinstance(entry, dict):
            raise ParseError(f"products[{n}]: expected an object")
        pid = _require(entry, "id", int, f"products[{n}]")
        kind = _require(entry, "kind", str, f"products[{n}]")
        if pid in revenue:
            raise ParseError(f"products[{n}]: duplicate product id {pid}")
        revenue[pid] = _require(entry, "revenue", float, f"products[{n}]")
        if kind == "organic":
            organic[pid] = entry
        elif kind == "sponsored":
            sponsored[pid] = entry
        else:
            raise ParseError(f"products[{n}].kind: expected 'organic' or 'sponsored', "
                             f"got {kind!r}")
    positions = _require(data, "positions", list, where)
    organic_pos: set[int] = set()
    reserved_pos: set[int] = set()
    for n, entry in enumerate(positions):
        if not isinstance(entry, dict):
            raise ParseError(f"positions[{n}]: expected an object")
        slot = _require(entry, "slot", int, f"positions[{n}]")
        kind = _require(entry, "kind", str, f"positions[{n}]")
        if slot in organic_pos or slot in reserved_pos:
            raise ParseError(f"positions[{n}]: duplicate slot {slot}")
        if kind == "organic":
            organic_pos.add(slot)
        elif kind == "reserved":
            reserved_pos.add(slot)
        else:
            raise ParseError(f"positions[{n}].kind: expected 'organic' or 'reserved', "
                             f"got {kind!r}")
    weights_raw = _require(data, "weights", list, where)
    weight: dict[tuple[int, int], float] = {}
    for n, entry in enumerate(weights_raw):
        if not isinstance(entry, dict):
            raise ParseError(f"weights[{n}]: expected an object")
        i = _require(entry, "product", int, f"weights[{n}]")
        t = _require(entry, "slot", int, f"weights[{n}]")
        weight[(i, t)] = _require(entry, "w", float, f"weights[{n}]")
    vp_raw = _require(data, "valid_positions", dict, where)
    valid_positions: dict[int, frozenset[int]] = {}
    for key, slots in vp_raw.items():
        try:
            pid = int(key)
        except ValueError:
            raise ParseError(f"valid_positions: key {key!r} is not a product id") from None
        if not isinstance(slots, list) or any(
                not isinstance(t, int) or isinstance(t, bool) for t in slots):
            raise ParseError(f"valid_positions.{key}: expected a list of slots")
        valid_positions[pid] = frozenset(slots)
    constraint = _parse_constraint(data.get("constraint", {"type": "none"}), organic)
    return Instance(
        organic=frozenset(organic),
        sponsored=frozenset(sponsored),
        revenue=revenue,
        weight=weight,
        w0=w0,
        organic_positions=frozenset(organic_pos),
        reserved_positions=frozenset(reserved_pos),
        valid_positions=valid_positions,
        organic_constraint=constraint,
    )


def parse_instance(path: str | Path) -> Instance:
    """Load an instance file; see the module docstring for the schema."""
    return instance_from_dict(_load_json(path), where=str(path))


def _constraint_to_dict(c: ConstraintFamily) -> dict:
    if isinstance(c, Cardinality):
        return {"type": "cardinality", "max": c.max_products}
    if isinstance(c, Knapsack):
        return {"type": "knapsack", "capacity": c.capacity}
    if isinstance(c, PartitionMatroid):
        return {"type": "partition", "caps": dict(sorted(c.caps.items()))}
    if isinstance(c, Explicit):
        return {"type": "explicit",
                "feasible": sorted((sorted(s) for s in c.feasible), key=lambda s: (len(s), s))}
    return {"type": "none"}


def instance_to_dict(inst: Instance) -> dict:
    """Canonical JSON form of an instance; inverse of instance_from_dict."""
    products = []
    for i in sorted(inst.organic | inst.sponsored):
        entry: dict[str, Any] = {
            "id": i,
            "kind": "organic" if i in inst.organic else "sponsored",
            "revenue": inst.revenue[i],
        }
        if i in inst.organic:
            c = inst.organic_constraint
            if isinstance(c, Knapsack):
                entry["cost"] = c.cost[i]
            if isinstance(c, PartitionMatroid):
                entry["group"] = c.groups[i]
        products.append(entry)
    positions = [
        {"slot": t, "kind": "organic" if t in inst.organic_positions else "reserved"}
        for t in sorted(inst.organic_positions | inst.reserved_positions)]
    weights = [
        {"product": i, "slot": t, "w": w}
        for (i, t), w in sorted(inst.weight.items())]
    return {
        "w0": inst.w0,
        "products": products,
        "positions": positions,
        "weights": weights,
        "valid_positions": {str(i): sorted(ts) for i, ts in sorted(inst.valid_positions.items())},
        "constraint": _constraint_to_dict(inst.organic_constraint),
    }


def parse_placement(path: str | Path) -> list[tuple[int, int]]:
    """Load a placement file as raw (slot, product) pairs.

    Duplicates are preserved so the feasibility checker can report them;
    build a Placement from the result to enforce injectivity.
    """
    data = _load_json(path)
    if not isinstance(data, dict):
        raise ParseError(f"{path}: expected a JSON object")
    entries = _require(data, "placement", list, str(path))
    pairs = []
    for n, entry in enumerate(entries):
        if not isinstance(entry, dict):
            raise ParseError(f"placement[{n}]: expected an object")
        t = _require(entry, "slot", int, f"placement[{n}]")
        i = _require(entry, "product", int, f"placement[{n}]")
        pairs.append((t, i))
    return pairs


def placement_to_dict(pl: Placement) -> list[dict]:
    return [{"slot": t, "product": i} for t, i in pl.pairs]
