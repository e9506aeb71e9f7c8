"""Typed service descriptors and the schema gate that protects the catalogue.

A descriptor is the structured document a backend advertises for one
operation: protocol, invocation path, and the input/output message formats.
List parameters repeat a flat record of scalars (one level, matching what a
table can display).
"""

import json
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources

import jsonschema


@dataclass
class ParameterSpec:
    name: str
    kind: str  # scalar field kind, or "list"
    required: bool = False
    items: list["ParameterSpec"] = field(default_factory=list)  # only when kind == "list"

    def is_list(self) -> bool:
        return self.kind == "list"

    def find_item(self, name: str) -> "ParameterSpec | None":
        for item in self.items:
            if item.name == name:
                return item
        return None


@dataclass
class ServiceDescriptor:
    system_id: str
    service_id: str
    name: str
    description: str
    protocol: str
    invocation_path: str
    inputs: list[ParameterSpec] = field(default_factory=list)
    outputs: list[ParameterSpec] = field(default_factory=list)

    def find_input(self, name: str) -> ParameterSpec | None:
        return _find(self.inputs, name)

    def find_output(self, name: str) -> ParameterSpec | None:
        return _find(self.outputs, name)


def _find(params: list[ParameterSpec], name: str) -> ParameterSpec | None:
    for p in params:
        if p.name == name:
            return p
    return None


@dataclass
class BackendSystem:
    system_id: str
    display_name: str
    discovery_endpoint: str
    protocol: str = "http-json"


# ---------------------------------------------------------------------------
# schema gate


@lru_cache(maxsize=1)
def descriptor_schema() -> dict:
    text = resources.files("screenforge.registry").joinpath("descriptor.schema").read_text("utf-8")
    return json.loads(text)


@lru_cache(maxsize=1)
def _validator():
    return jsonschema.Draft202012Validator(descriptor_schema())


def descriptor_problems(doc) -> list[str]:
    """Every reason this wire document is not a valid descriptor (empty = valid)."""
    problems = [e.message for e in _validator().iter_errors(doc)]
    if problems:
        return problems
    for side in ("inputs", "outputs"):
        names = [p["name"] for p in doc[side]]
        dupes = sorted({n for n in names if names.count(n) > 1})
        if dupes:
            problems.append(f"duplicate {side} parameter names {dupes}")
    return problems


# ---------------------------------------------------------------------------
# wire document <-> typed descriptor


def _param_from_doc(doc: dict) -> ParameterSpec:
    return ParameterSpec(
        name=doc["name"],
        kind=doc["kind"],
        required=doc.get("required", False),
        items=[_param_from_doc(i) for i in doc.get("items", [])],
    )


def _param_to_doc(p: ParameterSpec) -> dict:
    doc = {"name": p.name, "kind": p.kind, "required": p.required}
    if p.is_list():
        doc["items"] = [{"name": i.name, "kind": i.kind, "required": i.required} for i in p.items]
    return doc


def descriptor_from_doc(doc: dict, system_id: str) -> ServiceDescriptor:
    """Build a typed descriptor from a schema-valid wire document.

    The wire document does not know the registry-assigned system id, so it
    is stamped on here at ingest time.
    """
    return ServiceDescriptor(
        system_id=system_id,
        service_id=doc["serviceId"],
        name=doc["name"],
        description=doc["description"],
        protocol=doc["protocol"],
        invocation_path=doc["invocationPath"],
        inputs=[_param_from_doc(p) for p in doc["inputs"]],
        outputs=[_param_from_doc(p) for p in doc["outputs"]],
    )


def descriptor_to_doc(d: ServiceDescriptor) -> dict:
    return {
        "systemId": d.system_id,
        "serviceId": d.service_id,
        "name": d.name,
        "description": d.description,
        "protocol": d.protocol,
        "invocationPath": d.invocation_path,
        "inputs": [_param_to_doc(p) for p in d.inputs],
        "outputs": [_param_to_doc(p) for p in d.outputs],
    }


def descriptor_from_stored_doc(doc: dict) -> ServiceDescriptor:
    return descriptor_from_doc(doc, system_id=doc["systemId"])
