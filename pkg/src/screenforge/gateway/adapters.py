"""Adapter generation, persistence, and invocation.

An adapter is the gateway-side mediation recipe compiled from one checked
binding and its descriptor. Backend endpoints live only here; bundles carry
adapter ids and nothing else, so client artifacts can never talk to a
backend directly.
"""

import hashlib
import json
import os
import threading
from dataclasses import dataclass, field
from pathlib import Path

import httpx

from ..model.document import binding_to_doc, mapping_to_doc
from ..model.types import Application, DataMapping, DataRef, Diagnostic, ServiceBinding
from ..registry.binding_check import check_binding
from ..registry.descriptors import ServiceDescriptor

DEFAULT_TIMEOUT = 5.0  # seconds; no automatic retry, failures surface as diagnostics


class AdapterError(Exception):
    def __init__(self, code: str, message: str, status: int | None = None, diagnostics=None):
        super().__init__(message)
        self.code = code
        self.status = status
        self.diagnostics = diagnostics or []


@dataclass
class AdapterSpec:
    adapter_id: str
    system_id: str
    service_id: str
    endpoint: str
    invocation_path: str
    request_mappings: list[DataMapping] = field(default_factory=list)
    response_mappings: list[DataMapping] = field(default_factory=list)


def adapter_id_for(binding: ServiceBinding) -> str:
    """Content-derived adapter id; identical bindings share one adapter."""
    canonical = json.dumps(binding_to_doc(binding), sort_keys=True)
    return "ad-" + hashlib.sha256(canonical.encode("utf-8")).hexdigest()[:12]


def generate_adapter(
    binding: ServiceBinding,
    descriptor: ServiceDescriptor,
    app: Application,
    endpoint: str,
    form_id: str | None = None,
) -> AdapterSpec:
    """Compile a checked binding into an adapter.

    Re-runs the binding check; a binding that does not check clean raises
    UNCHECKED_BINDING carrying the diagnostics.
    """
    diags = check_binding(binding, descriptor, app, form_id=form_id)
    errors = [d for d in diags if d.severity == "error"]
    if errors:
        raise AdapterError(
            "UNCHECKED_BINDING",
            f"binding to '{descriptor.service_id}' has {len(errors)} unresolved binding errors",
            diagnostics=errors,
        )
    return AdapterSpec(
        adapter_id=adapter_id_for(binding),
        system_id=descriptor.system_id,
        service_id=descriptor.service_id,
        endpoint=endpoint.rstrip("/"),
        invocation_path=descriptor.invocation_path,
        request_mappings=list(binding.inputs),
        response_mappings=list(binding.outputs),
    )


def invoke_adapter(
    adapter: AdapterSpec,
    request: dict,
    timeout: float = DEFAULT_TIMEOUT,
) -> dict:
    """POST the request record to the backend and parse the response record."""
    url = adapter.endpoint + adapter.invocation_path
    try:
        response = httpx.post(
            url,
            json=request,
            timeout=timeout,
            headers={"user-agent": "screenforge-gateway"},
        )
    except httpx.HTTPError as exc:
        raise AdapterError("UNREACHABLE", f"cannot reach {url}: {exc}") from exc
    if response.status_code >= 400:
        raise AdapterError(
            "BACKEND_ERROR",
            f"{adapter.service_id} answered HTTP {response.status_code}",
            status=response.status_code,
        )
    try:
        record = response.json()
    except ValueError as exc:
        raise AdapterError("MALFORMED_RESPONSE", f"{url} did not answer JSON") from exc
    if not isinstance(record, dict):
        raise AdapterError("MALFORMED_RESPONSE", f"{url} answered a non-record body")
    return record


# ---------------------------------------------------------------------------
# adapter store: the gateway's private map of adapter id -> full spec


def _mapping_from_doc(doc: dict) -> DataMapping:
    return DataMapping(
        source=DataRef(scope=doc["from"]["scope"], path=doc["from"]["path"]),
        dest=DataRef(scope=doc["to"]["scope"], path=doc["to"]["path"]),
    )


def adapter_to_doc(a: AdapterSpec) -> dict:
    return {
        "adapterId": a.adapter_id,
        "systemId": a.system_id,
        "serviceId": a.service_id,
        "endpoint": a.endpoint,
        "invocationPath": a.invocation_path,
        "requestMappings": [mapping_to_doc(m) for m in a.request_mappings],
        "responseMappings": [mapping_to_doc(m) for m in a.response_mappings],
    }


def adapter_from_doc(doc: dict) -> AdapterSpec:
    return AdapterSpec(
        adapter_id=doc["adapterId"],
        system_id=doc["systemId"],
        service_id=doc["serviceId"],
        endpoint=doc["endpoint"],
        invocation_path=doc["invocationPath"],
        request_mappings=[_mapping_from_doc(m) for m in doc["requestMappings"]],
        response_mappings=[_mapping_from_doc(m) for m in doc["responseMappings"]],
    )


class AdapterStore:
    """File-backed adapter specs with in-memory read-through."""

    def __init__(self, path: Path):
        self.path = Path(path)
        self._lock = threading.Lock()
        self._cache: dict[str, AdapterSpec] = {}
        self._refresh()

    def _refresh(self) -> None:
        if not self.path.exists():
            return
        doc = json.loads(self.path.read_text("utf-8"))
        self._cache = {a["adapterId"]: adapter_from_doc(a) for a in doc.get("adapters", [])}

    def put_all(self, adapters: list[AdapterSpec]) -> None:
        with self._lock:
            self._refresh()
            for a in adapters:
                self._cache[a.adapter_id] = a
            self.path.parent.mkdir(parents=True, exist_ok=True)
            doc = {"adapters": [adapter_to_doc(a) for _, a in sorted(self._cache.items())]}
            tmp = self.path.with_suffix(".tmp")
            tmp.write_text(json.dumps(doc, sort_keys=True, indent=2) + "\n", "utf-8")
            os.replace(tmp, self.path)

    def get(self, adapter_id: str) -> AdapterSpec | None:
        spec = self._cache.get(adapter_id)
        if spec is None:
            with self._lock:
                self._refresh()
            spec = self._cache.get(adapter_id)
        return spec
