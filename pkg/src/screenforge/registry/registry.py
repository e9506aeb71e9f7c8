"""Backend discovery and the design-time service catalogue.

Discovery protocol (http-json): ``GET <endpoint>/services`` answers a JSON
array of service ids; ``GET <endpoint>/services/{id}/descriptor`` answers one
wire descriptor. Discovery is a full refresh per system; descriptors that
fail the schema gate are reported and never stored.

The registry persists to a single workspace file, rewritten atomically.
Reads are lock-free on the loaded state; register/discover serialize writes.
"""

import hashlib
import json
import os
import threading
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from urllib.parse import urlparse

import httpx

from ..model.types import Diagnostic, error
from .descriptors import (
    BackendSystem,
    ServiceDescriptor,
    descriptor_from_doc,
    descriptor_from_stored_doc,
    descriptor_problems,
    descriptor_to_doc,
)


class RegistryError(Exception):
    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code


def system_id_for(endpoint: str) -> str:
    """Deterministic system id from the endpoint's host+path (port-free)."""
    parts = urlparse(endpoint)
    key = (parts.hostname or "") + (parts.path.rstrip("/") or "")
    return "sys-" + hashlib.sha256(key.encode("utf-8")).hexdigest()[:8]


@dataclass
class DiscoveryResult:
    descriptors: list[ServiceDescriptor]
    diagnostics: list[Diagnostic] = field(default_factory=list)


@dataclass
class CatalogueRow:
    system_id: str
    service_id: str
    name: str
    description: str


class ServiceRegistry:
    def __init__(self, workspace_file: Path, timeout: float = 5.0):
        self.workspace_file = Path(workspace_file)
        self.timeout = timeout
        self._write_lock = threading.Lock()
        self._state = self._load()

    # -- persistence --------------------------------------------------------

    def _load(self) -> dict:
        if self.workspace_file.exists():
            return json.loads(self.workspace_file.read_text("utf-8"))
        return {"systems": {}, "catalogue": {}}

    def _store(self) -> None:
        self.workspace_file.parent.mkdir(parents=True, exist_ok=True)
        tmp = self.workspace_file.with_suffix(".tmp")
        tmp.write_text(json.dumps(self._state, sort_keys=True, indent=2) + "\n", "utf-8")
        os.replace(tmp, self.workspace_file)

    # -- systems -------------------------------------------------------------

    def register_system(self, endpoint: str, display_name: str) -> BackendSystem:
        """Handshake with the endpoint and store it under its deterministic id."""
        parts = urlparse(endpoint)
        if parts.scheme not in ("http", "https") or not parts.netloc:
            raise ValueError(f"'{endpoint}' is not a valid http(s) URL")
        endpoint = endpoint.rstrip("/")
        self._fetch_service_ids(endpoint)  # raises UNREACHABLE / BAD_HANDSHAKE
        system = BackendSystem(
            system_id=system_id_for(endpoint),
            display_name=display_name,
            discovery_endpoint=endpoint,
        )
        with self._write_lock:
            self._state["systems"][system.system_id] = {
                "systemId": system.system_id,
                "displayName": system.display_name,
                "discoveryEndpoint": system.discovery_endpoint,
                "protocol": system.protocol,
            }
            self._store()
        return system

    def systems(self) -> list[BackendSystem]:
        return [self._system_from_doc(doc) for _, doc in sorted(self._state["systems"].items())]

    def system(self, system_id: str) -> BackendSystem:
        doc = self._state["systems"].get(system_id)
        if doc is None:
            raise RegistryError("UNKNOWN_SYSTEM", f"no registered system '{system_id}'")
        return self._system_from_doc(doc)

    @staticmethod
    def _system_from_doc(doc: dict) -> BackendSystem:
        return BackendSystem(
            system_id=doc["systemId"],
            display_name=doc["displayName"],
            discovery_endpoint=doc["discoveryEndpoint"],
            protocol=doc["protocol"],
        )

    # -- discovery -----------------------------------------------------------

    def discover(self, system_id: str) -> DiscoveryResult:
        """Full-refresh the catalogue for one system.

        Descriptors that fail the schema gate become INVALID_DESCRIPTOR
        diagnostics; the valid remainder is stored and returned.
        """
        system = self.system(system_id)
        ids = self._fetch_service_ids(system.discovery_endpoint)
        descriptors: list[ServiceDescriptor] = []
        diagnostics: list[Diagnostic] = []
        for service_id in ids:
            doc = self._fetch_json(f"{system.discovery_endpoint}/services/{service_id}/descriptor")
            problems = descriptor_problems(doc) if isinstance(doc, dict) else ["descriptor must be an object"]
            if not problems and doc["serviceId"] != service_id:
                problems = [f"descriptor names serviceId '{doc['serviceId']}', advertised as '{service_id}'"]
            if problems:
                diagnostics.append(
                    error("INVALID_DESCRIPTOR", service_id, f"rejected by descriptor schema: {problems[0]}")
                )
                continue
            descriptors.append(descriptor_from_doc(doc, system_id=system.system_id))
        descriptors.sort(key=lambda d: d.service_id)
        with self._write_lock:
            self._state["catalogue"][system.system_id] = {
                "fetchedAt": datetime.now(timezone.utc).isoformat(),
                "services": [descriptor_to_doc(d) for d in descriptors],
            }
            self._store()
        return DiscoveryResult(descriptors=descriptors, diagnostics=diagnostics)

    def _fetch_service_ids(self, endpoint: str) -> list[str]:
        doc = self._fetch_json(f"{endpoint}/services")
        if not isinstance(doc, list) or not all(isinstance(x, str) for x in doc):
            raise RegistryError("BAD_HANDSHAKE", f"{endpoint}/services did not answer a list of service ids")
        return doc

    def _fetch_json(self, url: str):
        try:
            response = httpx.get(url, timeout=self.timeout)
        except httpx.HTTPError as exc:
            raise RegistryError("UNREACHABLE", f"cannot reach {url}: {exc}") from exc
        if response.status_code != 200:
            raise RegistryError("BAD_HANDSHAKE", f"{url} answered HTTP {response.status_code}")
        try:
            return response.json()
        except ValueError as exc:
            raise RegistryError("BAD_HANDSHAKE", f"{url} did not answer JSON") from exc

    # -- catalogue queries ----------------------------------------------------

    def list_catalogue(self, system_id: str | None = None) -> list[CatalogueRow]:
        rows = [
            CatalogueRow(
                system_id=d.system_id,
                service_id=d.service_id,
                name=d.name,
                description=d.description,
            )
            for d in self.all_descriptors()
            if system_id is None or d.system_id == system_id
        ]
        rows.sort(key=lambda r: (r.system_id, r.service_id))
        return rows

    def all_descriptors(self) -> list[ServiceDescriptor]:
        out = []
        for system_id in sorted(self._state["catalogue"]):
            for doc in self._state["catalogue"][system_id]["services"]:
                out.append(descriptor_from_stored_doc(doc))
        return out

    def find_descriptor(self, system_id: str, service_id: str) -> ServiceDescriptor | None:
        for d in self.all_descriptors():
            if d.system_id == system_id and d.service_id == service_id:
                return d
        return None
