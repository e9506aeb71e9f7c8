"""Platform-tagged bundle builds.

A bundle carries the serialized model, the adapter ids it needs, and a
target manifest of per-platform style tokens. It is a pure function of its
inputs: the checksum covers every bundle byte (manifest sans checksum,
model, adapter refs), so rebuilding from the same inputs reproduces it
bit for bit. Backend endpoints never enter a bundle.
"""

import hashlib
import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from ..gateway.adapters import AdapterSpec, adapter_id_for
from ..model.document import serialize_app
from ..model.types import Application, Diagnostic, has_errors
from ..model.validate import validate

TARGETS = ("ios", "android")

# Per-target differences are confined to these renderer style tokens.
TARGET_MANIFESTS = {
    "ios": {"statusBarHeight": 20, "navAffordanceStyle": "back-chevron", "fontToken": "system"},
    "android": {"statusBarHeight": 24, "navAffordanceStyle": "up-arrow", "fontToken": "roboto"},
}


class DeployError(Exception):
    def __init__(self, code: str, message: str, diagnostics: list[Diagnostic] | None = None):
        super().__init__(message)
        self.code = code
        self.diagnostics = diagnostics or []


@dataclass
class Bundle:
    bundle_id: str
    app_name: str
    app_version: int
    target: str
    model_text: str
    adapter_refs: list[str] = field(default_factory=list)
    checksum: str = ""
    created_at: str = ""


def bundle_checksum(app_name: str, app_version: int, target: str, model_text: str, adapter_refs: list[str]) -> str:
    payload = json.dumps(
        {
            "appName": app_name,
            "appVersion": app_version,
            "target": target,
            "targetManifest": TARGET_MANIFESTS[target],
            "model": model_text,
            "adapterRefs": sorted(adapter_refs),
        },
        sort_keys=True,
    )
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


def build_bundle(app: Application, target: str, adapters: list[AdapterSpec], catalogue: list) -> Bundle:
    """Build one deployable bundle; fails when the app does not validate
    clean or a binding has no compiled adapter."""
    if target not in TARGETS:
        raise ValueError(f"unknown target '{target}'; expected one of {TARGETS}")
    diags = validate(app, catalogue)
    if has_errors(diags):
        raise DeployError("VALIDATION_FAILED", f"'{app.name}' does not validate", diagnostics=diags)

    available = {a.adapter_id for a in adapters}
    needed: list[str] = []
    for form in app.forms:
        for slot, binding in form.bindings():
            adapter_id = adapter_id_for(binding)
            if adapter_id not in available:
                raise DeployError(
                    "MISSING_ADAPTER",
                    f"no compiled adapter for forms/{form.id}/{slot}",
                )
            if adapter_id not in needed:
                needed.append(adapter_id)
    needed.sort()

    model_text = serialize_app(app)
    return Bundle(
        bundle_id=f"{app.name}-v{app.version}-{target}",
        app_name=app.name,
        app_version=app.version,
        target=target,
        model_text=model_text,
        adapter_refs=needed,
        checksum=bundle_checksum(app.name, app.version, target, model_text, needed),
        created_at=datetime.now(timezone.utc).isoformat(),
    )


def verify_checksum(bundle: Bundle) -> bool:
    return bundle.checksum == bundle_checksum(
        bundle.app_name, bundle.app_version, bundle.target, bundle.model_text, bundle.adapter_refs
    )


# ---------------------------------------------------------------------------
# on-disk layout: bundles/<bundleId>/{manifest.json, model.app.json, adapters.json}


def write_bundle(bundle: Bundle, bundles_dir: Path) -> Path:
    target_dir = Path(bundles_dir) / bundle.bundle_id
    target_dir.mkdir(parents=True, exist_ok=True)
    manifest = {
        "appName": bundle.app_name,
        "appVersion": bundle.app_version,
        "target": bundle.target,
        "targetManifest": TARGET_MANIFESTS[bundle.target],
        "checksum": bundle.checksum,
    }
    (target_dir / "manifest.json").write_text(
        json.dumps(manifest, sort_keys=True, indent=2) + "\n", "utf-8"
    )
    (target_dir / "model.app.json").write_text(bundle.model_text, "utf-8")
    (target_dir / "adapters.json").write_text(
        json.dumps({"adapterRefs": bundle.adapter_refs}, sort_keys=True, indent=2) + "\n", "utf-8"
    )
    return target_dir


def load_bundle(bundle_dir: Path) -> Bundle:
    bundle_dir = Path(bundle_dir)
    manifest = json.loads((bundle_dir / "manifest.json").read_text("utf-8"))
    model_text = (bundle_dir / "model.app.json").read_text("utf-8")
    adapter_refs = json.loads((bundle_dir / "adapters.json").read_text("utf-8"))["adapterRefs"]
    return Bundle(
        bundle_id=bundle_dir.name,
        app_name=manifest["appName"],
        app_version=manifest["appVersion"],
        target=manifest["target"],
        model_text=model_text,
        adapter_refs=adapter_refs,
        checksum=manifest["checksum"],
        created_at=datetime.fromtimestamp(
            (bundle_dir / "manifest.json").stat().st_mtime, tz=timezone.utc
        ).isoformat(),
    )
