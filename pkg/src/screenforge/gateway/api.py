"""The platform FastAPI service.

One process serves both sides of the house:

- runtime: session lifecycle over published bundles (plus an optional
  in-memory preview bundle), with every backend call mediated by adapters;
- design time: the app edit API for the builder, the service catalogue,
  validation, and deploy.

The builder UI, when built, is served as static assets under ``/ui``.
"""

import json
import os
import threading
from pathlib import Path

from fastapi import FastAPI, HTTPException
from fastapi.staticfiles import StaticFiles

from ..deploy.bundles import DeployError, load_bundle, verify_checksum
from ..deploy.catalogue import AppCatalogue
from ..deploy.pipeline import compile_app_adapters, deploy_application
from ..model.document import AppParseError, app_to_doc, parse_app_doc, serialize_app
from ..model.edits import EditRejected, apply_edit
from ..model.types import Application, EditCommand
from ..model.validate import lint, validate
from ..registry.descriptors import descriptor_to_doc
from ..registry.registry import RegistryError, ServiceRegistry
from ..workspace import Workspace
from . import schemas
from .adapters import AdapterStore
from .runtime import GatewayError, GatewayRuntime

_STATUS_BY_CODE = {
    "UNKNOWN_SESSION": 404,
    "UNKNOWN_BUNDLE": 404,
    "UNKNOWN_FORM": 404,
    "UNKNOWN_FIELD": 404,
    "UNKNOWN_NAVIGATION": 404,
    "READ_ONLY_FIELD": 409,
    "NO_SAVE_SERVICE": 409,
    "ROW_INDEX_REQUIRED": 409,
    "ROW_OUT_OF_RANGE": 409,
    "KIND_MISMATCH": 422,
}


def _http_error(code: str, message: str) -> HTTPException:
    return HTTPException(status_code=_STATUS_BY_CODE.get(code, 400), detail={"code": code, "message": message})


class _AppStore:
    """Builder-side application store: one canonical document per app name,
    persisted on every accepted edit so browser reloads lose nothing."""

    def __init__(self, apps_dir: Path):
        self.apps_dir = apps_dir
        self._lock = threading.Lock()
        self._apps: dict[str, Application] = {}

    def load_all(self) -> None:
        if not self.apps_dir.exists():
            return
        for path in sorted(self.apps_dir.glob("*.app.json")):
            try:
                app = parse_app_doc(json.loads(path.read_text("utf-8")))
            except (AppParseError, ValueError):
                continue
            self._apps[app.name] = app

    def ids(self) -> list[str]:
        return sorted(self._apps)

    def get(self, app_id: str) -> Application:
        app = self._apps.get(app_id)
        if app is None:
            raise _http_error("UNKNOWN_APP", f"no application '{app_id}'")
        return app

    def put(self, app: Application, persist: bool = True) -> None:
        with self._lock:
            self._apps[app.name] = app
            if persist:
                self.apps_dir.mkdir(parents=True, exist_ok=True)
                path = self.apps_dir / f"{app.name}.app.json"
                tmp = path.with_suffix(".tmp")
                tmp.write_text(serialize_app(app), "utf-8")
                os.replace(tmp, path)


def create_gateway_app(
    workspace: Workspace,
    preview_app: Application | None = None,
    adapter_timeout: float = 5.0,
    static_dir: Path | None = None,
) -> FastAPI:
    workspace.ensure()
    registry = ServiceRegistry(workspace.registry_file)
    adapter_store = AdapterStore(workspace.adapter_store_file)
    catalogue = AppCatalogue(workspace.catalogue_log)

    preview_bundles: dict[str, Application] = {}
    store = _AppStore(workspace.apps_dir)
    store.load_all()
    if preview_app is not None:
        preview_bundles["preview"] = preview_app
        store.put(preview_app, persist=False)

    bundle_cache: dict[str, Application] = {}
    live_adapters: dict = {}

    def resolve_live_app(app_id: str) -> Application | None:
        """Interpret the current server-side model of a store app directly.

        Adapters are recompiled from the live bindings on every resolve, so
        preview sessions always see the latest accepted edit.
        """
        try:
            application = store.get(app_id)
        except HTTPException:
            return None
        try:
            for adapter in compile_app_adapters(application, registry):
                live_adapters[adapter.adapter_id] = adapter
        except DeployError:
            pass  # unresolved bindings surface as ADAPTER_FAILURE diagnostics
        return application

    def resolve_bundle(bundle_id: str) -> Application | None:
        if bundle_id.startswith("app:"):
            return resolve_live_app(bundle_id[4:])
        if bundle_id in preview_bundles:
            return preview_bundles[bundle_id]
        if bundle_id in bundle_cache:
            return bundle_cache[bundle_id]
        entry = catalogue.entry_for_bundle(bundle_id)
        if entry is None or entry.status != "published":
            return None
        bundle_dir = workspace.bundles_dir / bundle_id
        if not bundle_dir.exists():
            return None
        bundle = load_bundle(bundle_dir)
        if not verify_checksum(bundle):
            return None
        try:
            app = parse_app_doc(json.loads(bundle.model_text))
        except (AppParseError, ValueError):
            return None
        bundle_cache[bundle_id] = app
        return app

    def resolve_adapter(adapter_id: str):
        return live_adapters.get(adapter_id) or adapter_store.get(adapter_id)

    runtime = GatewayRuntime(
        resolve_bundle=resolve_bundle,
        resolve_adapter=resolve_adapter,
        adapter_timeout=adapter_timeout,
    )

    app = FastAPI(title="screenforge gateway")
    app.state.runtime = runtime
    app.state.registry = registry
    app.state.workspace = workspace

    # -- runtime: sessions --------------------------------------------------

    @app.get("/health")
    def health():
        return {"status": "ok"}

    @app.post("/sessions", response_model=schemas.SessionCreateResponse)
    def create_session(request: schemas.SessionCreateRequest):
        try:
            session, form_state = runtime.start_session(request.bundleId)
        except GatewayError as exc:
            raise _http_error(exc.code, str(exc))
        return {"sessionId": session.session_id, "formState": form_state}

    @app.post("/sessions/{session_id}/open", response_model=schemas.FormState)
    def open_form(session_id: str, request: schemas.OpenFormRequest):
        try:
            return runtime.open_form(session_id, request.formId, request.navParams)
        except GatewayError as exc:
            raise _http_error(exc.code, str(exc))

    @app.post("/sessions/{session_id}/fields", response_model=schemas.FormState)
    def set_field(session_id: str, request: schemas.SetFieldRequest):
        try:
            return runtime.set_field(session_id, request.fieldPath, request.value)
        except GatewayError as exc:
            raise _http_error(exc.code, str(exc))

    @app.post("/sessions/{session_id}/navigate", response_model=schemas.FormState)
    def navigate(session_id: str, request: schemas.NavigateRequest):
        try:
            return runtime.navigate(session_id, request.navRef, request.rowIndex)
        except GatewayError as exc:
            raise _http_error(exc.code, str(exc))

    @app.post("/sessions/{session_id}/save", response_model=schemas.SaveResult)
    def save(session_id: str):
        try:
            return runtime.save(session_id)
        except GatewayError as exc:
            raise _http_error(exc.code, str(exc))

    @app.post("/sessions/{session_id}/capability", response_model=schemas.FormState)
    def capability(session_id: str, request: schemas.CapabilityRequest):
        try:
            return runtime.invoke_capability(session_id, request.fieldPath)
        except GatewayError as exc:
            raise _http_error(exc.code, str(exc))

    @app.get("/sessions/{session_id}", response_model=schemas.SessionSnapshot)
    def snapshot(session_id: str):
        try:
            return runtime.snapshot(session_id)
        except GatewayError as exc:
            raise _http_error(exc.code, str(exc))

    # -- design time: apps and edits -----------------------------------------

    def _envelope(application: Application) -> dict:
        return {"appId": application.name, "version": application.version, "app": app_to_doc(application)}

    @app.get("/apps")
    def list_apps():
        return {"apps": store.ids()}

    @app.post("/apps", response_model=schemas.AppEnvelope)
    def create_app_endpoint(request: schemas.AppCreateRequest):
        try:
            application = apply_edit(None, EditCommand(op="createApp", payload={"name": request.name}))
        except EditRejected as exc:
            raise HTTPException(status_code=422, detail={"diagnostic": vars(exc.diagnostic)})
        store.put(application)
        return _envelope(application)

    @app.get("/apps/{app_id}", response_model=schemas.AppEnvelope)
    def get_app(app_id: str):
        return _envelope(store.get(app_id))

    @app.put("/apps/{app_id}", response_model=schemas.AppEnvelope)
    def put_app(app_id: str, envelope: schemas.AppEnvelope):
        try:
            application = parse_app_doc(envelope.app)
        except AppParseError as exc:
            raise HTTPException(
                status_code=422, detail={"diagnostics": [vars(d) for d in exc.diagnostics]}
            )
        store.put(application)
        return _envelope(application)

    @app.post("/apps/{app_id}/edits", response_model=schemas.AppEnvelope)
    def edit_app(app_id: str, request: schemas.EditRequest):
        application = store.get(app_id)
        if request.baseVersion != application.version:
            raise HTTPException(
                status_code=409,
                detail={
                    "code": "VERSION_CONFLICT",
                    "message": f"model is at version {application.version}, edit based on {request.baseVersion}",
                },
            )
        command = EditCommand(
            op=request.command.op, target=request.command.target, payload=request.command.payload
        )
        try:
            edited = apply_edit(application, command)
        except EditRejected as exc:
            raise HTTPException(status_code=422, detail={"diagnostic": vars(exc.diagnostic)})
        store.put(edited)
        return _envelope(edited)

    @app.post("/apps/{app_id}/validate", response_model=schemas.ValidationReport)
    def validate_app(app_id: str):
        application = store.get(app_id)
        diags = validate(application, registry.all_descriptors())
        if not any(d.severity == "error" for d in diags):
            diags = diags + lint(application)
        return {"diagnostics": [vars(d) for d in diags]}

    # -- design time: service catalogue ----------------------------------------

    @app.get("/catalogue")
    def service_catalogue(systemId: str | None = None):
        rows = registry.list_catalogue(systemId)
        return {
            "rows": [
                {
                    "systemId": r.system_id,
                    "serviceId": r.service_id,
                    "name": r.name,
                    "description": r.description,
                }
                for r in rows
            ]
        }

    @app.get("/catalogue/{system_id}/{service_id}")
    def service_descriptor(system_id: str, service_id: str):
        descriptor = registry.find_descriptor(system_id, service_id)
        if descriptor is None:
            raise _http_error("UNKNOWN_SERVICE", f"no descriptor for '{system_id}/{service_id}'")
        return descriptor_to_doc(descriptor)

    @app.post("/discover")
    def discover(request: schemas.DiscoverRequest):
        try:
            system = registry.register_system(request.endpoint, request.displayName or request.endpoint)
            result = registry.discover(system.system_id)
        except RegistryError as exc:
            raise HTTPException(status_code=502, detail={"code": exc.code, "message": str(exc)})
        except ValueError as exc:
            raise HTTPException(status_code=422, detail={"code": "BAD_ENDPOINT", "message": str(exc)})
        return {
            "systemId": system.system_id,
            "services": [d.service_id for d in result.descriptors],
            "diagnostics": [vars(d) for d in result.diagnostics],
        }

    # -- design time: deploy -----------------------------------------------------

    @app.post("/deploy", response_model=schemas.DeployResponse)
    def deploy(request: schemas.DeployRequest):
        application = store.get(request.appId)
        try:
            results = deploy_application(application, request.targets, workspace)
        except (DeployError, ValueError) as exc:
            diagnostics = [vars(d) for d in getattr(exc, "diagnostics", [])]
            raise HTTPException(
                status_code=422,
                detail={
                    "code": getattr(exc, "code", "DEPLOY_FAILED"),
                    "message": str(exc),
                    "diagnostics": diagnostics,
                },
            )
        return {
            "entries": [
                {
                    "bundleId": r.entry.bundle_id,
                    "appName": r.entry.app_name,
                    "appVersion": r.entry.app_version,
                    "target": r.entry.target,
                    "status": r.entry.status,
                    "checksum": r.entry.checksum,
                }
                for r in results
            ]
        }

    @app.get("/bundles")
    def bundles():
        return {
            "entries": [
                {
                    "bundleId": e.bundle_id,
                    "appName": e.app_name,
                    "appVersion": e.app_version,
                    "target": e.target,
                    "status": e.status,
                    "checksum": e.checksum,
                }
                for e in catalogue.list_apps()
            ]
        }

    if static_dir is not None and Path(static_dir).exists():
        app.mount("/ui", StaticFiles(directory=static_dir, html=True), name="ui")

    return app
