"""Per-session interpretation of deployed application models.

The gateway serves many sessions concurrently; operations on one session are
serialized by a per-session lock, and every backend call flows through an
adapter. Session values are kind-tagged strings (numbers stay exact decimal
text); an absent value is simply missing from the maps.
"""

import threading
import uuid
from dataclasses import dataclass, field as dc_field
from typing import Callable

from ..model.kinds import SCALAR_KINDS, validate_value
from ..model.projection import save_affordance, visible_columns, visible_fields
from ..model.types import Application, Diagnostic, FieldSpec, Form, error
from .adapters import AdapterError, AdapterSpec, adapter_id_for, invoke_adapter
from .capabilities import CapabilityHub
from .transform import TransformError, transform


class GatewayError(Exception):
    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code


@dataclass
class Session:
    session_id: str
    bundle_id: str
    current_form: str
    field_values: dict = dc_field(default_factory=dict)  # "formId.fieldId" -> str
    table_rows: dict = dc_field(default_factory=dict)  # "formId.tableId" -> [ {col: str} ]
    globals: dict = dc_field(default_factory=dict)  # name -> str
    history: list = dc_field(default_factory=list)  # visited form ids


def _coerce(value) -> str | None:
    """Backend JSON scalars become transport strings; structures are dropped."""
    if isinstance(value, str):
        return value
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, float)):
        return repr(value) if isinstance(value, float) else str(value)
    return None


class GatewayRuntime:
    """Form lifecycle, navigation, globals, and adapter mediation for sessions.

    ``resolve_bundle`` maps a bundle id to its Application (or None);
    ``resolve_adapter`` maps an adapter id to its AdapterSpec (or None).
    """

    def __init__(
        self,
        resolve_bundle: Callable[[str], Application | None],
        resolve_adapter: Callable[[str], AdapterSpec | None],
        capabilities: CapabilityHub | None = None,
        adapter_timeout: float = 5.0,
    ):
        self.resolve_bundle = resolve_bundle
        self.resolve_adapter = resolve_adapter
        self.capabilities = capabilities or CapabilityHub()
        self.adapter_timeout = adapter_timeout
        self._sessions: dict[str, Session] = {}
        self._locks: dict[str, threading.Lock] = {}
        self._registry_lock = threading.Lock()

    # -- session plumbing ----------------------------------------------------

    def _session(self, session_id: str) -> tuple[Session, Application, threading.Lock]:
        with self._registry_lock:
            session = self._sessions.get(session_id)
            if session is None:
                raise GatewayError("UNKNOWN_SESSION", f"no session '{session_id}'")
            lock = self._locks[session_id]
        app = self.resolve_bundle(session.bundle_id)
        if app is None:
            raise GatewayError("UNKNOWN_BUNDLE", f"bundle '{session.bundle_id}' disappeared")
        return session, app, lock

    def _form(self, app: Application, form_id: str) -> Form:
        form = app.find_form(form_id)
        if form is None:
            raise GatewayError("UNKNOWN_FORM", f"no form '{form_id}' in this application")
        return form

    # -- operations ----------------------------------------------------------

    def start_session(self, bundle_id: str) -> tuple[Session, dict]:
        app = self.resolve_bundle(bundle_id)
        if app is None:
            raise GatewayError("UNKNOWN_BUNDLE", f"no published bundle '{bundle_id}'")
        entry = app.entry_form()
        if entry is None:
            raise GatewayError("UNKNOWN_FORM", "application has no forms")
        session = Session(
            session_id=uuid.uuid4().hex,
            bundle_id=bundle_id,
            current_form=entry.id,
        )
        with self._registry_lock:
            self._sessions[session.session_id] = session
            self._locks[session.session_id] = threading.Lock()
        form_state = self._open(session, app, entry, {})
        return session, form_state

    def open_form(self, session_id: str, form_id: str, nav_params: dict | None = None) -> dict:
        session, app, lock = self._session(session_id)
        with lock:
            form = self._form(app, form_id)
            return self._open(session, app, form, nav_params or {})

    def set_field(self, session_id: str, field_path: str, value: str) -> dict:
        session, app, lock = self._session(session_id)
        with lock:
            form = self._form(app, session.current_form)
            field = form.find_field(field_path)
            if field is None:
                raise GatewayError("UNKNOWN_FIELD", f"form '{form.id}' has no field '{field_path}'")
            if field.kind not in SCALAR_KINDS:
                raise GatewayError("KIND_MISMATCH", f"'{field_path}' is a {field.kind}, not a value field")
            if not field.editable:
                raise GatewayError("READ_ONLY_FIELD", f"'{field_path}' is read-only")
            problem = validate_value(field.kind, value)
            if problem is not None:
                raise GatewayError("KIND_MISMATCH", problem)
            session.field_values[f"{form.id}.{field.id}"] = value
            return self._form_state(session, form, [])

    def navigate(self, session_id: str, nav_ref: str, row_index: int | None = None) -> dict:
        session, app, lock = self._session(session_id)
        with lock:
            form = self._form(app, session.current_form)
            field = form.find_field(nav_ref)
            link = None
            if field is not None:
                link = field.row_navigation or field.navigation
            if link is None:
                raise GatewayError("UNKNOWN_NAVIGATION", f"'{nav_ref}' carries no navigation link")

            row: dict | None = None
            if link.source_kind == "tableRow":
                if row_index is None:
                    raise GatewayError("ROW_INDEX_REQUIRED", "table-row navigation needs a rowIndex")
                rows = session.table_rows.get(f"{form.id}.{field.id}", [])
                if not 0 <= row_index < len(rows):
                    raise GatewayError(
                        "ROW_OUT_OF_RANGE", f"rowIndex {row_index} outside 0..{len(rows) - 1}"
                    )
                row = rows[row_index]

            target = self._form(app, link.target)
            nav_params: dict[str, str] = {}
            for m in link.mappings:
                value = self._nav_source_value(session, form, row, m.source.scope, m.source.path)
                if value is None:
                    continue
                if m.dest.scope == "global":
                    session.globals[m.dest.path] = value
                else:
                    nav_params[m.dest.path] = value
            return self._open(session, app, target, nav_params)

    def save(self, session_id: str) -> dict:
        session, app, lock = self._session(session_id)
        with lock:
            form = self._form(app, session.current_form)
            if form.save is None:
                raise GatewayError("NO_SAVE_SERVICE", f"form '{form.id}' has no save service")
            diags: list[Diagnostic] = []
            ack = None
            try:
                ack = self._invoke_binding(session, form, form.save, f"forms/{form.id}/save")
            except AdapterError as exc:
                diags.append(error("ADAPTER_FAILURE", f"forms/{form.id}/save", f"{exc.code}: {exc}"))
            return {
                "ok": not diags,
                "acknowledgment": ack,
                "diagnostics": [vars(d) for d in diags],
            }

    def invoke_capability(self, session_id: str, field_path: str) -> dict:
        session, app, lock = self._session(session_id)
        with lock:
            form = self._form(app, session.current_form)
            field = form.find_field(field_path)
            if field is None:
                raise GatewayError("UNKNOWN_FIELD", f"form '{form.id}' has no field '{field_path}'")
            if field.capability is None:
                raise GatewayError("KIND_MISMATCH", f"'{field_path}' has no device capability")
            key = f"{form.id}.{field.id}"
            new_value = self.capabilities.invoke(field.capability, key, session.field_values.get(key))
            if new_value is not None:
                session.field_values[key] = new_value
            return self._form_state(session, form, [])

    def snapshot(self, session_id: str) -> dict:
        session, app, lock = self._session(session_id)
        with lock:
            return {
                "sessionId": session.session_id,
                "bundleId": session.bundle_id,
                "currentForm": session.current_form,
                "fieldValues": dict(session.field_values),
                "tableRows": {k: [dict(r) for r in v] for k, v in session.table_rows.items()},
                "globals": dict(session.globals),
                "history": list(session.history),
            }

    # -- internals -------------------------------------------------------------

    def _nav_source_value(self, session, form, row, scope: str, path: str) -> str | None:
        if scope == "row":
            return (row or {}).get(path)
        if scope == "field":
            return session.field_values.get(f"{form.id}.{path}")
        if scope == "global":
            return session.globals.get(path)
        return None

    def _open(self, session: Session, app: Application, form: Form, nav_params: dict) -> dict:
        """Open a form: nav params land first, then the pre-population service
        runs exactly once (its outputs overwrite colliding nav values)."""
        session.current_form = form.id
        session.history.append(form.id)
        diags: list[Diagnostic] = []
        for field_id, value in nav_params.items():
            field = form.find_field(field_id)
            if field is None or field.kind not in SCALAR_KINDS:
                raise GatewayError("UNKNOWN_FIELD", f"navParams name no value field '{field_id}'")
            if not isinstance(value, str) or validate_value(field.kind, value) is not None:
                raise GatewayError("KIND_MISMATCH", f"navParams value for '{field_id}' does not fit")
            # navigation writes are system writes: editability does not apply
            session.field_values[f"{form.id}.{field_id}"] = value
        if form.prepopulate is not None:
            try:
                response = self._invoke_binding(
                    session, form, form.prepopulate, f"forms/{form.id}/prepopulate"
                )
                outputs = transform(form.prepopulate.outputs, response)
                self._apply_form_record(session, form, outputs)
            except AdapterError as exc:
                diags.append(
                    error("ADAPTER_FAILURE", f"forms/{form.id}/prepopulate", f"{exc.code}: {exc}")
                )
            except TransformError as exc:
                diags.append(
                    error("ADAPTER_FAILURE", f"forms/{form.id}/prepopulate", f"PATH_TYPE_CONFLICT: {exc}")
                )
        return self._form_state(session, form, diags)

    def _invoke_binding(self, session: Session, form: Form, binding, location: str) -> dict:
        adapter = self.resolve_adapter(adapter_id_for(binding))
        if adapter is None:
            raise AdapterError("UNREACHABLE", f"no adapter compiled for {location}")
        request = transform(binding.inputs, self._session_record(session, form))
        return invoke_adapter(adapter, request, timeout=self.adapter_timeout)

    def _session_record(self, session: Session, form: Form) -> dict:
        record: dict = {"global": dict(session.globals)}
        for _, field in form.iter_fields():
            if field.kind == "table":
                key = f"{form.id}.{field.id}"
                if key in session.table_rows:
                    record[field.id] = [dict(r) for r in session.table_rows[key]]
            elif field.kind in SCALAR_KINDS:
                key = f"{form.id}.{field.id}"
                if key in session.field_values:
                    record[field.id] = session.field_values[key]
        return record

    def _apply_form_record(self, session: Session, form: Form, record: dict) -> None:
        for key, value in record.items():
            if key == "global":
                for name, v in value.items():
                    coerced = _coerce(v)
                    if coerced is not None:
                        session.globals[name] = coerced
                continue
            field = form.find_field(key)
            if field is None:
                continue
            if field.kind == "table" and isinstance(value, list):
                rows = []
                for raw in value:
                    if not isinstance(raw, dict):
                        continue
                    row = {}
                    for col in field.columns:
                        coerced = _coerce(raw.get(col.id))
                        if coerced is not None:
                            row[col.id] = coerced
                    rows.append(row)
                session.table_rows[f"{form.id}.{field.id}"] = rows
            elif field.kind in SCALAR_KINDS:
                coerced = _coerce(value)
                if coerced is not None:
                    session.field_values[f"{form.id}.{field.id}"] = coerced

    def _form_state(self, session: Session, form: Form, diags: list[Diagnostic]) -> dict:
        fields = []
        tables: dict[str, list[dict]] = {}
        for field in visible_fields(form):
            value = None
            if field.kind in SCALAR_KINDS:
                value = session.field_values.get(f"{form.id}.{field.id}")
            fields.append(
                {
                    "id": field.id,
                    "label": field.label,
                    "kind": field.kind,
                    "editable": field.editable,
                    "value": value,
                }
            )
            if field.kind == "table":
                rows = session.table_rows.get(f"{form.id}.{field.id}", [])
                shown = [c.id for c in visible_columns(field)]
                tables[field.id] = [{c: row[c] for c in shown if c in row} for row in rows]
        return {
            "formId": form.id,
            "title": form.title,
            "saveEnabled": save_affordance(form),
            "fields": fields,
            "tables": tables,
            "diagnostics": [vars(d) for d in diags],
        }
