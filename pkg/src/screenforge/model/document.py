"""Parse and serialize the application DSL document (``.app.json``).

The concrete syntax is a UTF-8 JSON document with top-level keys exactly
``name, version, globals, forms``. Canonical serialization sorts map keys,
preserves list order, uses 2-space indent and LF line endings; absent
optional nodes are omitted, so ``parse_app(serialize_app(a)) == a``.
"""

import json
from typing import Any

from .types import (
    Application,
    DataMapping,
    DataRef,
    Diagnostic,
    FieldSpec,
    Form,
    GlobalVariable,
    NavigationLink,
    Page,
    ServiceBinding,
    ServiceRef,
    error,
)

TOP_LEVEL_KEYS = {"name", "version", "globals", "forms"}

_MISSING = object()


class AppParseError(Exception):
    """Raised when a document cannot be turned into a structurally valid model."""

    def __init__(self, diagnostics: list[Diagnostic]):
        super().__init__("; ".join(d.machine_line() for d in diagnostics))
        self.diagnostics = diagnostics


def parse_app(text: str) -> Application:
    """Parse DSL text into an Application, preserving form/page/field order.

    Raises AppParseError carrying one error diagnostic per problem found
    (syntax errors are position-annotated).
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise AppParseError(
            [error("SYNTAX_ERROR", "", f"line {exc.lineno} column {exc.colno}: {exc.msg}")]
        ) from exc
    return parse_app_doc(doc)


def parse_app_doc(doc: Any) -> Application:
    """Parse an already-decoded document object. See parse_app."""
    from .validate import structural_diagnostics

    diags: list[Diagnostic] = []
    app = _build_app(doc, diags)
    if app is not None:
        diags.extend(structural_diagnostics(app))
    if diags:
        raise AppParseError(diags)
    assert app is not None
    return app


def serialize_app(app: Application) -> str:
    """Canonical text for a model: sorted keys, stable list order, LF endings."""
    return json.dumps(app_to_doc(app), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


# ---------------------------------------------------------------------------
# model -> document


def app_to_doc(app: Application) -> dict:
    return {
        "name": app.name,
        "version": app.version,
        "globals": [{"name": g.name, "kind": g.kind} for g in app.globals],
        "forms": [_form_to_doc(f) for f in app.forms],
    }


def _form_to_doc(form: Form) -> dict:
    doc: dict[str, Any] = {
        "id": form.id,
        "title": form.title,
        "pages": [
            {"id": p.id, "fields": [_field_to_doc(f) for f in p.fields]} for p in form.pages
        ],
    }
    if form.prepopulate is not None:
        doc["prepopulate"] = binding_to_doc(form.prepopulate)
    if form.save is not None:
        doc["save"] = binding_to_doc(form.save)
    return doc


def _field_to_doc(f: FieldSpec) -> dict:
    doc: dict[str, Any] = {
        "id": f.id,
        "label": f.label,
        "kind": f.kind,
        "editable": f.editable,
        "hidden": f.hidden,
    }
    if f.capability is not None:
        doc["capability"] = f.capability
    if f.columns:
        doc["columns"] = [_field_to_doc(c) for c in f.columns]
    if f.row_navigation is not None:
        doc["rowNavigation"] = nav_to_doc(f.row_navigation)
    if f.navigation is not None:
        doc["navigation"] = nav_to_doc(f.navigation)
    return doc


def nav_to_doc(link: NavigationLink) -> dict:
    return {
        "sourceKind": link.source_kind,
        "target": link.target,
        "mappings": [mapping_to_doc(m) for m in link.mappings],
    }


def binding_to_doc(binding: ServiceBinding) -> dict:
    return {
        "serviceRef": {
            "systemId": binding.service_ref.system_id,
            "serviceId": binding.service_ref.service_id,
        },
        "inputs": [mapping_to_doc(m) for m in binding.inputs],
        "outputs": [mapping_to_doc(m) for m in binding.outputs],
    }


def mapping_to_doc(m: DataMapping) -> dict:
    return {
        "from": {"scope": m.source.scope, "path": m.source.path},
        "to": {"scope": m.dest.scope, "path": m.dest.path},
    }


# ---------------------------------------------------------------------------
# document -> model
#
# Builders are shape-tolerant: they record a diagnostic and skip the broken
# node instead of aborting, so one pass reports every problem in the file.


def _build_app(doc: Any, diags: list[Diagnostic]) -> Application | None:
    if not isinstance(doc, dict):
        diags.append(error("INVALID_DOCUMENT", "", "top level must be an object"))
        return None
    keys = set(doc.keys())
    if keys != TOP_LEVEL_KEYS:
        extra = sorted(keys - TOP_LEVEL_KEYS)
        missing = sorted(TOP_LEVEL_KEYS - keys)
        parts = []
        if missing:
            parts.append(f"missing keys {missing}")
        if extra:
            parts.append(f"unexpected keys {extra}")
        diags.append(error("INVALID_DOCUMENT", "", "; ".join(parts)))
        return None
    name = _expect_str(doc, "name", "", diags)
    version = doc.get("version")
    if not isinstance(version, int) or isinstance(version, bool) or version < 0:
        diags.append(error("INVALID_DOCUMENT", "version", "version must be a non-negative integer"))
        version = 0
    globals_ = []
    for i, gdoc in enumerate(_expect_list(doc, "globals", "", diags)):
        g = _build_global(gdoc, f"globals[{i}]", diags)
        if g is not None:
            globals_.append(g)
    forms = []
    for i, fdoc in enumerate(_expect_list(doc, "forms", "", diags)):
        f = _build_form(fdoc, f"forms[{i}]", diags)
        if f is not None:
            forms.append(f)
    return Application(name=name or "", version=version, globals=globals_, forms=forms)


def _build_global(doc: Any, path: str, diags: list[Diagnostic]) -> GlobalVariable | None:
    if not isinstance(doc, dict):
        diags.append(error("INVALID_DOCUMENT", path, "global must be an object"))
        return None
    name = _expect_str(doc, "name", path, diags)
    kind = _expect_str(doc, "kind", path, diags)
    if name is None or kind is None:
        return None
    return GlobalVariable(name=name, kind=kind)


def _build_form(doc: Any, path: str, diags: list[Diagnostic]) -> Form | None:
    if not isinstance(doc, dict):
        diags.append(error("INVALID_DOCUMENT", path, "form must be an object"))
        return None
    form_id = _expect_str(doc, "id", path, diags)
    title = _expect_str(doc, "title", path, diags)
    if form_id is None:
        return None
    path = f"forms/{form_id}"
    pages = []
    for i, pdoc in enumerate(_expect_list(doc, "pages", path, diags)):
        p = _build_page(pdoc, f"{path}/pages[{i}]", diags)
        if p is not None:
            pages.append(p)
    prepopulate = None
    if doc.get("prepopulate") is not None:
        prepopulate = _build_binding(doc["prepopulate"], f"{path}/prepopulate", diags)
    save = None
    if doc.get("save") is not None:
        save = _build_binding(doc["save"], f"{path}/save", diags)
    _reject_unknown_keys(
        doc, {"id", "title", "pages", "prepopulate", "save"}, path, diags
    )
    return Form(id=form_id, title=title or "", pages=pages, prepopulate=prepopulate, save=save)


def _build_page(doc: Any, path: str, diags: list[Diagnostic]) -> Page | None:
    if not isinstance(doc, dict):
        diags.append(error("INVALID_DOCUMENT", path, "page must be an object"))
        return None
    page_id = _expect_str(doc, "id", path, diags)
    if page_id is None:
        return None
    fields = []
    for i, fdoc in enumerate(_expect_list(doc, "fields", path, diags)):
        f = _build_field(fdoc, f"{path}/fields[{i}]", diags)
        if f is not None:
            fields.append(f)
    _reject_unknown_keys(doc, {"id", "fields"}, path, diags)
    return Page(id=page_id, fields=fields)


_FIELD_KEYS = {
    "id",
    "label",
    "kind",
    "editable",
    "hidden",
    "capability",
    "columns",
    "rowNavigation",
    "navigation",
}


def _build_field(doc: Any, path: str, diags: list[Diagnostic]) -> FieldSpec | None:
    if not isinstance(doc, dict):
        diags.append(error("INVALID_DOCUMENT", path, "field must be an object"))
        return None
    field_id = _expect_str(doc, "id", path, diags)
    label = _expect_str(doc, "label", path, diags)
    kind = _expect_str(doc, "kind", path, diags)
    if field_id is None or kind is None:
        return None
    editable = _expect_bool(doc, "editable", path, diags, default=True)
    hidden = _expect_bool(doc, "hidden", path, diags, default=False)
    capability = doc.get("capability")
    if capability is not None and not isinstance(capability, str):
        diags.append(error("INVALID_DOCUMENT", path, "capability must be a string"))
        capability = None
    columns = []
    if doc.get("columns") is not None:
        if not isinstance(doc["columns"], list):
            diags.append(error("INVALID_DOCUMENT", path, "columns must be a list"))
        else:
            for i, cdoc in enumerate(doc["columns"]):
                c = _build_field(cdoc, f"{path}/columns[{i}]", diags)
                if c is not None:
                    columns.append(c)
    row_navigation = None
    if doc.get("rowNavigation") is not None:
        row_navigation = _build_nav(doc["rowNavigation"], f"{path}/rowNavigation", diags)
    navigation = None
    if doc.get("navigation") is not None:
        navigation = _build_nav(doc["navigation"], f"{path}/navigation", diags)
    _reject_unknown_keys(doc, _FIELD_KEYS, path, diags)
    return FieldSpec(
        id=field_id,
        label=label or "",
        kind=kind,
        editable=editable,
        hidden=hidden,
        capability=capability,
        columns=columns,
        row_navigation=row_navigation,
        navigation=navigation,
    )


def _build_nav(doc: Any, path: str, diags: list[Diagnostic]) -> NavigationLink | None:
    if not isinstance(doc, dict):
        diags.append(error("INVALID_DOCUMENT", path, "navigation must be an object"))
        return None
    source_kind = _expect_str(doc, "sourceKind", path, diags)
    target = _expect_str(doc, "target", path, diags)
    mappings = _build_mappings(doc.get("mappings", []), path, diags)
    _reject_unknown_keys(doc, {"sourceKind", "target", "mappings"}, path, diags)
    if source_kind is None or target is None:
        return None
    return NavigationLink(source_kind=source_kind, target=target, mappings=mappings)


def _build_binding(doc: Any, path: str, diags: list[Diagnostic]) -> ServiceBinding | None:
    if not isinstance(doc, dict):
        diags.append(error("INVALID_DOCUMENT", path, "service binding must be an object"))
        return None
    ref = doc.get("serviceRef")
    if not isinstance(ref, dict) or not isinstance(ref.get("systemId"), str) or not isinstance(
        ref.get("serviceId"), str
    ):
        diags.append(
            error("INVALID_DOCUMENT", path, "serviceRef must carry systemId and serviceId strings")
        )
        return None
    inputs = _build_mappings(doc.get("inputs", []), f"{path}/inputs", diags)
    outputs = _build_mappings(doc.get("outputs", []), f"{path}/outputs", diags)
    _reject_unknown_keys(doc, {"serviceRef", "inputs", "outputs"}, path, diags)
    return ServiceBinding(
        service_ref=ServiceRef(system_id=ref["systemId"], service_id=ref["serviceId"]),
        inputs=inputs,
        outputs=outputs,
    )


def _build_mappings(doc: Any, path: str, diags: list[Diagnostic]) -> list[DataMapping]:
    if not isinstance(doc, list):
        diags.append(error("INVALID_DOCUMENT", path, "mappings must be a list"))
        return []
    out = []
    for i, mdoc in enumerate(doc):
        mpath = f"{path}/mappings[{i}]"
        if not isinstance(mdoc, dict) or "from" not in mdoc or "to" not in mdoc:
            diags.append(error("INVALID_DOCUMENT", mpath, "mapping must carry 'from' and 'to'"))
            continue
        source = _build_ref(mdoc["from"], mpath, diags)
        dest = _build_ref(mdoc["to"], mpath, diags)
        if source is not None and dest is not None:
            out.append(DataMapping(source=source, dest=dest))
    return out


def _build_ref(doc: Any, path: str, diags: list[Diagnostic]) -> DataRef | None:
    if (
        not isinstance(doc, dict)
        or not isinstance(doc.get("scope"), str)
        or not isinstance(doc.get("path"), str)
    ):
        diags.append(error("INVALID_DOCUMENT", path, "data ref must carry scope and path strings"))
        return None
    return DataRef(scope=doc["scope"], path=doc["path"])


# ---------------------------------------------------------------------------
# small shape helpers


def _expect_str(doc: dict, key: str, path: str, diags: list[Diagnostic]) -> str | None:
    v = doc.get(key, _MISSING)
    if v is _MISSING or not isinstance(v, str):
        diags.append(error("INVALID_DOCUMENT", path, f"'{key}' must be a string"))
        return None
    return v


def _expect_bool(doc: dict, key: str, path: str, diags: list[Diagnostic], default: bool) -> bool:
    v = doc.get(key, _MISSING)
    if v is _MISSING:
        return default
    if not isinstance(v, bool):
        diags.append(error("INVALID_DOCUMENT", path, f"'{key}' must be a boolean"))
        return default
    return v


def _expect_list(doc: dict, key: str, path: str, diags: list[Diagnostic]) -> list:
    v = doc.get(key, _MISSING)
    if v is _MISSING or not isinstance(v, list):
        diags.append(error("INVALID_DOCUMENT", path, f"'{key}' must be a list"))
        return []
    return v


def _reject_unknown_keys(doc: dict, allowed: set, path: str, diags: list[Diagnostic]) -> None:
    extra = sorted(set(doc.keys()) - allowed)
    if extra:
        diags.append(error("INVALID_DOCUMENT", path, f"unexpected keys {extra}"))
