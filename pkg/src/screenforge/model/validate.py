"""Structural validation, cross-reference validation, and lint rules."""

from .kinds import CAPABILITY_KINDS, FIELD_KINDS, SCALAR_KINDS, kinds_compatible
from .types import (
    Application,
    DataMapping,
    DataRef,
    Diagnostic,
    FieldSpec,
    Form,
    IDENTIFIER_RE,
    NAV_SOURCE_KINDS,
    REF_SCOPES,
    error,
    warning,
)

# How many table columns a device screen can show at once.
MAX_VISIBLE_COLUMNS = 2


def field_path(form: Form, page_id: str, field_id: str) -> str:
    return f"forms/{form.id}/pages/{page_id}/fields/{field_id}"


# ---------------------------------------------------------------------------
# structural validation (no catalogue needed; shared by parse and edits)


def structural_diagnostics(app: Application) -> list[Diagnostic]:
    """Check every self-contained invariant of the model tree."""
    diags: list[Diagnostic] = []

    if not app.name or not IDENTIFIER_RE.match(app.name):
        diags.append(error("INVALID_IDENTIFIER", "name", f"application name {app.name!r} is not an identifier"))
    if not app.forms:
        diags.append(error("NO_ENTRY_FORM", "forms", "applications need at least one form"))

    seen_globals: set[str] = set()
    for g in app.globals:
        gpath = f"globals/{g.name}"
        if not IDENTIFIER_RE.match(g.name):
            diags.append(error("INVALID_IDENTIFIER", gpath, f"global name {g.name!r} is not an identifier"))
        if g.name in seen_globals:
            diags.append(error("DUPLICATE_GLOBAL", gpath, f"global '{g.name}' declared twice"))
        seen_globals.add(g.name)
        if g.kind not in SCALAR_KINDS:
            diags.append(error("INVALID_GLOBAL_KIND", gpath, f"globals must be scalar, got '{g.kind}'"))

    seen_forms: set[str] = set()
    for form in app.forms:
        fpath = f"forms/{form.id}"
        if not IDENTIFIER_RE.match(form.id):
            diags.append(error("INVALID_IDENTIFIER", fpath, f"form id {form.id!r} is not an identifier"))
        if form.id in seen_forms:
            diags.append(error("DUPLICATE_FORM_ID", fpath, f"form id '{form.id}' used twice"))
        seen_forms.add(form.id)
        diags.extend(_check_form(form))

    return diags


def _check_form(form: Form) -> list[Diagnostic]:
    diags: list[Diagnostic] = []
    fpath = f"forms/{form.id}"
    if not form.pages:
        diags.append(error("EMPTY_FORM", fpath, "forms need at least one page"))

    seen_pages: set[str] = set()
    seen_fields: set[str] = set()
    for page in form.pages:
        ppath = f"{fpath}/pages/{page.id}"
        if not IDENTIFIER_RE.match(page.id):
            diags.append(error("INVALID_IDENTIFIER", ppath, f"page id {page.id!r} is not an identifier"))
        if page.id in seen_pages:
            diags.append(error("DUPLICATE_PAGE_ID", ppath, f"page id '{page.id}' used twice"))
        seen_pages.add(page.id)
        for f in page.fields:
            path = field_path(form, page.id, f.id)
            if f.id in seen_fields:
                diags.append(
                    error("DUPLICATE_FIELD_ID", path, f"field id '{f.id}' used twice in form '{form.id}'")
                )
            seen_fields.add(f.id)
            diags.extend(_check_field(f, path, is_column=False))

    for slot, binding in form.bindings():
        diags.extend(_check_binding_shape(binding, f"{fpath}/{slot}", slot))
    return diags


def _check_field(f: FieldSpec, path: str, is_column: bool) -> list[Diagnostic]:
    diags: list[Diagnostic] = []
    if not IDENTIFIER_RE.match(f.id):
        diags.append(error("INVALID_IDENTIFIER", path, f"field id {f.id!r} is not an identifier"))
    if f.kind not in FIELD_KINDS:
        diags.append(error("UNKNOWN_KIND", path, f"unknown field kind '{f.kind}'"))
        return diags

    if is_column and f.kind not in SCALAR_KINDS:
        diags.append(error("NONSCALAR_COLUMN", path, f"table columns must be scalar, got '{f.kind}'"))
    if f.kind == "table" and not f.columns:
        diags.append(error("TABLE_WITHOUT_COLUMNS", path, "tables need at least one column"))
    if f.kind != "table" and f.columns:
        diags.append(error("COLUMNS_ON_SCALAR", path, f"'{f.kind}' fields cannot carry columns"))

    if f.capability is not None:
        if f.capability not in CAPABILITY_KINDS:
            diags.append(error("UNKNOWN_CAPABILITY", path, f"unknown capability '{f.capability}'"))
        elif CAPABILITY_KINDS[f.capability] != f.kind:
            diags.append(
                error(
                    "CAPABILITY_KIND_MISMATCH",
                    path,
                    f"capability '{f.capability}' attaches to "
                    f"'{CAPABILITY_KINDS[f.capability]}' fields, not '{f.kind}'",
                )
            )

    if f.row_navigation is not None:
        if f.kind != "table":
            diags.append(error("NAVIGATION_ON_WRONG_KIND", path, "row navigation is for tables only"))
        diags.extend(_check_nav_shape(f.row_navigation, f"{path}/rowNavigation", expected="tableRow"))
    if f.navigation is not None:
        if f.kind != "button":
            diags.append(error("NAVIGATION_ON_WRONG_KIND", path, "navigation links are for buttons only"))
        diags.extend(_check_nav_shape(f.navigation, f"{path}/navigation", expected="button"))

    seen_cols: set[str] = set()
    for col in f.columns:
        cpath = f"{path}/columns/{col.id}"
        if col.id in seen_cols:
            diags.append(error("DUPLICATE_FIELD_ID", cpath, f"column id '{col.id}' used twice"))
        seen_cols.add(col.id)
        diags.extend(_check_field(col, cpath, is_column=True))
    return diags


def _check_nav_shape(link, path: str, expected: str) -> list[Diagnostic]:
    diags: list[Diagnostic] = []
    if link.source_kind not in NAV_SOURCE_KINDS or link.source_kind != expected:
        diags.append(
            error("NAVIGATION_ON_WRONG_KIND", path, f"sourceKind must be '{expected}', got '{link.source_kind}'")
        )
    allowed_sources = ("row", "field", "global") if expected == "tableRow" else ("field", "global")
    for i, m in enumerate(link.mappings):
        mpath = f"{path}/mappings[{i}]"
        diags.extend(_check_ref_syntax(m.source, mpath))
        diags.extend(_check_ref_syntax(m.dest, mpath))
        if m.source.scope in REF_SCOPES and m.source.scope not in allowed_sources:
            diags.append(
                error("INVALID_MAPPING_SCOPE", mpath, f"navigation sources read from {allowed_sources}")
            )
        if m.dest.scope in REF_SCOPES and m.dest.scope not in ("field", "global"):
            diags.append(
                error("INVALID_MAPPING_SCOPE", mpath, "navigation destinations are fields or globals")
            )
    return diags


def _check_binding_shape(binding, path: str, slot: str) -> list[Diagnostic]:
    diags: list[Diagnostic] = []
    for i, m in enumerate(binding.inputs):
        mpath = f"{path}/inputs[{i}]"
        diags.extend(_check_ref_syntax(m.source, mpath))
        diags.extend(_check_ref_syntax(m.dest, mpath))
        if m.source.scope in REF_SCOPES and m.source.scope not in ("field", "global"):
            diags.append(error("INVALID_MAPPING_SCOPE", mpath, "binding inputs read fields or globals"))
        if m.dest.scope in REF_SCOPES and m.dest.scope != "serviceInput":
            diags.append(error("INVALID_MAPPING_SCOPE", mpath, "binding inputs write service inputs"))
    for i, m in enumerate(binding.outputs):
        mpath = f"{path}/outputs[{i}]"
        diags.extend(_check_ref_syntax(m.source, mpath))
        diags.extend(_check_ref_syntax(m.dest, mpath))
        if m.source.scope in REF_SCOPES and m.source.scope != "serviceOutput":
            diags.append(error("INVALID_MAPPING_SCOPE", mpath, "binding outputs read service outputs"))
        if m.dest.scope in REF_SCOPES and m.dest.scope not in ("field", "global"):
            diags.append(error("INVALID_MAPPING_SCOPE", mpath, "binding outputs write fields or globals"))
    return diags


def _check_ref_syntax(ref: DataRef, path: str) -> list[Diagnostic]:
    diags: list[Diagnostic] = []
    if ref.scope not in REF_SCOPES:
        diags.append(error("INVALID_MAPPING_SCOPE", path, f"unknown scope '{ref.scope}'"))
    try:
        ref.segments()
    except ValueError as exc:
        diags.append(error("INVALID_DATA_REF", path, str(exc)))
        return diags
    if ref.wildcard_count() > 1:
        diags.append(error("INVALID_DATA_REF", path, f"'{ref.path}' has more than one [*]"))
    return diags


# ---------------------------------------------------------------------------
# reference resolution (shared with the binding checker and the runtime)


class RefError(Exception):
    """A data reference that does not resolve; .code carries the diagnostic code."""

    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code


def resolve_field_ref(ref: DataRef, form: Form) -> tuple[str, bool]:
    """Resolve a field-scope ref within a form to (scalar kind, repeats).

    Accepts ``fieldId`` for scalar fields and ``tableId[*].columnId`` for
    table columns. Raises RefError otherwise.
    """
    segments = ref.segments()
    if len(segments) == 1:
        name, wild = segments[0]
        if wild:
            raise RefError("INVALID_DATA_REF", f"'{ref.path}' addresses whole rows; map columns instead")
        f = form.find_field(name)
        if f is None:
            raise RefError("UNRESOLVED_DATA_REF", f"form '{form.id}' has no field '{name}'")
        if f.kind not in SCALAR_KINDS:
            raise RefError(
                "INVALID_DATA_REF", f"'{name}' is a {f.kind}; map its columns with '{name}[*].<column>'"
            )
        return f.kind, False
    if len(segments) == 2:
        (table_name, wild), (col_name, col_wild) = segments
        if col_wild:
            raise RefError("INVALID_DATA_REF", f"'{ref.path}' puts [*] on a column")
        table = form.find_field(table_name)
        if table is None:
            raise RefError("UNRESOLVED_DATA_REF", f"form '{form.id}' has no field '{table_name}'")
        if table.kind != "table":
            raise RefError("INVALID_DATA_REF", f"'{table_name}' is not a table")
        if not wild:
            raise RefError("INVALID_DATA_REF", f"table column references need [*]: '{table_name}[*].{col_name}'")
        col = table.find_column(col_name)
        if col is None:
            raise RefError("UNRESOLVED_DATA_REF", f"table '{table_name}' has no column '{col_name}'")
        return col.kind, True
    raise RefError("INVALID_DATA_REF", f"'{ref.path}' nests too deeply for a field reference")


def resolve_global_ref(ref: DataRef, app: Application) -> str:
    """Resolve a global-scope ref to its kind; raises RefError."""
    segments = ref.segments()
    if len(segments) != 1 or segments[0][1]:
        raise RefError("INVALID_DATA_REF", f"'{ref.path}' is not a global name")
    g = app.find_global(segments[0][0])
    if g is None:
        raise RefError("UNRESOLVED_DATA_REF", f"no global named '{ref.path}'")
    return g.kind


# ---------------------------------------------------------------------------
# full validation against a service catalogue


def validate(app: Application, catalogue: list) -> list[Diagnostic]:
    """Validate invariants, navigation, and service bindings.

    ``catalogue`` is a list of ServiceDescriptor. Returns diagnostics and
    never raises; an empty error list means the model is deployable.
    """
    from ..registry.binding_check import check_binding

    diags = structural_diagnostics(app)
    by_ref = {(d.system_id, d.service_id): d for d in catalogue}

    for form in app.forms:
        for page in form.pages:
            for f in page.fields:
                base = field_path(form, page.id, f.id)
                if f.row_navigation is not None:
                    diags.extend(_check_nav(app, form, f, f.row_navigation, f"{base}/rowNavigation"))
                if f.navigation is not None:
                    diags.extend(_check_nav(app, form, f, f.navigation, f"{base}/navigation"))
        for slot, binding in form.bindings():
            bpath = f"forms/{form.id}/{slot}"
            descriptor = by_ref.get((binding.service_ref.system_id, binding.service_ref.service_id))
            if descriptor is None:
                diags.append(
                    error(
                        "UNKNOWN_SERVICE",
                        bpath,
                        f"service '{binding.service_ref.system_id}/{binding.service_ref.service_id}'"
                        " is not in the catalogue",
                    )
                )
                continue
            diags.extend(check_binding(binding, descriptor, app, form_id=form.id, location=bpath))
    return diags


def _check_nav(app: Application, form: Form, field: FieldSpec, link, path: str) -> list[Diagnostic]:
    diags: list[Diagnostic] = []
    target_form = app.find_form(link.target)
    if target_form is None:
        diags.append(
            error("UNRESOLVED_NAV_TARGET", path, f"navigation target '{link.target}' does not exist")
        )
    for i, m in enumerate(link.mappings):
        mpath = f"{path}/mappings[{i}]"
        src_kind = _nav_source_kind(app, form, field, m.source, mpath, diags)
        dst_kind = _nav_dest_kind(app, target_form, m.dest, mpath, diags)
        if src_kind is not None and dst_kind is not None and not kinds_compatible(src_kind, dst_kind):
            diags.append(
                error("TYPE_MISMATCH", mpath, f"cannot map '{src_kind}' into '{dst_kind}'")
            )
    return diags


def _nav_source_kind(app, form, field, ref: DataRef, path, diags) -> str | None:
    try:
        if ref.scope == "row":
            segments = ref.segments()
            if len(segments) != 1 or segments[0][1]:
                raise RefError("INVALID_DATA_REF", f"row references name one column, got '{ref.path}'")
            col = field.find_column(segments[0][0])
            if col is None:
                raise RefError("UNRESOLVED_DATA_REF", f"table '{field.id}' has no column '{ref.path}'")
            return col.kind
        if ref.scope == "field":
            kind, repeats = resolve_field_ref(ref, form)
            if repeats:
                raise RefError("REPEATING_TO_SCALAR", "navigation passes single values, not table columns")
            return kind
        if ref.scope == "global":
            return resolve_global_ref(ref, app)
    except (RefError, ValueError) as exc:
        code = exc.code if isinstance(exc, RefError) else "INVALID_DATA_REF"
        diags.append(error(code, path, str(exc)))
    return None


def _nav_dest_kind(app, target_form, ref: DataRef, path, diags) -> str | None:
    try:
        if ref.scope == "global":
            return resolve_global_ref(ref, app)
        if ref.scope == "field":
            if target_form is None:
                return None  # already reported as UNRESOLVED_NAV_TARGET
            kind, repeats = resolve_field_ref(ref, target_form)
            if repeats:
                raise RefError("SCALAR_TO_REPEATING", "navigation cannot fan out into table rows")
            return kind
    except (RefError, ValueError) as exc:
        code = exc.code if isinstance(exc, RefError) else "INVALID_DATA_REF"
        diags.append(error(code, path, str(exc)))
    return None


# ---------------------------------------------------------------------------
# lint


def lint(app: Application) -> list[Diagnostic]:
    """Style warnings for a model that already validates clean."""
    diags: list[Diagnostic] = []
    for form in app.forms:
        for page in form.pages:
            for f in page.fields:
                if f.kind != "table":
                    continue
                visible = [c for c in f.columns if not c.hidden]
                if len(visible) > MAX_VISIBLE_COLUMNS:
                    diags.append(
                        warning(
                            "TOO_MANY_VISIBLE_COLUMNS",
                            field_path(form, page.id, f.id),
                            f"table '{f.id}' shows {len(visible)} columns; "
                            f"device screens fit {MAX_VISIBLE_COLUMNS} (hide the rest)",
                        )
                    )

    read_globals = set()
    for form in app.forms:
        for _, link in form.navigation_links():
            for m in link.mappings:
                if m.source.scope == "global":
                    read_globals.add(m.source.path)
        for _, binding in form.bindings():
            for m in binding.inputs:
                if m.source.scope == "global":
                    read_globals.add(m.source.path)
    for g in app.globals:
        if g.name not in read_globals:
            diags.append(
                warning("UNUSED_GLOBAL", f"globals/{g.name}", f"global '{g.name}' is never read")
            )
    return diags
