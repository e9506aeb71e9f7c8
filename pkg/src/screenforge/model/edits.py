"""Functional model edits.

Every command yields a fresh Application (the input is never mutated) or
raises EditRejected and leaves the input untouched. Rejection happens
whenever the edited tree would violate a structural invariant, so undo/redo
can replay commands without ever materialising a broken model.

The entry-form rule (NO_ENTRY_FORM) is deliberately not enforced here: a
freshly created application starts with zero forms while it is being built;
parse, validate, and deploy enforce the rule where it matters.
"""

import copy
from dataclasses import dataclass

from .document import _build_binding, _build_field, _build_nav
from .types import (
    Application,
    Diagnostic,
    EDIT_OPS,
    EditCommand,
    FieldSpec,
    Form,
    GlobalVariable,
    Page,
    error,
)
from .validate import structural_diagnostics


class EditRejected(Exception):
    def __init__(self, diagnostic: Diagnostic):
        super().__init__(diagnostic.machine_line())
        self.diagnostic = diagnostic


def _reject(code: str, target: str, message: str):
    raise EditRejected(error(code, target, message))


@dataclass
class _Node:
    kind: str  # app | globals | global | form | page | field | column | binding
    form: Form | None = None
    page: Page | None = None
    field: FieldSpec | None = None
    column: FieldSpec | None = None
    global_var: GlobalVariable | None = None
    slot: str | None = None


def _resolve(app: Application, target: str) -> _Node:
    parts = [p for p in target.split("/") if p]
    if not parts:
        return _Node(kind="app")
    if parts[0] == "globals":
        if len(parts) == 1:
            return _Node(kind="globals")
        g = app.find_global(parts[1])
        if g is None or len(parts) > 2:
            _reject("TARGET_NOT_FOUND", target, f"no global at '{target}'")
        return _Node(kind="global", global_var=g)
    if parts[0] != "forms":
        _reject("TARGET_NOT_FOUND", target, f"no node at '{target}'")
    if len(parts) == 1:
        return _Node(kind="app")
    form = app.find_form(parts[1])
    if form is None:
        _reject("TARGET_NOT_FOUND", target, f"no form '{parts[1]}'")
    if len(parts) == 2:
        return _Node(kind="form", form=form)
    if parts[2] in ("prepopulate", "save") and len(parts) == 3:
        return _Node(kind="binding", form=form, slot=parts[2])
    if parts[2] != "pages" or len(parts) < 4:
        _reject("TARGET_NOT_FOUND", target, f"no node at '{target}'")
    page = next((p for p in form.pages if p.id == parts[3]), None)
    if page is None:
        _reject("TARGET_NOT_FOUND", target, f"form '{form.id}' has no page '{parts[3]}'")
    if len(parts) == 4:
        return _Node(kind="page", form=form, page=page)
    if parts[4] != "fields" or len(parts) < 6:
        _reject("TARGET_NOT_FOUND", target, f"no node at '{target}'")
    field = next((f for f in page.fields if f.id == parts[5]), None)
    if field is None:
        _reject("TARGET_NOT_FOUND", target, f"page '{page.id}' has no field '{parts[5]}'")
    if len(parts) == 6:
        return _Node(kind="field", form=form, page=page, field=field)
    if parts[6] != "columns" or len(parts) != 8:
        _reject("TARGET_NOT_FOUND", target, f"no node at '{target}'")
    column = field.find_column(parts[7])
    if column is None:
        _reject("TARGET_NOT_FOUND", target, f"table '{field.id}' has no column '{parts[7]}'")
    return _Node(kind="column", form=form, page=page, field=field, column=column)


def apply_edit(app: Application | None, cmd: EditCommand) -> Application:
    """Apply one command atomically and return the new model (version + 1)."""
    if cmd.op not in EDIT_OPS:
        _reject("INVALID_PAYLOAD", cmd.target, f"unknown edit op '{cmd.op}'")

    if cmd.op == "createApp":
        name = cmd.payload.get("name")
        if not isinstance(name, str) or not name:
            _reject("INVALID_PAYLOAD", cmd.target, "createApp needs a 'name'")
        return _finish(Application(name=name, version=0, globals=[], forms=[]))

    if app is None:
        _reject("TARGET_NOT_FOUND", cmd.target, "no application to edit")

    new = copy.deepcopy(app)
    node = _resolve(new, cmd.target)
    _DISPATCH[cmd.op](new, node, cmd)
    return _finish(new, base_version=app.version)


def _finish(app: Application, base_version: int | None = None) -> Application:
    diags = [d for d in structural_diagnostics(app) if d.code != "NO_ENTRY_FORM"]
    if diags:
        d = diags[0]
        raise EditRejected(error("INVALID_PAYLOAD", d.location, d.message))
    app.version = (base_version if base_version is not None else app.version) + 1
    return app


# ---------------------------------------------------------------------------
# per-op handlers (mutate the working copy; _finish validates the result)


def _insert(items: list, value, index) -> None:
    if index is None:
        items.append(value)
    else:
        items.insert(index, value)


def _op_add_form(app: Application, node: _Node, cmd: EditCommand) -> None:
    if node.kind != "app":
        _reject("INVALID_PAYLOAD", cmd.target, "addForm targets the application root")
    form_id = cmd.payload.get("id")
    title = cmd.payload.get("title", form_id)
    if not isinstance(form_id, str):
        _reject("INVALID_PAYLOAD", cmd.target, "addForm needs an 'id'")
    form = Form(id=form_id, title=str(title), pages=[Page(id="page1", fields=[])])
    _insert(app.forms, form, cmd.payload.get("index"))


def _op_add_page(app: Application, node: _Node, cmd: EditCommand) -> None:
    if node.kind != "form":
        _reject("INVALID_PAYLOAD", cmd.target, "addPage targets a form")
    page_id = cmd.payload.get("id")
    if not isinstance(page_id, str):
        _reject("INVALID_PAYLOAD", cmd.target, "addPage needs an 'id'")
    _insert(node.form.pages, Page(id=page_id, fields=[]), cmd.payload.get("index"))


def _op_add_field(app: Application, node: _Node, cmd: EditCommand) -> None:
    if node.kind == "globals":
        name, kind = cmd.payload.get("name"), cmd.payload.get("kind")
        if not isinstance(name, str) or not isinstance(kind, str):
            _reject("INVALID_PAYLOAD", cmd.target, "a global needs 'name' and 'kind'")
        _insert(app.globals, GlobalVariable(name=name, kind=kind), cmd.payload.get("index"))
        return
    if node.kind not in ("page", "field"):
        _reject("INVALID_PAYLOAD", cmd.target, "addField targets a page, a table, or 'globals'")
    payload = {k: v for k, v in cmd.payload.items() if k != "index"}
    diags: list[Diagnostic] = []
    spec = _build_field(payload, cmd.target, diags)
    if diags or spec is None:
        msg = diags[0].message if diags else "field payload malformed"
        _reject("INVALID_PAYLOAD", cmd.target, msg)
    if node.kind == "page":
        _insert(node.page.fields, spec, cmd.payload.get("index"))
    else:
        # dropping a field onto a table adds a column
        _insert(node.field.columns, spec, cmd.payload.get("index"))


_SETTABLE = {
    "form": {"title": str},
    "field": {"label": str, "editable": bool, "hidden": bool, "capability": (str, type(None)), "kind": str},
    "column": {"label": str, "editable": bool, "hidden": bool, "capability": (str, type(None)), "kind": str},
    "global": {"kind": str},
}


def _op_set_property(app: Application, node: _Node, cmd: EditCommand) -> None:
    prop = cmd.payload.get("property")
    value = cmd.payload.get("value")
    allowed = _SETTABLE.get(node.kind, {})
    if prop not in allowed:
        _reject("INVALID_PAYLOAD", cmd.target, f"cannot set '{prop}' on a {node.kind}")
    if not isinstance(value, allowed[prop]):
        _reject("INVALID_PAYLOAD", cmd.target, f"bad value type for '{prop}'")
    obj = {"form": node.form, "field": node.field, "column": node.column, "global": node.global_var}[
        node.kind
    ]
    attr = prop
    setattr(obj, attr, value)


def _op_hide_field(app: Application, node: _Node, cmd: EditCommand) -> None:
    if node.kind not in ("field", "column"):
        _reject("INVALID_PAYLOAD", cmd.target, "hideField targets a field or column")
    (node.column if node.kind == "column" else node.field).hidden = True


def _op_add_navigation(app: Application, node: _Node, cmd: EditCommand) -> None:
    if node.kind != "field":
        _reject("INVALID_PAYLOAD", cmd.target, "addNavigation targets a field")
    diags: list[Diagnostic] = []
    link = _build_nav(cmd.payload, cmd.target, diags)
    if diags or link is None:
        msg = diags[0].message if diags else "navigation payload malformed"
        _reject("INVALID_PAYLOAD", cmd.target, msg)
    if node.field.kind == "table":
        node.field.row_navigation = link
    elif node.field.kind == "button":
        node.field.navigation = link
    else:
        _reject("INVALID_PAYLOAD", cmd.target, f"'{node.field.kind}' fields cannot navigate")


def _op_bind_service(app: Application, node: _Node, cmd: EditCommand) -> None:
    if node.kind != "form":
        _reject("INVALID_PAYLOAD", cmd.target, "bindService targets a form")
    slot = cmd.payload.get("slot")
    if slot not in ("prepopulate", "save"):
        _reject("INVALID_PAYLOAD", cmd.target, "slot must be 'prepopulate' or 'save'")
    binding_doc = cmd.payload.get("binding")
    if binding_doc is None:
        setattr(node.form, slot, None)
        return
    diags: list[Diagnostic] = []
    binding = _build_binding(binding_doc, cmd.target, diags)
    if diags or binding is None:
        msg = diags[0].message if diags else "binding payload malformed"
        _reject("INVALID_PAYLOAD", cmd.target, msg)
    setattr(node.form, slot, binding)


def _op_remove_node(app: Application, node: _Node, cmd: EditCommand) -> None:
    if node.kind == "form":
        app.forms.remove(node.form)
    elif node.kind == "page":
        if len(node.form.pages) == 1:
            _reject("INVALID_PAYLOAD", cmd.target, "forms need at least one page")
        node.form.pages.remove(node.page)
    elif node.kind == "field":
        node.page.fields.remove(node.field)
    elif node.kind == "column":
        node.field.columns.remove(node.column)
    elif node.kind == "global":
        app.globals.remove(node.global_var)
    elif node.kind == "binding":
        setattr(node.form, node.slot, None)
    else:
        _reject("INVALID_PAYLOAD", cmd.target, f"cannot remove a {node.kind}")


def _op_rename_node(app: Application, node: _Node, cmd: EditCommand) -> None:
    new_id = cmd.payload.get("id", cmd.payload.get("name"))
    if not isinstance(new_id, str) or not new_id:
        _reject("INVALID_PAYLOAD", cmd.target, "renameNode needs the new 'id'")
    if node.kind == "form":
        if any(f.id == new_id for f in app.forms):
            _reject("INVALID_PAYLOAD", cmd.target, f"form id '{new_id}' already exists")
        old = node.form.id
        node.form.id = new_id
        _rewrite_nav_targets(app, old, new_id)
    elif node.kind == "page":
        if any(p.id == new_id for p in node.form.pages):
            _reject("INVALID_PAYLOAD", cmd.target, f"page id '{new_id}' already exists")
        node.page.id = new_id
    elif node.kind == "field":
        if node.form.find_field(new_id) is not None:
            _reject("INVALID_PAYLOAD", cmd.target, f"field id '{new_id}' already exists in this form")
        old = node.field.id
        node.field.id = new_id
        _rewrite_field_refs(app, node.form, old, new_id)
    elif node.kind == "column":
        if node.field.find_column(new_id) is not None:
            _reject("INVALID_PAYLOAD", cmd.target, f"column id '{new_id}' already exists")
        old = node.column.id
        node.column.id = new_id
        _rewrite_column_refs(app, node.form, node.field, old, new_id)
    elif node.kind == "global":
        if app.find_global(new_id) is not None:
            _reject("INVALID_PAYLOAD", cmd.target, f"global '{new_id}' already exists")
        old = node.global_var.name
        node.global_var.name = new_id
        _rewrite_global_refs(app, old, new_id)
    else:
        _reject("INVALID_PAYLOAD", cmd.target, f"cannot rename a {node.kind}")


# ---------------------------------------------------------------------------
# reference rewriting so renames never break mappings


def _rewrite_nav_targets(app: Application, old: str, new: str) -> None:
    for form in app.forms:
        for _, link in form.navigation_links():
            if link.target == old:
                link.target = new


def _swap_head(ref, old: str, new: str) -> None:
    head, _, rest = ref.path.partition(".")
    bare = head[:-3] if head.endswith("[*]") else head
    if bare != old:
        return
    suffix = "[*]" if head.endswith("[*]") else ""
    ref.path = new + suffix + ("." + rest if rest else "")


def _form_scoped_refs(app: Application, form: Form):
    """Yield every field-scope ref that resolves inside ``form``.

    That is: the form's own binding mappings and navigation sources, plus
    navigation destinations on other forms whose link targets this form.
    """
    for _, binding in form.bindings():
        for m in binding.inputs:
            if m.source.scope == "field":
                yield m.source
        for m in binding.outputs:
            if m.dest.scope == "field":
                yield m.dest
    for _, link in form.navigation_links():
        for m in link.mappings:
            if m.source.scope == "field":
                yield m.source
    for owner in app.forms:
        for _, link in owner.navigation_links():
            if link.target != form.id:
                continue
            for m in link.mappings:
                if m.dest.scope == "field":
                    yield m.dest


def _rewrite_field_refs(app: Application, form: Form, old: str, new: str) -> None:
    for ref in _form_scoped_refs(app, form):
        _swap_head(ref, old, new)


def _rewrite_column_refs(app: Application, form: Form, table: FieldSpec, old: str, new: str) -> None:
    for ref in _form_scoped_refs(app, form):
        segments = ref.path.split(".")
        if len(segments) == 2 and segments[0] == f"{table.id}[*]" and segments[1] == old:
            ref.path = f"{table.id}[*].{new}"
    for _, link in form.navigation_links():
        if link is table.row_navigation:
            for m in link.mappings:
                if m.source.scope == "row" and m.source.path == old:
                    m.source.path = new


def _rewrite_global_refs(app: Application, old: str, new: str) -> None:
    for form in app.forms:
        for _, binding in form.bindings():
            for m in binding.inputs + binding.outputs:
                for ref in (m.source, m.dest):
                    if ref.scope == "global" and ref.path == old:
                        ref.path = new
        for _, link in form.navigation_links():
            for m in link.mappings:
                for ref in (m.source, m.dest):
                    if ref.scope == "global" and ref.path == old:
                        ref.path = new


_DISPATCH = {
    "addForm": _op_add_form,
    "addPage": _op_add_page,
    "addField": _op_add_field,
    "setProperty": _op_set_property,
    "hideField": _op_hide_field,
    "addNavigation": _op_add_navigation,
    "bindService": _op_bind_service,
    "removeNode": _op_remove_node,
    "renameNode": _op_rename_node,
}
