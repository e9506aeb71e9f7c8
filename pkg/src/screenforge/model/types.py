"""Core data types of the declarative application model."""

import re
from dataclasses import dataclass, field

IDENTIFIER_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_-]*$")

# Where a data reference points. ``row`` is only meaningful inside
# table-row navigation mappings; the service scopes only inside bindings.
REF_SCOPES = ("field", "row", "global", "serviceInput", "serviceOutput")

NAV_SOURCE_KINDS = ("button", "tableRow")

WILDCARD = "[*]"

_SEGMENT_RE = re.compile(r"^([A-Za-z_][A-Za-z0-9_-]*)(\[\*\])?$")


@dataclass
class DataRef:
    """Address of one value: a scope plus a dot path with at most one ``[*]``."""

    scope: str
    path: str

    def segments(self) -> list[tuple[str, bool]]:
        """Split the path into (name, repeats) pairs; raises ValueError on bad syntax."""
        out = []
        for part in self.path.split("."):
            m = _SEGMENT_RE.match(part)
            if not m:
                raise ValueError(f"bad path segment '{part}' in '{self.path}'")
            out.append((m.group(1), m.group(2) is not None))
        return out

    def wildcard_count(self) -> int:
        return self.path.count(WILDCARD)

    def head(self) -> str:
        return self.segments()[0][0]


@dataclass
class DataMapping:
    """One straight field-to-field copy; ``source`` feeds ``dest``."""

    source: DataRef
    dest: DataRef


@dataclass
class ServiceRef:
    system_id: str
    service_id: str


@dataclass
class ServiceBinding:
    """Designer-authored wiring between a form and one backend service."""

    service_ref: ServiceRef
    inputs: list[DataMapping] = field(default_factory=list)
    outputs: list[DataMapping] = field(default_factory=list)


@dataclass
class NavigationLink:
    source_kind: str  # "button" | "tableRow"
    target: str  # form id
    mappings: list[DataMapping] = field(default_factory=list)


@dataclass
class FieldSpec:
    """A typed UI/data field. Tables carry columns and may carry row navigation;
    buttons may carry a navigation link; hidden fields stay in the data model."""

    id: str
    label: str
    kind: str
    editable: bool = True
    hidden: bool = False
    capability: str | None = None
    columns: list["FieldSpec"] = field(default_factory=list)
    row_navigation: NavigationLink | None = None
    navigation: NavigationLink | None = None

    def find_column(self, column_id: str) -> "FieldSpec | None":
        for col in self.columns:
            if col.id == column_id:
                return col
        return None


@dataclass
class Page:
    id: str
    fields: list[FieldSpec] = field(default_factory=list)


@dataclass
class Form:
    id: str
    title: str
    pages: list[Page] = field(default_factory=list)
    prepopulate: ServiceBinding | None = None
    save: ServiceBinding | None = None

    def iter_fields(self):
        """Yield (page, field) over all pages in document order."""
        for page in self.pages:
            for f in page.fields:
                yield page, f

    def find_field(self, field_id: str) -> FieldSpec | None:
        for _, f in self.iter_fields():
            if f.id == field_id:
                return f
        return None

    def navigation_links(self):
        """Yield (field, link) for every navigation link declared on this form."""
        for _, f in self.iter_fields():
            if f.row_navigation is not None:
                yield f, f.row_navigation
            if f.navigation is not None:
                yield f, f.navigation

    def bindings(self):
        """Yield (slot, binding) for the bindings present on this form."""
        if self.prepopulate is not None:
            yield "prepopulate", self.prepopulate
        if self.save is not None:
            yield "save", self.save


@dataclass
class GlobalVariable:
    name: str
    kind: str  # scalar kinds only


@dataclass
class Application:
    """A whole screen-oriented application. The first form is the entry form."""

    name: str
    version: int
    globals: list[GlobalVariable] = field(default_factory=list)
    forms: list[Form] = field(default_factory=list)

    def entry_form(self) -> Form | None:
        return self.forms[0] if self.forms else None

    def find_form(self, form_id: str) -> Form | None:
        for form in self.forms:
            if form.id == form_id:
                return form
        return None

    def find_global(self, name: str) -> GlobalVariable | None:
        for g in self.globals:
            if g.name == name:
                return g
        return None


@dataclass
class Diagnostic:
    """One validation/lint finding. Errors block deployment; warnings do not."""

    severity: str  # "error" | "warning"
    code: str
    location: str  # path into the model, e.g. forms/schedule/pages/p1/fields/tickets
    message: str

    def machine_line(self) -> str:
        return f"{self.severity} {self.code} {self.location or '-'} {self.message}"


def error(code: str, location: str, message: str) -> Diagnostic:
    return Diagnostic("error", code, location, message)


def warning(code: str, location: str, message: str) -> Diagnostic:
    return Diagnostic("warning", code, location, message)


def has_errors(diagnostics: list[Diagnostic]) -> bool:
    return any(d.severity == "error" for d in diagnostics)


@dataclass
class EditCommand:
    """One atomic model edit; either it applies whole or the model is untouched."""

    op: str
    target: str = ""
    payload: dict = field(default_factory=dict)


EDIT_OPS = (
    "createApp",
    "addForm",
    "addPage",
    "addField",
    "setProperty",
    "hideField",
    "addNavigation",
    "bindService",
    "removeNode",
    "renameNode",
)
