"""Declarative application model: types, DSL io, validation, lint, edits."""

from .document import AppParseError, app_to_doc, parse_app, parse_app_doc, serialize_app
from .edits import EditRejected, apply_edit
from .kinds import CAPABILITY_KINDS, FIELD_KINDS, SCALAR_KINDS, kinds_compatible, validate_value
from .types import (
    Application,
    DataMapping,
    DataRef,
    Diagnostic,
    EditCommand,
    FieldSpec,
    Form,
    GlobalVariable,
    NavigationLink,
    Page,
    ServiceBinding,
    ServiceRef,
    has_errors,
)
from .validate import lint, structural_diagnostics, validate

__all__ = [
    "AppParseError",
    "Application",
    "CAPABILITY_KINDS",
    "DataMapping",
    "DataRef",
    "Diagnostic",
    "EditCommand",
    "EditRejected",
    "FIELD_KINDS",
    "FieldSpec",
    "Form",
    "GlobalVariable",
    "NavigationLink",
    "Page",
    "SCALAR_KINDS",
    "ServiceBinding",
    "ServiceRef",
    "app_to_doc",
    "apply_edit",
    "has_errors",
    "kinds_compatible",
    "lint",
    "parse_app",
    "parse_app_doc",
    "serialize_app",
    "structural_diagnostics",
    "validate",
    "validate_value",
]
