"""Render projections of a form.

A device renders the visible projection; the data model (and every mapping)
sees the data projection, which keeps hidden fields and hidden columns.
"""

from .types import FieldSpec, Form


def save_affordance(form: Form) -> bool:
    """A save button is rendered exactly when the form has a save binding."""
    return form.save is not None


def visible_fields(form: Form) -> list[FieldSpec]:
    return [f for _, f in form.iter_fields() if not f.hidden]


def data_fields(form: Form) -> list[FieldSpec]:
    return [f for _, f in form.iter_fields()]


def visible_columns(table: FieldSpec) -> list[FieldSpec]:
    return [c for c in table.columns if not c.hidden]


def data_columns(table: FieldSpec) -> list[FieldSpec]:
    return list(table.columns)
