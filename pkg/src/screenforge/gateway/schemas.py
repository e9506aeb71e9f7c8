"""Pydantic request/response models for the platform HTTP surface.

Field names follow the wire format (camelCase) so the models document the
protocol exactly as clients see it.
"""

from typing import Any

from pydantic import BaseModel, Field


class DiagnosticModel(BaseModel):
    severity: str
    code: str
    location: str
    message: str


class FieldState(BaseModel):
    id: str
    label: str
    kind: str
    editable: bool
    value: str | None = None


class FormState(BaseModel):
    formId: str
    title: str
    saveEnabled: bool
    fields: list[FieldState]
    tables: dict[str, list[dict[str, str]]]
    diagnostics: list[DiagnosticModel]


class SessionCreateRequest(BaseModel):
    bundleId: str


class SessionCreateResponse(BaseModel):
    sessionId: str
    formState: FormState


class OpenFormRequest(BaseModel):
    formId: str
    navParams: dict[str, str] = Field(default_factory=dict)


class SetFieldRequest(BaseModel):
    fieldPath: str
    value: str


class NavigateRequest(BaseModel):
    navRef: str
    rowIndex: int | None = None


class CapabilityRequest(BaseModel):
    fieldPath: str


class SaveResult(BaseModel):
    ok: bool
    acknowledgment: dict[str, Any] | None = None
    diagnostics: list[DiagnosticModel]


class SessionSnapshot(BaseModel):
    sessionId: str
    bundleId: str
    currentForm: str
    fieldValues: dict[str, str]
    tableRows: dict[str, list[dict[str, str]]]
    globals: dict[str, str]
    history: list[str]


# -- design-time surface -------------------------------------------------------


class AppEnvelope(BaseModel):
    appId: str
    version: int
    app: dict[str, Any]


class AppCreateRequest(BaseModel):
    name: str


class EditCommandModel(BaseModel):
    op: str
    target: str = ""
    payload: dict[str, Any] = Field(default_factory=dict)


class EditRequest(BaseModel):
    baseVersion: int
    command: EditCommandModel


class ValidationReport(BaseModel):
    diagnostics: list[DiagnosticModel]


class CatalogueRowModel(BaseModel):
    systemId: str
    serviceId: str
    name: str
    description: str


class DiscoverRequest(BaseModel):
    endpoint: str
    displayName: str = ""


class DeployRequest(BaseModel):
    appId: str
    targets: list[str]


class BundleEntryModel(BaseModel):
    bundleId: str
    appName: str
    appVersion: int
    target: str
    status: str
    checksum: str


class DeployResponse(BaseModel):
    entries: list[BundleEntryModel]
