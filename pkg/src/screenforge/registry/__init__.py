"""Service discovery and the design-time catalogue."""

from .binding_check import check_binding
from .descriptors import (
    BackendSystem,
    ParameterSpec,
    ServiceDescriptor,
    descriptor_from_doc,
    descriptor_problems,
    descriptor_schema,
    descriptor_to_doc,
)
from .registry import CatalogueRow, DiscoveryResult, RegistryError, ServiceRegistry, system_id_for

__all__ = [
    "BackendSystem",
    "CatalogueRow",
    "DiscoveryResult",
    "ParameterSpec",
    "RegistryError",
    "ServiceDescriptor",
    "ServiceRegistry",
    "check_binding",
    "descriptor_from_doc",
    "descriptor_problems",
    "descriptor_schema",
    "descriptor_to_doc",
    "system_id_for",
]
