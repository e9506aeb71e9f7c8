"""Bundle builds and the published-app catalogue."""

from .bundles import (
    Bundle,
    DeployError,
    TARGET_MANIFESTS,
    TARGETS,
    build_bundle,
    bundle_checksum,
    load_bundle,
    verify_checksum,
    write_bundle,
)
from .catalogue import AppCatalogue, CatalogueEntry
from .pipeline import DeployResult, compile_app_adapters, deploy_application

__all__ = [
    "AppCatalogue",
    "Bundle",
    "CatalogueEntry",
    "DeployError",
    "DeployResult",
    "TARGETS",
    "TARGET_MANIFESTS",
    "build_bundle",
    "bundle_checksum",
    "compile_app_adapters",
    "deploy_application",
    "load_bundle",
    "verify_checksum",
    "write_bundle",
]
