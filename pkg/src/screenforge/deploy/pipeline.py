"""End-to-end deploy: validate, compile adapters, build bundles, publish."""

from dataclasses import dataclass

from ..gateway.adapters import AdapterError, AdapterSpec, AdapterStore, generate_adapter
from ..model.types import Application, has_errors
from ..model.validate import validate
from ..registry.registry import ServiceRegistry
from ..workspace import Workspace
from .bundles import Bundle, DeployError, build_bundle, write_bundle
from .catalogue import AppCatalogue, CatalogueEntry


@dataclass
class DeployResult:
    bundle: Bundle
    entry: CatalogueEntry


def compile_app_adapters(app: Application, registry: ServiceRegistry) -> list[AdapterSpec]:
    """Generate one adapter per service binding in the app.

    Raises DeployError(VALIDATION_FAILED) when a binding references an
    unknown service or does not check clean.
    """
    adapters: dict[str, AdapterSpec] = {}
    for form in app.forms:
        for slot, binding in form.bindings():
            ref = binding.service_ref
            descriptor = registry.find_descriptor(ref.system_id, ref.service_id)
            if descriptor is None:
                raise DeployError(
                    "VALIDATION_FAILED",
                    f"forms/{form.id}/{slot} binds unknown service '{ref.system_id}/{ref.service_id}'",
                )
            endpoint = registry.system(ref.system_id).discovery_endpoint
            try:
                adapter = generate_adapter(binding, descriptor, app, endpoint, form_id=form.id)
            except AdapterError as exc:
                raise DeployError("VALIDATION_FAILED", str(exc), diagnostics=exc.diagnostics) from exc
            adapters[adapter.adapter_id] = adapter
    return list(adapters.values())


def deploy_application(app: Application, targets: list[str], workspace: Workspace) -> list[DeployResult]:
    """Build and publish one bundle per target; the adapter specs land in the
    gateway's private store, never in the bundles."""
    workspace.ensure()
    registry = ServiceRegistry(workspace.registry_file)
    catalogue_descriptors = registry.all_descriptors()

    diags = validate(app, catalogue_descriptors)
    if has_errors(diags):
        raise DeployError("VALIDATION_FAILED", f"'{app.name}' does not validate", diagnostics=diags)

    adapters = compile_app_adapters(app, registry)
    AdapterStore(workspace.adapter_store_file).put_all(adapters)

    catalogue = AppCatalogue(workspace.catalogue_log)
    results = []
    for target in targets:
        bundle = build_bundle(app, target, adapters, catalogue_descriptors)
        write_bundle(bundle, workspace.bundles_dir)
        entry = catalogue.publish(bundle)
        results.append(DeployResult(bundle=bundle, entry=entry))
    return results
