"""The ``screenforge`` command line: a thin client over the platform modules.

Exit codes are stable: 0 success, 1 diagnostics with errors, 2 usage error,
3 environment/network failure.
"""

import json
import sys
from pathlib import Path

import click
import uvicorn

from .deploy.bundles import DeployError, TARGETS
from .deploy.catalogue import AppCatalogue
from .deploy.pipeline import deploy_application
from .gateway.api import create_gateway_app
from .model.document import AppParseError, parse_app, serialize_app
from .model.types import Application, has_errors
from .model.validate import lint as lint_model
from .model.validate import validate as validate_model
from .registry.binding_check import check_binding
from .registry.registry import RegistryError, ServiceRegistry
from .workspace import Workspace

EXIT_OK = 0
EXIT_DIAGNOSTICS = 1
EXIT_USAGE = 2
EXIT_ENVIRONMENT = 3


def _emit_diagnostics(diags, fmt: str) -> None:
    for d in diags:
        if fmt == "machine":
            click.echo(d.machine_line())
        else:
            click.echo(f"[{d.severity}] {d.code} at {d.location or '-'}: {d.message}")


def _load_app(path: str, fmt: str) -> Application:
    file = Path(path)
    if not file.is_file():
        click.echo(f"no such file: {path}", err=True)
        sys.exit(EXIT_USAGE)
    try:
        return parse_app(file.read_text("utf-8"))
    except AppParseError as exc:
        _emit_diagnostics(exc.diagnostics, fmt)
        sys.exit(EXIT_DIAGNOSTICS)


@click.group()
@click.option("--workspace", "workspace_dir", default=None, help="registry + catalogue location")
@click.option("--format", "fmt", type=click.Choice(["text", "machine"]), default="text")
@click.pass_context
def main(ctx, workspace_dir, fmt):
    """Design, validate, preview, and deploy screen-oriented applications."""
    ctx.ensure_object(dict)
    ctx.obj["workspace"] = Workspace.resolve(workspace_dir)
    ctx.obj["fmt"] = fmt


@main.command()
@click.argument("name")
@click.option("--template", default="blank", type=click.Choice(["blank"]))
@click.pass_context
def new(ctx, name, template):
    """Scaffold a new application document <NAME>.app.json."""
    app = Application(
        name=name,
        version=1,
        globals=[],
        forms=[],
    )
    from .model.types import Form, Page

    app.forms.append(Form(id="home", title="Home", pages=[Page(id="page1", fields=[])]))
    out = Path(f"{name}.app.json")
    if out.exists():
        click.echo(f"refusing to overwrite {out}", err=True)
        sys.exit(EXIT_USAGE)
    out.write_text(serialize_app(app), "utf-8")
    click.echo(str(out))


@main.command()
@click.argument("path")
@click.pass_context
def validate(ctx, path):
    """Validate an application against the workspace service catalogue."""
    fmt = ctx.obj["fmt"]
    app = _load_app(path, fmt)
    registry = ServiceRegistry(ctx.obj["workspace"].registry_file)
    diags = validate_model(app, registry.all_descriptors())
    _emit_diagnostics(diags, fmt)
    sys.exit(EXIT_DIAGNOSTICS if has_errors(diags) else EXIT_OK)


@main.command()
@click.argument("path")
@click.pass_context
def lint(ctx, path):
    """Lint a valid application (warnings only; they never block)."""
    fmt = ctx.obj["fmt"]
    app = _load_app(path, fmt)
    registry = ServiceRegistry(ctx.obj["workspace"].registry_file)
    diags = validate_model(app, registry.all_descriptors())
    if has_errors(diags):
        _emit_diagnostics(diags, fmt)
        sys.exit(EXIT_DIAGNOSTICS)
    _emit_diagnostics(lint_model(app), fmt)
    sys.exit(EXIT_OK)


@main.command()
@click.argument("endpoint")
@click.option("--name", "display_name", default="", help="display name for the backend system")
@click.pass_context
def discover(ctx, endpoint, display_name):
    """Register a backend system and fetch its service catalogue."""
    fmt = ctx.obj["fmt"]
    registry = ServiceRegistry(ctx.obj["workspace"].ensure().registry_file)
    try:
        system = registry.register_system(endpoint, display_name or endpoint)
        result = registry.discover(system.system_id)
    except ValueError as exc:
        click.echo(str(exc), err=True)
        sys.exit(EXIT_USAGE)
    except RegistryError as exc:
        click.echo(f"{exc.code}: {exc}", err=True)
        sys.exit(EXIT_ENVIRONMENT)
    for d in result.diagnostics:
        click.echo(d.machine_line(), err=True)
    for row in registry.list_catalogue(system.system_id):
        if fmt == "machine":
            click.echo(f"{row.system_id}\t{row.service_id}\t{row.name}\t{row.description}")
        else:
            click.echo(f"{row.system_id}/{row.service_id}  {row.name} - {row.description}")
    sys.exit(EXIT_OK)


@main.command(name="bind-check")
@click.argument("path")
@click.pass_context
def bind_check(ctx, path):
    """Check every service binding in an application against the catalogue."""
    fmt = ctx.obj["fmt"]
    app = _load_app(path, fmt)
    registry = ServiceRegistry(ctx.obj["workspace"].registry_file)
    diags = []
    for form in app.forms:
        for slot, binding in form.bindings():
            location = f"forms/{form.id}/{slot}"
            descriptor = registry.find_descriptor(
                binding.service_ref.system_id, binding.service_ref.service_id
            )
            if descriptor is None:
                from .model.types import error

                diags.append(
                    error(
                        "UNKNOWN_SERVICE",
                        location,
                        f"service '{binding.service_ref.system_id}/{binding.service_ref.service_id}'"
                        " is not in the catalogue",
                    )
                )
                continue
            diags.extend(check_binding(binding, descriptor, app, form_id=form.id, location=location))
    _emit_diagnostics(diags, fmt)
    sys.exit(EXIT_DIAGNOSTICS if has_errors(diags) else EXIT_OK)


@main.command()
@click.argument("path")
@click.option("--port", default=9400, type=int)
@click.option("--host", default="127.0.0.1")
@click.option("--ui", "ui_dir", default=None, help="static builder assets (default: ./frontend/dist)")
@click.pass_context
def preview(ctx, path, port, host, ui_dir):
    """Serve the gateway over an in-memory bundle of the given application."""
    fmt = ctx.obj["fmt"]
    workspace = ctx.obj["workspace"].ensure()
    app = _load_app(path, fmt)
    registry = ServiceRegistry(workspace.registry_file)
    diags = validate_model(app, registry.all_descriptors())
    if has_errors(diags):
        _emit_diagnostics(diags, fmt)
        sys.exit(EXIT_DIAGNOSTICS)

    if any(True for form in app.forms for _ in form.bindings()):
        from .deploy.pipeline import compile_app_adapters
        from .gateway.adapters import AdapterStore

        try:
            adapters = compile_app_adapters(app, registry)
        except DeployError as exc:
            _emit_diagnostics(exc.diagnostics, fmt)
            click.echo(str(exc), err=True)
            sys.exit(EXIT_DIAGNOSTICS)
        AdapterStore(workspace.adapter_store_file).put_all(adapters)

    static_dir = Path(ui_dir) if ui_dir else Path("frontend/dist")
    service = create_gateway_app(
        workspace,
        preview_app=app,
        static_dir=static_dir if static_dir.exists() else None,
    )
    print(f"http://{host}:{port}", flush=True)
    uvicorn.run(service, host=host, port=port, log_level="warning")


@main.command()
@click.argument("path")
@click.option("--targets", default="ios,android", help="comma-separated platform targets")
@click.pass_context
def deploy(ctx, path, targets):
    """Build platform-tagged bundles and publish them to the catalogue."""
    fmt = ctx.obj["fmt"]
    target_list = [t.strip() for t in targets.split(",") if t.strip()]
    unknown = [t for t in target_list if t not in TARGETS]
    if not target_list or unknown:
        click.echo(f"unknown targets {unknown}; choose from {list(TARGETS)}", err=True)
        sys.exit(EXIT_USAGE)
    app = _load_app(path, fmt)
    try:
        results = deploy_application(app, target_list, ctx.obj["workspace"].ensure())
    except DeployError as exc:
        _emit_diagnostics(exc.diagnostics, fmt)
        click.echo(f"{exc.code}: {exc}", err=True)
        sys.exit(EXIT_DIAGNOSTICS)
    for r in results:
        if fmt == "machine":
            click.echo(f"{r.bundle.bundle_id}\t{r.bundle.checksum}")
        else:
            click.echo(f"published {r.bundle.bundle_id} (checksum {r.bundle.checksum[:12]}...)")
    sys.exit(EXIT_OK)


@main.command()
@click.pass_context
def catalogue(ctx):
    """List the published application bundles."""
    fmt = ctx.obj["fmt"]
    entries = AppCatalogue(ctx.obj["workspace"].catalogue_log).list_apps()
    for e in entries:
        if fmt == "machine":
            click.echo(f"{e.bundle_id}\t{e.app_name}\t{e.app_version}\t{e.target}\t{e.status}")
        else:
            click.echo(f"{e.app_name} v{e.app_version} [{e.target}] {e.status} ({e.bundle_id})")
    sys.exit(EXIT_OK)


if __name__ == "__main__":
    main()
