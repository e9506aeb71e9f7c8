"""Bundle determinism, endpoint hygiene, and the published-app catalogue."""

import json

import pytest

from screenforge.deploy.bundles import (
    DeployError,
    build_bundle,
    load_bundle,
    verify_checksum,
    write_bundle,
)
from screenforge.deploy.catalogue import AppCatalogue
from screenforge.deploy.pipeline import compile_app_adapters, deploy_application
from screenforge.gateway.adapters import generate_adapter
from screenforge.registry.registry import ServiceRegistry

from .conftest import load_fixture_app, sim_catalogue


def _adapters(app, endpoint="http://127.0.0.1:9301"):
    descriptors = {d.service_id: d for d in sim_catalogue()}
    out = []
    for form in app.forms:
        for _, binding in form.bindings():
            out.append(
                generate_adapter(
                    binding, descriptors[binding.service_ref.service_id], app, endpoint, form_id=form.id
                )
            )
    return out


def test_build_is_deterministic():
    app = load_fixture_app()
    adapters = _adapters(app)
    first = build_bundle(app, "ios", adapters, sim_catalogue())
    second = build_bundle(app, "ios", adapters, sim_catalogue())
    assert first.checksum == second.checksum
    assert first.bundle_id == "TechSupport-v1-ios"


def test_targets_share_model_bytes_but_not_checksums():
    app = load_fixture_app()
    adapters = _adapters(app)
    ios = build_bundle(app, "ios", adapters, sim_catalogue())
    android = build_bundle(app, "android", adapters, sim_catalogue())
    assert ios.model_text == android.model_text
    assert ios.adapter_refs == android.adapter_refs
    assert ios.checksum != android.checksum
    assert (ios.target, android.target) == ("ios", "android")


def test_unbound_save_service_is_missing_adapter():
    app = load_fixture_app()
    adapters = [a for a in _adapters(app) if a.service_id != "saveSummary"]
    with pytest.raises(DeployError) as exc:
        build_bundle(app, "ios", adapters, sim_catalogue())
    assert exc.value.code == "MISSING_ADAPTER"


def test_invalid_app_fails_validation():
    app = load_fixture_app()
    app.find_form("schedule").find_field("tickets").row_navigation.target = "gone"
    with pytest.raises(DeployError) as exc:
        build_bundle(app, "ios", _adapters(app), sim_catalogue())
    assert exc.value.code == "VALIDATION_FAILED"
    assert any(d.code == "UNRESOLVED_NAV_TARGET" for d in exc.value.diagnostics)


def test_unknown_target_is_a_usage_error():
    app = load_fixture_app()
    with pytest.raises(ValueError):
        build_bundle(app, "windows", _adapters(app), sim_catalogue())


def test_bundle_bytes_never_contain_the_backend_endpoint(tmp_path):
    app = load_fixture_app()
    endpoint = "http://127.0.0.1:9301"
    bundle = build_bundle(app, "ios", _adapters(app, endpoint), sim_catalogue())
    bundle_dir = write_bundle(bundle, tmp_path / "bundles")
    for path in bundle_dir.rglob("*"):
        if path.is_file():
            content = path.read_bytes()
            assert b"127.0.0.1" not in content, path
            assert b"9301" not in content, path


def test_write_load_round_trip(tmp_path):
    app = load_fixture_app()
    bundle = build_bundle(app, "android", _adapters(app), sim_catalogue())
    bundle_dir = write_bundle(bundle, tmp_path / "bundles")
    assert sorted(p.name for p in bundle_dir.iterdir()) == [
        "adapters.json",
        "manifest.json",
        "model.app.json",
    ]
    loaded = load_bundle(bundle_dir)
    assert loaded.checksum == bundle.checksum
    assert loaded.model_text == bundle.model_text
    assert verify_checksum(loaded)


def test_tampered_bundle_fails_checksum(tmp_path):
    app = load_fixture_app()
    bundle = build_bundle(app, "ios", _adapters(app), sim_catalogue())
    bundle_dir = write_bundle(bundle, tmp_path / "bundles")
    model_path = bundle_dir / "model.app.json"
    model_path.write_text(model_path.read_text().replace("Schedule", "Schedlue"), "utf-8")
    tampered = load_bundle(bundle_dir)
    assert not verify_checksum(tampered)
    catalogue = AppCatalogue(tmp_path / "catalogue.log")
    with pytest.raises(DeployError) as exc:
        catalogue.publish(tampered)
    assert exc.value.code == "CHECKSUM_MISMATCH"


def test_publish_both_targets_lists_two_entries(tmp_path):
    app = load_fixture_app()
    adapters = _adapters(app)
    catalogue = AppCatalogue(tmp_path / "catalogue.log")
    for target in ("ios", "android"):
        catalogue.publish(build_bundle(app, target, adapters, sim_catalogue()))
    entries = catalogue.list_apps()
    assert len(entries) == 2
    assert [e.target for e in entries] == ["android", "ios"]  # ordered by (appName, target)
    assert all(e.status == "published" for e in entries)


def test_republish_replaces_atomically(tmp_path):
    app = load_fixture_app()
    adapters = _adapters(app)
    catalogue = AppCatalogue(tmp_path / "catalogue.log")
    bundle = build_bundle(app, "ios", adapters, sim_catalogue())
    catalogue.publish(bundle)
    catalogue.publish(bundle)
    catalogue.publish(bundle)
    entries = catalogue.list_apps()
    assert len(entries) == 1
    assert entries[0].bundle_id == bundle.bundle_id


def test_archive_keeps_the_entry_visible(tmp_path):
    app = load_fixture_app()
    adapters = _adapters(app)
    catalogue = AppCatalogue(tmp_path / "catalogue.log")
    ios = build_bundle(app, "ios", adapters, sim_catalogue())
    android = build_bundle(app, "android", adapters, sim_catalogue())
    catalogue.publish(ios)
    catalogue.publish(android)
    catalogue.archive(ios.bundle_id)
    statuses = {e.bundle_id: e.status for e in catalogue.list_apps()}
    assert statuses == {ios.bundle_id: "archived", android.bundle_id: "published"}


def test_fresh_catalogue_is_empty(tmp_path):
    assert AppCatalogue(tmp_path / "catalogue.log").list_apps() == []


def test_compaction_preserves_state(tmp_path):
    app = load_fixture_app()
    adapters = _adapters(app)
    catalogue = AppCatalogue(tmp_path / "catalogue.log")
    bundle = build_bundle(app, "ios", adapters, sim_catalogue())
    for _ in range(80):
        catalogue.publish(bundle)
    before = catalogue.list_apps()
    # the append path auto-compacts once dead events pile up
    line_count = len((tmp_path / "catalogue.log").read_text().splitlines())
    assert line_count < 80
    assert catalogue.list_apps() == before


def test_deploy_application_end_to_end(workspace, sim_server):
    registry = ServiceRegistry(workspace.registry_file)
    system = registry.register_system(sim_server.base_url, "sim")
    registry.discover(system.system_id)

    results = deploy_application(load_fixture_app(), ["ios", "android"], workspace)
    assert [r.entry.target for r in results] == ["ios", "android"]
    assert (workspace.bundles_dir / results[0].bundle.bundle_id / "manifest.json").exists()
    assert workspace.adapter_store_file.exists()
    # adapter endpoints stay in the gateway store, never in bundle bytes
    store_text = workspace.adapter_store_file.read_text()
    assert sim_server.base_url in store_text
    for r in results:
        for path in (workspace.bundles_dir / r.bundle.bundle_id).rglob("*"):
            assert b"127.0.0.1" not in path.read_bytes()


def test_compile_adapters_requires_discovery(workspace):
    with pytest.raises(DeployError) as exc:
        deploy_application(load_fixture_app(), ["ios"], workspace)
    assert exc.value.code == "VALIDATION_FAILED"
