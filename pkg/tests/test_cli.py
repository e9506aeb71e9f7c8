"""Exit codes and wiring of the screenforge command line."""

import json
from pathlib import Path

from click.testing import CliRunner

from screenforge.cli import main
from screenforge.model.document import parse_app

from .conftest import FIXTURES, FIXTURE_APP_PATH

FIXTURE = str(FIXTURE_APP_PATH)


def run(args, env=None):
    runner = CliRunner()
    merged = {"SCREENFORGE_WORKSPACE": None}
    merged.update(env or {})
    return runner.invoke(main, args, env=merged)


def ws_args(workspace):
    return ["--workspace", str(workspace.root)]


def _discover(workspace, sim_server):
    return run(ws_args(workspace) + ["discover", sim_server.base_url])


def test_new_scaffolds_a_parseable_blank_app(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    result = run(["new", "Rounds"])
    assert result.exit_code == 0
    app = parse_app((tmp_path / "Rounds.app.json").read_text())
    assert app.name == "Rounds"
    assert len(app.forms) == 1


def test_validate_fixture_exits_zero(workspace, sim_server):
    assert _discover(workspace, sim_server).exit_code == 0
    result = run(ws_args(workspace) + ["validate", FIXTURE])
    assert result.exit_code == 0
    assert result.output == ""


def test_validate_broken_variant_prints_the_planted_code(workspace, sim_server):
    _discover(workspace, sim_server)
    broken = str(FIXTURES / "broken" / "unresolved_nav_target.app.json")
    result = run(ws_args(workspace) + ["--format", "machine", "validate", broken])
    assert result.exit_code == 1
    severity, code, path, *_ = result.output.split()
    assert (severity, code) == ("error", "UNRESOLVED_NAV_TARGET")
    assert path.startswith("forms/schedule/")


def test_validate_missing_file_is_usage_error(workspace):
    result = run(ws_args(workspace) + ["validate", "no/such/file.app.json"])
    assert result.exit_code == 2


def test_lint_warnings_do_not_block(workspace, sim_server, tmp_path):
    _discover(workspace, sim_server)
    doc = json.loads(FIXTURE_APP_PATH.read_text())
    for form in doc["forms"]:
        if form["id"] == "schedule":
            form["pages"][0]["fields"][0]["columns"][0]["hidden"] = False
    wide = tmp_path / "wide.app.json"
    wide.write_text(json.dumps(doc), "utf-8")
    result = run(ws_args(workspace) + ["--format", "machine", "lint", str(wide)])
    assert result.exit_code == 0
    assert "TOO_MANY_VISIBLE_COLUMNS" in result.output


def test_discover_prints_five_rows_and_is_deterministic(workspace, sim_server):
    first = run(ws_args(workspace) + ["--format", "machine", "discover", sim_server.base_url])
    assert first.exit_code == 0
    rows = [line.split("\t") for line in first.output.strip().splitlines()]
    assert len(rows) == 5
    assert {r[1] for r in rows} == {"getSchedule", "getCustomer", "getTicket", "getTicketHistory", "saveSummary"}
    second = run(ws_args(workspace) + ["--format", "machine", "discover", sim_server.base_url])
    assert second.output == first.output


def test_discover_dead_endpoint_is_environment_failure(workspace):
    import socket

    with socket.socket() as probe:
        probe.bind(("127.0.0.1", 0))
        port = probe.getsockname()[1]
    result = run(ws_args(workspace) + ["discover", f"http://127.0.0.1:{port}"])
    assert result.exit_code == 3


def test_discover_invalid_url_is_usage_error(workspace):
    assert run(ws_args(workspace) + ["discover", "not a url"]).exit_code == 2


def test_bind_check_fixture(workspace, sim_server):
    _discover(workspace, sim_server)
    assert run(ws_args(workspace) + ["bind-check", FIXTURE]).exit_code == 0


def test_bind_check_without_catalogue_reports_unknown_services(workspace):
    result = run(ws_args(workspace) + ["--format", "machine", "bind-check", FIXTURE])
    assert result.exit_code == 1
    assert all(line.split()[1] == "UNKNOWN_SERVICE" for line in result.output.strip().splitlines())


def test_deploy_single_target(workspace, sim_server):
    _discover(workspace, sim_server)
    result = run(ws_args(workspace) + ["--format", "machine", "deploy", FIXTURE, "--targets", "ios"])
    assert result.exit_code == 0
    lines = result.output.strip().splitlines()
    assert len(lines) == 1
    bundle_id, checksum = lines[0].split("\t")
    assert bundle_id == "TechSupport-v1-ios"
    assert len(checksum) == 64


def test_deploy_both_targets_lists_two_catalogue_entries(workspace, sim_server):
    _discover(workspace, sim_server)
    result = run(ws_args(workspace) + ["deploy", FIXTURE, "--targets", "ios,android"])
    assert result.exit_code == 0
    listing = run(ws_args(workspace) + ["--format", "machine", "catalogue"])
    rows = [line.split("\t") for line in listing.output.strip().splitlines()]
    assert len(rows) == 2
    assert {r[3] for r in rows} == {"ios", "android"}
    assert all(r[1] == "TechSupport" and r[4] == "published" for r in rows)


def test_deploy_invalid_app_exits_one(workspace, sim_server):
    _discover(workspace, sim_server)
    broken = str(FIXTURES / "broken" / "missing_required_input.app.json")
    result = run(ws_args(workspace) + ["deploy", broken])
    assert result.exit_code == 1


def test_deploy_unknown_target_is_usage_error(workspace):
    assert run(ws_args(workspace) + ["deploy", FIXTURE, "--targets", "blackberry"]).exit_code == 2


def test_env_var_overrides_workspace_flag(tmp_path, sim_server):
    env_ws = tmp_path / "env-ws"
    flag_ws = tmp_path / "flag-ws"
    result = run(
        ["--workspace", str(flag_ws), "discover", sim_server.base_url],
        env={"SCREENFORGE_WORKSPACE": str(env_ws)},
    )
    assert result.exit_code == 0
    assert (env_ws / "registry.workspace.json").exists()
    assert not flag_ws.exists()
