"""Workspace layout: one directory holding every design-time artifact."""

import os
from dataclasses import dataclass
from pathlib import Path

DEFAULT_WORKSPACE = ".screenforge"
ENV_VAR = "SCREENFORGE_WORKSPACE"


@dataclass
class Workspace:
    root: Path

    @classmethod
    def resolve(cls, cli_value: str | None) -> "Workspace":
        """SCREENFORGE_WORKSPACE overrides --workspace, which overrides the default."""
        env = os.environ.get(ENV_VAR)
        return cls(Path(env or cli_value or DEFAULT_WORKSPACE))

    @property
    def registry_file(self) -> Path:
        return self.root / "registry.workspace.json"

    @property
    def catalogue_log(self) -> Path:
        return self.root / "catalogue.log"

    @property
    def bundles_dir(self) -> Path:
        return self.root / "bundles"

    @property
    def adapter_store_file(self) -> Path:
        return self.root / "gateway.adapters.json"

    @property
    def apps_dir(self) -> Path:
        return self.root / "apps"

    def ensure(self) -> "Workspace":
        self.root.mkdir(parents=True, exist_ok=True)
        return self
