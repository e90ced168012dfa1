"""Writing output files stamped with the package version and config hash."""

from __future__ import annotations

import json
import os
import re


class ArtifactWriter:
    def __init__(self, directory: str, config_hash: str, version: str):
        self.directory = directory
        self.config_hash = config_hash
        self.version = version
        self.written: list[str] = []
        os.makedirs(directory, exist_ok=True)

    @property
    def stamp(self) -> str:
        return f"geocensus {self.version} config={self.config_hash}"

    def path(self, name: str) -> str:
        stem, ext = os.path.splitext(name)
        stem = re.sub(r"[^A-Za-z0-9._-]+", "-", stem).replace("-_", "_").strip("-")
        return os.path.join(self.directory, stem + ext)

    def _record(self, path: str) -> str:
        self.written.append(path)
        return path

    def csv(self, name: str, body: str) -> str:
        path = self.path(name)
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(f"# {self.stamp}\n")
            fh.write(body)
        return self._record(path)

    def json(self, name: str, data: dict) -> str:
        payload = dict(data)
        payload["version"] = self.version
        payload["config_hash"] = self.config_hash
        path = self.path(name)
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")
        return self._record(path)

    def json_text(self, name: str, text: str) -> str:
        return self.json(name, json.loads(text))

    def figure(self, name: str, render) -> str:
        """``render(path, stamp)`` draws the figure; the stamp goes into PNG metadata."""
        path = self.path(name)
        render(path, self.stamp)
        return self._record(path)
