"""File formats: coloring files and certificate files (JSON).

Both are written with sorted keys, two-space indentation and a trailing
newline, and carry no timestamps, so identical inputs give identical bytes.
This module knows nothing about how witnesses are found.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .coloring import Coloring, Rule
from .core import Alphabet, Window
from .errors import MalformedCertificate, ParseError

TOOL_VERSION = "0.1.0"
KINDS = ("hj", "carlson", "match", "schedule", "fu")


def dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


# ---------------------------------------------------------------------------
# Coloring files
# ---------------------------------------------------------------------------

def coloring_to_json(f: Coloring) -> dict:
    out: dict[str, Any] = {"alphabet": "".join(f.alphabet.letters), "colors": f.n_colors, "window": f.window}
    if f.rule is not None:
        out["rule"] = f.rule.to_json()
    else:
        out["table"] = [int(x) for x in f.table]
    return out


def coloring_from_json(data: dict) -> Coloring:
    try:
        A = Alphabet(data["alphabet"])
        n = int(data["window"])
        if "rule" in data:
            rule = Rule.from_json(data["rule"])
            return Coloring.from_rule(A, rule, n, data.get("colors"))
        table = data["table"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"coloring file is missing or mistypes a field: {exc}") from None
    if len(table) != (A.k + 1) ** n:
        raise ParseError(f"table has {len(table)} entries, window {n} needs {(A.k + 1) ** n}")
    return Coloring(A, int(data["colors"]), table)


def load_coloring(path: str | Path) -> Coloring:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: {exc}") from None
    return coloring_from_json(data)


def save_coloring(f: Coloring, path: str | Path) -> None:
    Path(path).write_text(dumps(coloring_to_json(f)))


# ---------------------------------------------------------------------------
# Certificate files
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CertificateFile:
    kind: str
    instance_hash: str
    payload: dict
    window: Window
    tool_version: str = TOOL_VERSION
    extra_hashes: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {
            "kind": self.kind,
            "instance_hash": self.instance_hash,
            "payload": self.payload,
            "window": self.window.to_json(),
            "tool_version": self.tool_version,
        }
        if self.extra_hashes:
            out["extra_hashes"] = dict(self.extra_hashes)
        return out

    def dumps(self) -> str:
        return dumps(self.to_json())

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.dumps())

    @classmethod
    def from_json(cls, data: Any) -> "CertificateFile":
        if not isinstance(data, dict):
            raise MalformedCertificate("certificate must be a JSON object")
        try:
            kind = data["kind"]
            if kind not in KINDS:
                raise MalformedCertificate(f"unknown certificate kind {kind!r}")
            payload = data["payload"]
            if not isinstance(payload, dict):
                raise MalformedCertificate("payload must be an object")
            return cls(kind, str(data["instance_hash"]), payload, Window.from_json(data["window"]),
                       str(data.get("tool_version", "")), dict(data.get("extra_hashes", {})))
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, MalformedCertificate):
                raise
            raise MalformedCertificate(f"certificate field missing or mistyped: {exc}") from None

    @classmethod
    def load(cls, path: str | Path) -> "CertificateFile":
        try:
            return cls.from_json(json.loads(Path(path).read_text()))
        except json.JSONDecodeError as exc:
            raise MalformedCertificate(f"{path}: {exc}") from None


__all__ = ["CertificateFile", "KINDS", "TOOL_VERSION", "coloring_from_json", "coloring_to_json", "dumps",
           "load_coloring", "save_coloring"]
