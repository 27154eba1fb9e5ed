"""CSV payloads and JSON run manifests."""
from __future__ import annotations

import csv
import hashlib
import json
import os
import tempfile
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

MANIFEST_NAME = "manifest.json"
MANIFEST_SCHEMA = 1


def _fmt(x) -> str:
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    if isinstance(x, (np.integer,)):
        return str(int(x))
    return str(x)


def atomic_write_bytes(path: Path, data: bytes) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_csv(path, header, columns) -> Path:
    """Write equal-length ``columns`` under ``header``; floats keep full precision."""
    path = Path(path)
    columns = [np.asarray(c).ravel() for c in columns]
    n = {c.size for c in columns}
    if len(n) > 1:
        raise ValueError(f"column lengths differ: {sorted(n)}")
    lines = [",".join(header)]
    for row in zip(*columns):
        lines.append(",".join(_fmt(v) for v in row))
    atomic_write_bytes(path, ("\n".join(lines) + "\n").encode())
    return path


def read_csv(path) -> dict[str, np.ndarray]:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    header, body = rows[0], rows[1:]
    out = {}
    for j, name in enumerate(header):
        col = [r[j] for r in body]
        try:
            out[name] = np.array([float(v) for v in col])
        except ValueError:
            out[name] = np.array(col)
    return out


def sha256_file(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, float) and not np.isfinite(obj):
        return None
    return obj


@dataclass
class ResultRecord:
    """What a run produced: config snapshot, payload files and headline numbers."""

    task: str
    config: dict[str, Any]
    code_version: str
    wall_time: float
    payloads: dict[str, str]
    summary: dict[str, Any]
    run_dir: Path | None = None
    checksums: dict[str, str] = field(default_factory=dict)
    created: str = ""
    schema_version: int = MANIFEST_SCHEMA

    def payload_path(self, name: str) -> Path:
        return Path(self.run_dir) / self.payloads[name]

    def to_json(self) -> dict:
        return _jsonable({
            "schema_version": self.schema_version,
            "task": self.task,
            "code_version": self.code_version,
            "created": self.created,
            "wall_time": self.wall_time,
            "config": self.config,
            "payloads": self.payloads,
            "checksums": self.checksums,
            "summary": self.summary,
        })

    def save(self) -> Path:
        path = Path(self.run_dir) / MANIFEST_NAME
        text = json.dumps(self.to_json(), indent=2, sort_keys=True)
        atomic_write_bytes(path, (text + "\n").encode())
        return path

    @classmethod
    def load(cls, run_dir) -> "ResultRecord":
        run_dir = Path(run_dir)
        data = json.loads((run_dir / MANIFEST_NAME).read_text())
        version = data.get("schema_version")
        if version != MANIFEST_SCHEMA:
            raise ValueError(f"unsupported manifest schema {version!r}")
        return cls(
            task=data["task"],
            config=data["config"],
            code_version=data["code_version"],
            wall_time=data["wall_time"],
            payloads=data["payloads"],
            summary=data["summary"],
            run_dir=run_dir,
            checksums=data.get("checksums", {}),
            created=data.get("created", ""),
            schema_version=version,
        )

    def verify(self) -> bool:
        """Every referenced payload exists and matches its recorded checksum."""
        for name, rel in self.payloads.items():
            p = Path(self.run_dir) / rel
            if not p.exists():
                return False
            if name in self.checksums and sha256_file(p) != self.checksums[name]:
                return False
        return True


def load_records(root) -> list[ResultRecord]:
    """All manifests below ``root``, sorted by run directory name."""
    root = Path(root)
    if not root.exists():
        return []
    return [ResultRecord.load(p.parent) for p in sorted(root.rglob(MANIFEST_NAME))]
