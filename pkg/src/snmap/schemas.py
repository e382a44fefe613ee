"""JSON Schemas for the HTTP API, shipped as package data.

The files under ``snmap/schemas/`` are generated from the pydantic
models and committed; ``python -m snmap.schemas`` rewrites them after a
model change, and a test keeps them in sync.
"""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path


def _models():
    from .server import REQUEST_MODELS, RESPONSE_MODELS

    return (*REQUEST_MODELS, *RESPONSE_MODELS)


def generate() -> dict[str, dict]:
    """Schema per model name, straight from pydantic."""
    return {m.__name__: m.model_json_schema() for m in _models()}


def schema_dir() -> Path:
    return Path(str(resources.files("snmap") / "schemas"))


def schema_names() -> list[str]:
    return sorted(p.stem for p in schema_dir().glob("*.json"))


def load_schema(name: str) -> dict:
    path = schema_dir() / f"{name}.json"
    return json.loads(path.read_text(encoding="utf-8"))


def write_schemas(directory: Path | None = None) -> list[Path]:
    out = directory or schema_dir()
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for name, schema in generate().items():
        p = out / f"{name}.json"
        p.write_text(json.dumps(schema, indent=2, sort_keys=True) + "\n", "utf-8")
        written.append(p)
    return written


if __name__ == "__main__":
    for p in write_schemas():
        print(p)
