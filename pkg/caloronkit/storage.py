"""
Storage module for CaloronKit.
JSON and CSV persistence with atomic writes, and typed loaders that turn
validated files back into domain models.
"""

import csv
import hashlib
import io
import os
import tempfile
from pathlib import Path
from typing import Any, Iterable, Type, TypeVar, Union

import structlog
from pydantic import BaseModel, ValidationError

from .errors import SchemaError
from .models.connection import ConnectionPair
from .models.forms import MatrixForm
from .models.group import GroupMap
from .schemas.data import FormFile, GroupMapFile, PairFile

logger = structlog.get_logger(__name__)

PathLike = Union[str, Path]
SchemaT = TypeVar("SchemaT", bound=BaseModel)


def atomic_write_text(path: PathLike, text: str) -> Path:
    """Write to a temporary file in the target directory, then rename over the target."""
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    fd, temp = tempfile.mkstemp(dir=target.parent, prefix=f".{target.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
        os.replace(temp, target)
    except BaseException:
        if os.path.exists(temp):
            os.unlink(temp)
        raise
    logger.info("storage.written", path=str(target), bytes=len(text.encode("utf-8")))
    return target


def write_model(path: PathLike, model: BaseModel) -> Path:
    """Serialize a schema instance as indented JSON."""
    return atomic_write_text(path, model.model_dump_json(indent=2) + "\n")


def write_csv(path: PathLike, rows: Iterable[dict[str, Any]], fieldnames: list[str]) -> Path:
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=fieldnames, extrasaction="ignore")
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
    return atomic_write_text(path, buffer.getvalue())


def read_model(path: PathLike, schema: Type[SchemaT]) -> SchemaT:
    """
    Load and validate a JSON file.

    Raises:
        SchemaError: File missing, not JSON, or not matching the schema
    """
    source = Path(path)
    try:
        text = source.read_text(encoding="utf-8")
    except OSError as exc:
        raise SchemaError(f"Cannot read {source}", reason=str(exc)) from exc
    try:
        return schema.model_validate_json(text)
    except ValidationError as exc:
        raise SchemaError(
            f"{source} does not match {schema.__name__}",
            errors=[{"loc": list(e["loc"]), "msg": e["msg"]} for e in exc.errors()],
        ) from exc


def load_form(path: PathLike) -> MatrixForm:
    return read_model(path, FormFile).to_form()


def load_map(path: PathLike) -> GroupMap:
    return read_model(path, GroupMapFile).to_map()


def load_pair(path: PathLike) -> ConnectionPair:
    return read_model(path, PairFile).to_pair()


def sha256_file(path: PathLike) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as handle:
        for chunk in iter(lambda: handle.read(1 << 16), b""):
            digest.update(chunk)
    return digest.hexdigest()
