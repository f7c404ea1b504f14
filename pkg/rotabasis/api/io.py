"""
Shared plumbing for the command routers: reading JSON documents, parsing
comma-separated flags, and the Outcome every handler returns.
"""

import argparse
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, List, Tuple, Type, TypeVar

from pydantic import BaseModel

from rotabasis.exceptions import InputValidationError

DocumentT = TypeVar("DocumentT", bound=BaseModel)


@dataclass
class Outcome:
    """
    What a handler produced. `payload` is a scalar (printed bare) or a
    JSON-ready structure; `ok=False` means predicate false or not found.
    """

    payload: Any
    ok: bool = True
    diagnostics: List[str] = field(default_factory=list)


def load_document(path: str, model: Type[DocumentT]) -> DocumentT:
    try:
        raw = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise InputValidationError(f"Cannot read {path}: {e.strerror or e}")
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as e:
        raise InputValidationError(f"{path} is not valid JSON: {e.msg} (line {e.lineno})")
    return model.model_validate(data)


def index_list(text: str) -> Tuple[int, ...]:
    """argparse type for comma-separated integers such as `2,3,1`."""
    try:
        values = tuple(int(part) for part in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    return values


def render(payload: Any) -> str:
    """Scalars print bare; everything else as sorted, indented JSON."""
    if isinstance(payload, BaseModel):
        payload = payload.model_dump()
    if isinstance(payload, bool):
        return "true" if payload else "false"
    if isinstance(payload, (int, str)):
        return str(payload)
    return json.dumps(payload, sort_keys=True, indent=2)
