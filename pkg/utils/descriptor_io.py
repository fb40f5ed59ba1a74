"""
utils/descriptor_io.py
Reads and writes descriptor files (UTF-8 JSON) in canonical form.

File format:
    {"dimension": 2, "oriented": false, "counts": [1, 0, 1],
     "manifold": {"class": [["S2", 1]], "betti": [1, 0, 1]}}
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import List, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from utils.exceptions import MalformedDescriptorError
from utils.morse_algebra import ClassToken, IndexCountVector, ManifoldClass, MorseDescriptor


class ManifoldSection(BaseModel):
    """Pydantic schema for the "manifold" object of a descriptor file."""

    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    class_: List[Tuple[str, int]] = Field(default_factory=list, alias="class")
    betti: Optional[List[int]] = None


class DescriptorFile(BaseModel):
    """Pydantic schema for a whole descriptor file."""

    model_config = ConfigDict(extra="forbid")

    dimension: int = Field(ge=0)
    oriented: bool
    counts: List[int]
    manifold: ManifoldSection = Field(default_factory=ManifoldSection)

    def to_descriptor(self) -> MorseDescriptor:
        token = ClassToken.from_terms(self.manifold.class_, mod2=not self.oriented)
        betti = None if self.manifold.betti is None else tuple(self.manifold.betti)
        manifold = ManifoldClass(self.dimension, self.oriented, token, betti)
        return MorseDescriptor(manifold, IndexCountVector(self.dimension, tuple(self.counts)))


def parse_int_list(text: str) -> list[int]:
    """Parse '1, 1, 2' (dashboard input) into [1, 1, 2]."""
    items = [t for t in text.replace(" ", "").split(",") if t]
    try:
        return [int(t) for t in items]
    except ValueError as exc:
        raise MalformedDescriptorError(f"expected comma-separated integers, got {text!r}") from exc


def parse_terms(text: str) -> list[tuple[str, int]]:
    """Parse 'S2, 2 P' into [("S2", 1), ("P", 2)]."""
    terms = []
    for chunk in (c.strip() for c in text.split(",")):
        if not chunk:
            continue
        coeff, _, label = chunk.rpartition(" ")
        try:
            terms.append((label, int(coeff) if coeff else 1))
        except ValueError as exc:
            raise MalformedDescriptorError(f"bad class term {chunk!r}; use 'LABEL' or 'COEFF LABEL'") from exc
    return terms


def descriptor_to_dict(d: MorseDescriptor) -> dict:
    """Canonical payload: labels sorted, counts of length dimension + 1."""
    token = ClassToken.from_terms(d.manifold.token.terms, mod2=not d.oriented)
    manifold: dict = {"class": token.to_list()}
    if d.manifold.betti is not None:
        manifold["betti"] = list(d.manifold.betti)
    return {
        "dimension": d.m,
        "oriented": d.oriented,
        "counts": list(d.counts.counts),
        "manifold": manifold,
    }


def parse_descriptor(text: str, source: str = "<string>") -> MorseDescriptor:
    """
    Parse descriptor JSON.

    Raises:
        MalformedDescriptorError: invalid JSON or schema violation.
    """
    try:
        return DescriptorFile.model_validate_json(text).to_descriptor()
    except ValidationError as exc:
        problems = "; ".join(
            f"{'.'.join(str(p) for p in err['loc']) or '<root>'}: {err['msg']}" for err in exc.errors()
        )
        raise MalformedDescriptorError(f"{source}: {problems}") from exc


def load_descriptor(path: Union[str, Path]) -> MorseDescriptor:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise MalformedDescriptorError(f"{path}: cannot read descriptor file ({exc.strerror})") from exc
    except UnicodeDecodeError as exc:
        raise MalformedDescriptorError(f"{path}: not valid UTF-8 text (byte {exc.start}: {exc.reason})") from exc
    return parse_descriptor(text, str(path))


def dumps_descriptor(d: MorseDescriptor) -> str:
    return json.dumps(descriptor_to_dict(d), indent=2)


def write_descriptor(d: MorseDescriptor, path: Union[str, Path]) -> None:
    Path(path).write_text(dumps_descriptor(d) + "\n", encoding="utf-8")
