"""Entity class registries and IOB tag parsing for the LER corpus.

The corpus annotates 19 fine-grained legal entity classes which group into
7 coarse-grained ones. Fine and coarse codes overlap (PER, ORG, RS, LIT
exist at both granularities), so every parse happens at a declared
granularity -- nothing is ever guessed from the code alone.
"""

from __future__ import annotations

import re
from functools import lru_cache
from typing import Literal, NamedTuple

Granularity = Literal["fine", "coarse"]

# code -> human-readable name
FINE_CLASSES: dict[str, str] = {
    "PER": "Person",
    "RR": "Judge",
    "AN": "Lawyer",
    "LD": "Country",
    "ST": "City",
    "STR": "Street",
    "LDS": "Landscape",
    "ORG": "Organization",
    "UN": "Company",
    "INN": "Institution",
    "GRT": "Court",
    "MRK": "Brand",
    "GS": "Law",
    "VO": "Ordinance",
    "EUN": "European legal norm",
    "VS": "Regulation",
    "VT": "Contract",
    "RS": "Court decision",
    "LIT": "Legal literature",
}

COARSE_CLASSES: dict[str, str] = {
    "PER": "Person",
    "LOC": "Location",
    "ORG": "Organization",
    "NRM": "Legal norm",
    "REG": "Case-by-case regulation",
    "RS": "Court decision",
    "LIT": "Legal literature",
}

FINE_TO_COARSE: dict[str, str] = {
    "PER": "PER",
    "RR": "PER",
    "AN": "PER",
    "LD": "LOC",
    "ST": "LOC",
    "STR": "LOC",
    "LDS": "LOC",
    "ORG": "ORG",
    "UN": "ORG",
    "INN": "ORG",
    "GRT": "ORG",
    "MRK": "ORG",
    "GS": "NRM",
    "VO": "NRM",
    "EUN": "NRM",
    "VS": "REG",
    "VT": "REG",
    "RS": "RS",
    "LIT": "LIT",
}

# Coarse classes specific to the legal domain (as opposed to classic NER).
LEGAL_COARSE: tuple[str, ...] = ("NRM", "REG", "RS", "LIT")

# Coarse codes map to themselves so that coarse-mapping is idempotent.
_TO_COARSE: dict[str, str] = {**FINE_TO_COARSE, **{c: c for c in COARSE_CLASSES}}

_TAG_RE = re.compile(r"([BI])-([A-Z]{2,3})\Z")


class TagError(ValueError):
    """A tag string could not be interpreted."""

    def __init__(self, message: str, text: str):
        super().__init__(message)
        self.text = text


class MalformedTagError(TagError):
    """Tag does not match the grammar ``O | [BI]-[A-Z]{2,3}``."""


class UnknownClassError(TagError):
    """Tag is well-formed but its class code is not in the declared schema."""


class LabelTag(NamedTuple):
    """One IOB tag: a B/I/O prefix plus the entity class for B and I."""

    prefix: str
    label: str | None = None

    @property
    def is_outside(self) -> bool:
        return self.prefix == "O"


OUTSIDE = LabelTag("O", None)


def classes_for(granularity: Granularity) -> dict[str, str]:
    if granularity == "fine":
        return FINE_CLASSES
    if granularity == "coarse":
        return COARSE_CLASSES
    raise ValueError(f"unknown granularity: {granularity!r}")


def tag_vocabulary(granularity: Granularity) -> list[str]:
    """All valid textual tags at a granularity, ``O`` first, then B-/I- pairs."""
    tags = ["O"]
    for code in classes_for(granularity):
        tags.append(f"B-{code}")
        tags.append(f"I-{code}")
    return tags


@lru_cache(maxsize=4096)
def _parse_tag_cached(text: str, granularity: Granularity, strict: bool) -> LabelTag:
    if text == "O":
        return OUTSIDE
    m = _TAG_RE.fullmatch(text)
    if m is None:
        raise MalformedTagError(f"malformed tag {text!r}", text)
    prefix, code = m.group(1), m.group(2)
    if strict and code not in classes_for(granularity):
        raise UnknownClassError(
            f"unknown {granularity} class {code!r} in tag {text!r}", text
        )
    return LabelTag(prefix, code)


def parse_tag(
    text: str, granularity: Granularity = "fine", strict: bool = True
) -> LabelTag:
    """Parse a textual IOB tag.

    Strict mode rejects class codes outside the declared schema; lenient
    mode keeps unknown codes opaquely (the shape ``[BI]-[A-Z]{2,3}`` is
    always enforced). Results are interned, so tags compare cheaply.
    """
    return _parse_tag_cached(text, granularity, strict)


def format_tag(tag: LabelTag) -> str:
    if tag.prefix == "O":
        return "O"
    return f"{tag.prefix}-{tag.label}"


def to_coarse(tag: LabelTag) -> LabelTag:
    """Map a fine-granularity tag to its coarse class, preserving the prefix.

    Already-coarse codes pass through unchanged, so applying the mapping
    twice equals applying it once.
    """
    if tag.prefix == "O":
        return OUTSIDE
    if tag.label not in _TO_COARSE:
        raise UnknownClassError(f"no coarse class for {tag.label!r}", format_tag(tag))
    return LabelTag(tag.prefix, _TO_COARSE[tag.label])
