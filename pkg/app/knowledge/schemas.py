"""
Registry Data Schemas

Defines data structures for the YAML-indexed registry modules: the identity
catalogue, the empirical conjecture tables and the source-discrepancy ledger.
"""

from typing import Any, Dict, List, Optional
from dataclasses import dataclass, field
from datetime import datetime
from enum import Enum


class RegistryModule(str, Enum):
    """Registry module directories"""
    IDENTITIES = "identities"
    CONJECTURES = "conjectures"
    DISCREPANCIES = "discrepancies"


class IdentityKind(str, Enum):
    """Whether an identity holds coefficientwise or only modulo m"""
    EXACT = "exact"
    CONGRUENCE = "congruence"


@dataclass
class ModuleConfig:
    """
    Configuration for a registry module (from _index.yaml).

    Attributes:
        id: Module identifier
        name: Human-readable module name
        description: Module description
        eager_load: Whether to parse entries at startup
        cache_enabled: Whether to enable caching
        cache_ttl: Cache time-to-live in seconds
        entries: Raw entry dicts as read from YAML
    """
    id: str
    name: str
    description: str = ""
    eager_load: bool = False
    cache_enabled: bool = True
    cache_ttl: int = 300
    entries: List[Dict[str, Any]] = field(default_factory=list)


@dataclass
class IdentityEntry:
    """
    One catalogued identity or congruence.

    Attributes:
        id: Stable identifier used on the command line
        name: Short human-readable title
        kind: exact or congruence
        modulus: m for congruences, None for exact identities
        default_trunc: Truncation used when none is requested
        statement: The identity in plain text
        discrepancies: Ledger ids relevant to this identity
    """
    id: str
    name: str
    kind: IdentityKind
    modulus: Optional[int]
    default_trunc: int
    statement: str = ""
    discrepancies: List[str] = field(default_factory=list)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "IdentityEntry":
        return cls(
            id=data["id"],
            name=data.get("name", data["id"]),
            kind=IdentityKind(data.get("kind", "exact")),
            modulus=data.get("modulus"),
            default_trunc=int(data.get("default_trunc", 200)),
            statement=data.get("statement", ""),
            discrepancies=list(data.get("discrepancies", [])),
        )


@dataclass(frozen=True)
class ConjectureRow:
    """c_t(A n + B) ≡ 0 (mod modulus), claimed for all n >= 0."""
    t: int
    modulus: int
    A: int
    B: int

    def label(self) -> str:
        return f"c_{self.t}({self.A}n+{self.B}) mod {self.modulus}"


@dataclass
class ConjectureTable:
    """
    A named table of empirical progression congruences.

    Attributes:
        id: Table identifier
        name: Human-readable title
        description: Where the table comes from
        rows: The claimed progressions
    """
    id: str
    name: str
    description: str = ""
    rows: List[ConjectureRow] = field(default_factory=list)

    @property
    def max_A(self) -> int:
        return max((row.A for row in self.rows), default=1)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ConjectureTable":
        rows = []
        for group in data.get("groups", []):
            for A, B in group["progressions"]:
                rows.append(ConjectureRow(int(group["t"]), int(group["modulus"]), int(A), int(B)))
        return cls(
            id=data["id"],
            name=data.get("name", data["id"]),
            description=data.get("description", ""),
            rows=rows,
        )


@dataclass
class Discrepancy:
    """
    A place where the printed source disagrees with itself.

    Attributes:
        id: Stable identifier
        title: One-line summary
        printed: What the source prints
        resolution: What the implementation does instead
        affects: Identity ids whose reports carry this note
    """
    id: str
    title: str
    printed: str = ""
    resolution: str = ""
    affects: List[str] = field(default_factory=list)

    def to_warning(self) -> Dict[str, Any]:
        return {
            "id": self.id,
            "title": self.title,
            "printed": self.printed,
            "resolution": self.resolution,
            "affects": self.affects,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "Discrepancy":
        return cls(
            id=data["id"],
            title=data.get("title", data["id"]),
            printed=data.get("printed", ""),
            resolution=data.get("resolution", ""),
            affects=list(data.get("affects", [])),
        )


@dataclass
class CachedModule:
    """Parsed entries of one module plus load bookkeeping."""
    module_id: str
    entries: List[Any]
    last_loaded: datetime = field(default_factory=datetime.now)
    file_hash: str = ""
    ttl_seconds: Optional[int] = None
