from dataclasses import dataclass, field
from typing import Any, Dict, Iterator, List, Tuple

from app.models.geometry import Configuration, OrderTypeSignature


def witness_preference(config: Configuration) -> Tuple:
    """Smaller is preferred: max |coordinate|, then the coordinates themselves"""
    coords = config.coords()
    return (max((max(abs(x), abs(y)) for x, y in coords), default=0), tuple(coords))


@dataclass
class OrderTypeCatalog:
    """Realized order types for one point count, keyed by canonical signature"""

    n: int
    entries: Dict[OrderTypeSignature, Configuration] = field(default_factory=dict)
    metadata: Dict[str, Any] = field(default_factory=dict)

    def __len__(self):
        return len(self.entries)

    def __contains__(self, key: OrderTypeSignature) -> bool:
        return key in self.entries

    def offer(self, key: OrderTypeSignature, witness: Configuration) -> bool:
        """Record a witness; returns True if the key is new"""
        current = self.entries.get(key)
        if current is None:
            self.entries[key] = witness
            return True
        if witness_preference(witness) < witness_preference(current):
            self.entries[key] = witness
        return False

    def sorted_entries(self) -> List[Tuple[OrderTypeSignature, Configuration]]:
        """Deterministic iteration order: by signature vector"""
        return sorted(self.entries.items(), key=lambda item: item[0].signs)

    def __iter__(self) -> Iterator[Tuple[OrderTypeSignature, Configuration]]:
        return iter(self.sorted_entries())
