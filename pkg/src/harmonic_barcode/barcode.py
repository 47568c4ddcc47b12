"""Bars over integer filtration indices and their JSON form."""
from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Tuple

from .complex import SparseVector
from .filtration import TimestampMap, format_rational, parse_rational

PAIRED = "paired"
END = "end-of-filtration"


@dataclass
class Bar:
    """Closed integer interval ``[birth, death]`` in one degree.

    ``birth`` is the index of the first complex containing the
    representative; ``death`` the last complex in which it stays harmonic
    (``m`` when it survives the whole filtration).
    """
    degree: int
    birth: int
    death: int
    representative: SparseVector = field(default_factory=dict)
    death_kind: str = PAIRED

    @property
    def interval(self) -> Tuple[int, int]:
        return (self.birth, self.death)

    def contains(self, i: int) -> bool:
        return self.birth <= i <= self.death


@dataclass
class Barcode:
    m: int
    bars: List[Bar] = field(default_factory=list)

    def __iter__(self):
        return iter(self.bars)

    def __len__(self) -> int:
        return len(self.bars)

    def degree(self, p: int) -> List[Bar]:
        return [b for b in self.bars if b.degree == p]

    @property
    def degrees(self) -> List[int]:
        return sorted({b.degree for b in self.bars})

    def intervals(self, p: int) -> List[Tuple[int, int]]:
        return sorted(b.interval for b in self.bars if b.degree == p)

    def births(self, p: int) -> Counter:
        return Counter(b.birth for b in self.bars if b.degree == p)

    def deaths(self, p: int) -> Counter:
        return Counter(b.death for b in self.bars if b.degree == p and b.death_kind == PAIRED)

    def sorted(self) -> "Barcode":
        return Barcode(self.m, sorted(self.bars, key=lambda b: (b.degree, b.birth, b.death)))


def bar_to_dict(bar: Bar, tau: Optional[TimestampMap] = None) -> dict:
    out = {
        "degree": bar.degree,
        "birth_index": bar.birth,
        "death_index": bar.death,
    }
    if tau is not None:
        out["birth_time"] = format_rational(tau(bar.birth))
        out["death_time"] = (format_rational(tau(bar.death + 1))
                             if bar.death_kind == PAIRED else None)
    else:
        out["birth_time"] = None
        out["death_time"] = None
    out["death_kind"] = bar.death_kind
    out["representative"] = {str(k): format_rational(v)
                             for k, v in sorted(bar.representative.items())}
    return out


def bar_from_dict(d: dict) -> Bar:
    kind = d.get("death_kind")
    if kind is None:
        kind = PAIRED if d.get("death_time") is not None else END
    return Bar(
        degree=int(d["degree"]),
        birth=int(d["birth_index"]),
        death=int(d["death_index"]),
        representative={int(k): parse_rational(v) for k, v in d.get("representative", {}).items()},
        death_kind=kind,
    )


def barcode_to_json(bc: Barcode, tau: Optional[TimestampMap] = None,
                    degrees: Optional[Iterable[int]] = None) -> str:
    keep = None if degrees is None else set(degrees)
    bars = [bar_to_dict(b, tau) for b in bc.sorted().bars
            if keep is None or b.degree in keep]
    return json.dumps({"m": bc.m, "bars": bars}, indent=2, sort_keys=True) + "\n"


def barcode_from_json(text: str) -> Barcode:
    doc = json.loads(text)
    return Barcode(int(doc["m"]), [bar_from_dict(d) for d in doc["bars"]])
