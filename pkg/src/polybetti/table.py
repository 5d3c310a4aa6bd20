"""Graded Betti table container plus ASCII and JSON round-trips.

Layout: three printed rows.  Row 0 is the lone corner 1; row 1 column p
holds the linear-strand entry at p; row 2 column p holds the quadratic
entry indexed n - 2 - p, so that strand reads right-to-left.  Zeros are
printed explicitly and a trailing asterisk marks a nonzero entry that
is only known modulo the working prime.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

from .linalg import DEFAULT_PRIME, PrimeModulus
from .polygon import Point

PROVENANCE_TAGS = frozenset({
    "computed", "crossfilled", "zero_by_shape", "zero_by_boundary_count",
    "zero_by_interior", "eagon_northcott",
})


@dataclass
class BettiTable:
    """Both strands of the graded Betti table of one polygon.

    ``b`` and ``c`` are indexed 1..n-3 (stored 0-based).  Every entry
    carries a provenance tag and a rigor flag: rigorous entries hold in
    any characteristic, the rest only modulo ``prime``.
    """

    n: int
    b: list[int]
    c: list[int]
    prime: PrimeModulus
    b_provenance: list[str]
    c_provenance: list[str]
    b_rigorous: list[bool]
    c_rigorous: list[bool]
    bigraded: dict[tuple[str, int, Point], int] = field(default_factory=dict)

    def __post_init__(self):
        width = max(self.n - 3, 0)
        for name in ("b", "c", "b_provenance", "c_provenance",
                     "b_rigorous", "c_rigorous"):
            if len(getattr(self, name)) != width:
                raise ValueError(f"{name} must have length {width}")
        for tag in self.b_provenance + self.c_provenance:
            if tag not in PROVENANCE_TAGS:
                raise ValueError(f"unknown provenance tag {tag!r}")
        if any(v < 0 for v in self.b + self.c):
            raise ValueError("betti numbers are nonnegative")

    def b_entry(self, ell: int) -> int:
        """Linear-strand entry, reading out-of-range positions as 0."""
        return self.b[ell - 1] if 1 <= ell <= self.n - 3 else 0

    def c_entry(self, ell: int) -> int:
        return self.c[ell - 1] if 1 <= ell <= self.n - 3 else 0


def _star(value: int, rigorous: bool) -> str:
    return f"{value}*" if value and not rigorous else str(value)


def render_ascii(table: BettiTable) -> str:
    n = table.n
    width = n - 2  # printed columns 0..n-3
    row0 = ["1"] + ["0"] * (width - 1)
    row1 = ["0"] + [_star(table.b[p - 1], table.b_rigorous[p - 1])
                    for p in range(1, width)]
    row2 = ["0"]
    for p in range(1, width):
        ell = n - 2 - p
        if 1 <= ell <= n - 3:
            row2.append(_star(table.c[ell - 1], table.c_rigorous[ell - 1]))
        else:
            row2.append("0")
    header = [str(p) for p in range(width)]
    cols = [header, row0, row1, row2]
    widths = [max(len(cols[r][p]) for r in range(4)) for p in range(width)]
    lines = []
    for label, row in zip(("", "0", "1", "2"), cols):
        cells = [row[p].rjust(widths[p]) for p in range(width)]
        lines.append(f"{label:>2}  " + "  ".join(cells))
    return "\n".join(lines) + "\n"


def parse_ascii(text: str) -> tuple[int, list[int], list[int],
                                    list[bool], list[bool]]:
    """Invert render_ascii: (n, b, c, b_rigorous, c_rigorous)."""
    rows = [ln.split() for ln in text.strip().splitlines() if ln.strip()]
    if len(rows) != 4:
        raise ValueError("expected a header line plus three table rows")
    header = [int(x) for x in rows[0]]
    width = len(header)
    if header != list(range(width)):
        raise ValueError("header must list column indices 0..n-3")
    n = width + 2

    def cell(tok: str) -> tuple[int, bool]:
        if tok.endswith("*"):
            return int(tok[:-1]), False
        return int(tok), True

    for label, row in zip(("0", "1", "2"), rows[1:]):
        if row[0] != label or len(row) != width + 1:
            raise ValueError(f"malformed row {label}")
    if [int(x) for x in rows[1][1:]] != [1] + [0] * (width - 1):
        raise ValueError("row 0 must be 1, 0, ..., 0")
    b_vals = [cell(tok) for tok in rows[2][2:]]
    b = [v for v, _ in b_vals]
    b_rig = [r for _, r in b_vals]
    c = [0] * (n - 3)
    c_rig = [True] * (n - 3)
    for p, tok in enumerate(rows[3][2:], start=1):
        ell = n - 2 - p
        v, r = cell(tok)
        if 1 <= ell <= n - 3:
            c[ell - 1], c_rig[ell - 1] = v, r
        elif v:
            raise ValueError("out-of-range quadratic entry must be 0")
    if int(rows[2][1]) or int(rows[3][1]):
        raise ValueError("column 0 of rows 1 and 2 must be 0")
    return n, b, c, b_rig, c_rig


def to_json_dict(table: BettiTable) -> dict:
    out = {
        "n": table.n,
        "prime": table.prime.p,
        "b": list(table.b),
        "c": list(table.c),
        "b_provenance": list(table.b_provenance),
        "c_provenance": list(table.c_provenance),
        "b_rigorous": list(table.b_rigorous),
        "c_rigorous": list(table.c_rigorous),
    }
    if table.bigraded:
        out["bigraded"] = [
            {"strand": s, "position": ell, "bidegree": [a, b], "value": v}
            for (s, ell, (a, b)), v in sorted(table.bigraded.items())]
    return out


def from_json_dict(data: dict) -> BettiTable:
    bigraded = {}
    for item in data.get("bigraded", []):
        key = (item["strand"], item["position"], tuple(item["bidegree"]))
        bigraded[key] = item["value"]
    return BettiTable(
        n=data["n"],
        b=list(data["b"]),
        c=list(data["c"]),
        prime=PrimeModulus(data.get("prime", DEFAULT_PRIME)),
        b_provenance=list(data["b_provenance"]),
        c_provenance=list(data["c_provenance"]),
        b_rigorous=list(data["b_rigorous"]),
        c_rigorous=list(data["c_rigorous"]),
        bigraded=bigraded)


def render_json(table: BettiTable) -> str:
    return json.dumps(to_json_dict(table), indent=2) + "\n"


def parse_json(text: str) -> BettiTable:
    return from_json_dict(json.loads(text))
