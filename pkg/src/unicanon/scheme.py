"""Zones and schemes of canonical marked block matrices.

A canonical matrix is partitioned into *zones* (equivalence or similarity),
each installed at some depth of the reduction.  The *scheme* forgets the
numerical values and keeps a symbol grid: stars on the diagonals of
similarity zones, circles at the nonzero cells of equivalence zones with
links joining equal values, dots elsewhere.  A scheme can be validated
against a value assignment and re-filled in general position.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .numcore import Tolerance, lex_cmp
from .mbm import MarkedBlockMatrix, ReductionTrace, Zone

__all__ = [
    "Scheme",
    "IntegerModeInfeasible",
    "zones",
    "scheme_of",
    "validate_filling",
    "fill_general_position",
    "count_params",
    "render_ascii",
]


class IntegerModeInfeasible(ValueError):
    pass


def zones(trace: ReductionTrace) -> list[Zone]:
    """Zone partition recorded in a reduction trace, sorted by depth then
    block location."""
    return sorted(trace.zones, key=lambda z: (z.depth, z.block))


@dataclass(frozen=True)
class Scheme:
    """Symbol grid ('.', 'o', '*') with links, stairs and the zone layout.

    The original strip grid is carried along so that a filling can be
    reassembled into a marked block matrix."""

    rows: int
    cols: int
    symbols: tuple  # tuple of row tuples over {'.', 'o', '*'}
    links: frozenset  # frozenset of frozenset({cell, cell}), 0-based
    zones: tuple  # Zone records, sorted by (depth, block)
    row_strips: tuple
    col_strips: tuple
    marked: frozenset

    @property
    def depths(self) -> tuple:
        return tuple(z.depth for z in self.zones)

    def zone_of(self, cell):
        for k, z in enumerate(self.zones):
            if cell in z.cells:
                return k
        return None

    def circle_cells(self):
        return [
            (r, c)
            for r in range(self.rows)
            for c in range(self.cols)
            if self.symbols[r][c] == "o"
        ]

    def star_cells(self):
        return [
            (r, c)
            for r in range(self.rows)
            for c in range(self.cols)
            if self.symbols[r][c] == "*"
        ]

    def link_chains(self):
        """Connected components of the link relation (as frozensets)."""
        parent = {}

        def find(x):
            parent.setdefault(x, x)
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for pair in self.links:
            a, b = sorted(pair)
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb
        comps: dict = {}
        for x in parent:
            comps.setdefault(find(x), set()).add(x)
        return sorted(frozenset(c) for c in comps.values())

    def to_json(self) -> dict:
        return {
            "symbols": [list(row) for row in self.symbols],
            "links": sorted(
                [sorted([[a[0] + 1, a[1] + 1], [b[0] + 1, b[1] + 1]])
                 for a, b in (sorted(p) for p in self.links)]
            ),
            "depths": {str(k): z.depth for k, z in enumerate(self.zones)},
            "zones": [
                {
                    "id": k,
                    "kind": z.kind,
                    "depth": z.depth,
                    "block": list(z.block),
                    "cells": sorted([r + 1, c + 1] for r, c in z.cells),
                    "stairs": [
                        [[int(r) + 1, int(c) + 1] for r, c in st]
                        for st in z.stairs
                    ],
                }
                for k, z in enumerate(self.zones)
            ],
            "row_strips": list(self.row_strips),
            "col_strips": list(self.col_strips),
            "marked": sorted([i + 1, j + 1] for i, j in self.marked),
        }

    @classmethod
    def from_json(cls, data: dict) -> "Scheme":
        symbols = tuple(tuple(row) for row in data["symbols"])
        rows = len(symbols)
        cols = len(symbols[0]) if rows else 0
        links = frozenset(
            frozenset({(a[0] - 1, a[1] - 1), (b[0] - 1, b[1] - 1)})
            for a, b in data.get("links", [])
        )
        zs = tuple(
            Zone(
                depth=int(zd["depth"]),
                kind=zd["kind"],
                block=tuple(zd["block"]),
                cells=frozenset((r - 1, c - 1) for r, c in zd["cells"]),
                stairs=tuple(
                    tuple((r - 1, c - 1) for r, c in st) for st in zd["stairs"]
                ),
            )
            for zd in data.get("zones", [])
        )
        return cls(
            rows=rows,
            cols=cols,
            symbols=symbols,
            links=links,
            zones=zs,
            row_strips=tuple(data["row_strips"]),
            col_strips=tuple(data["col_strips"]),
            marked=frozenset((i - 1, j - 1) for i, j in data.get("marked", [])),
        )


def scheme_of(
    canonical: MarkedBlockMatrix, zone_list, tol: Tolerance = Tolerance()
) -> Scheme:
    """Extract the scheme of a canonical matrix with its zone partition.

    Stars sit on the stair diagonals of similarity zones; circles at the
    nonzero cells of equivalence zones, with links between equal circles of
    one zone (equality at ``2 * tol.abs``)."""
    A = canonical.entries
    m, n = A.shape
    grid = [["."] * n for _ in range(m)]
    links: set = set()
    zs = sorted(zone_list, key=lambda z: (z.depth, z.block))
    for z in zs:
        if z.kind == "similarity":
            for stair in z.stairs:
                for (r, c) in stair:
                    grid[r][c] = "*"
        else:
            circles = sorted(
                (r, c) for (r, c) in z.cells if abs(A[r, c]) > tol.abs
            )
            for (r, c) in circles:
                grid[r][c] = "o"
            # join equal values within the zone: consecutive members of an
            # equal-value run in diagonal order
            for (a, b) in zip(circles, circles[1:]):
                if abs(A[a] - A[b]) <= 2 * tol.abs:
                    links.add(frozenset({a, b}))
    return Scheme(
        rows=m,
        cols=n,
        symbols=tuple(tuple(row) for row in grid),
        links=frozenset(links),
        zones=tuple(zs),
        row_strips=canonical.row_strips,
        col_strips=canonical.col_strips,
        marked=canonical.marked,
    )


def _link_classes(S: Scheme, cells):
    """Partition ``cells`` into equality classes induced by the links,
    returned in diagonal order (class of the earliest cell first)."""
    parent = {c: c for c in cells}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    cellset = set(cells)
    for pair in S.links:
        a, b = sorted(pair)
        if a in cellset and b in cellset:
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb
    groups: dict = {}
    for c in cells:
        groups.setdefault(find(c), []).append(c)
    out = [sorted(g) for g in groups.values()]
    out.sort(key=lambda g: g[0])
    return out


def validate_filling(S: Scheme, values, tol: Tolerance = Tolerance()):
    """Check a value assignment against the scheme's constraints.

    ``values`` maps 0-based cells to complex numbers; dots default to 0.
    Returns a list of violation messages (empty list means the filling is
    admissible as a canonical matrix)."""
    v = {tuple(k): complex(x) for k, x in dict(values).items()}

    def val(cell):
        return v.get(cell, 0.0 + 0.0j)

    bad: list[str] = []
    for r in range(S.rows):
        for c in range(S.cols):
            sym = S.symbols[r][c]
            x = val((r, c))
            if sym == "." and abs(x) > tol.abs:
                bad.append(f"dot at ({r + 1},{c + 1}) must be zero, got {x}")
            if sym == "o":
                if abs(x.imag) > tol.abs or x.real <= tol.abs:
                    bad.append(
                        f"circle at ({r + 1},{c + 1}) must be positive real, got {x}"
                    )
    for k, z in enumerate(S.zones):
        if z.kind == "equivalence":
            circles = sorted(c for c in z.cells if S.symbols[c[0]][c[1]] == "o")
            for pair in S.links:
                a, b = sorted(pair)
                if a in z.cells and b in z.cells:
                    if abs(val(a) - val(b)) > 2 * tol.abs:
                        bad.append(
                            f"linked circles ({a[0] + 1},{a[1] + 1}) and "
                            f"({b[0] + 1},{b[1] + 1}) differ: {val(a)} vs {val(b)}"
                        )
            linked = {
                frozenset(p) for p in S.links if all(q in z.cells for q in p)
            }
            for a, b in zip(circles, circles[1:]):
                if (b[0] - a[0], b[1] - a[1]) != (1, 1):
                    continue
                if frozenset({a, b}) in linked:
                    continue
                if not val(a).real > val(b).real + tol.abs:
                    bad.append(
                        f"unlinked consecutive circles ({a[0] + 1},{a[1] + 1}) > "
                        f"({b[0] + 1},{b[1] + 1}) required: {val(a)} vs {val(b)}"
                    )
        else:
            for stair in z.stairs:
                vals = [val(c) for c in stair]
                for x in vals[1:]:
                    if abs(x - vals[0]) > 2 * tol.abs:
                        bad.append(
                            f"stars of one stair in zone {k} must be equal: "
                            f"{vals[0]} vs {x}"
                        )
            for a in range(len(z.stairs) - 1):
                s1, s2 = z.stairs[a], z.stairs[a + 1]
                x, y = val(s1[0]), val(s2[0])
                cmp = lex_cmp(x, y, tol)
                if cmp < 0:
                    bad.append(
                        f"stairs {a} and {a + 1} of zone {k} must not increase: "
                        f"{x} before {y}"
                    )
                    continue
                if cmp == 0:
                    # equal stair values are only allowed when the block
                    # between them (rows of the first stair, columns of the
                    # second) has linearly independent columns
                    rows_ = [r for r, _ in s1]
                    cols_ = [c for _, c in s2]
                    B = np.array(
                        [[val((r, c)) for c in cols_] for r in rows_],
                        dtype=complex,
                    )
                    s = np.linalg.svd(B, compute_uv=False) if B.size else []
                    rank = int(np.sum(np.asarray(s) > tol.abs))
                    if rank < len(cols_):
                        bad.append(
                            f"stairs {a} and {a + 1} of zone {k}: equal values "
                            "require independent columns in the block between"
                        )
    return bad


def fill_general_position(
    S: Scheme, mode: str = "real-random", seed=None, tol: Tolerance = Tolerance()
) -> MarkedBlockMatrix:
    """Fill a scheme with all-distinct values per zone.

    ``real-random`` draws circle values from (0, 1] and star values as
    distinct reals; ``integer`` uses k, k-1, ..., 1 per zone (so entries stay
    in {0, ..., max strip size}).  The result is a canonical fixpoint."""
    if mode not in ("real-random", "integer"):
        raise ValueError(f"unknown mode {mode!r}")
    rng = np.random.default_rng(seed)
    budget = max(list(S.row_strips) + list(S.col_strips) + [0])
    entries = np.zeros((S.rows, S.cols), dtype=complex)

    def descending(k):
        if mode == "integer":
            return [float(k - t) for t in range(k)]
        vals = np.sort(rng.uniform(0.0, 1.0, size=k))[::-1]
        while len(np.unique(vals)) < k:  # pragma: no cover
            vals = np.sort(rng.uniform(0.0, 1.0, size=k))[::-1]
        return [float(x) for x in vals]

    for z in sorted(S.zones, key=lambda z: -z.depth):
        if z.kind == "equivalence":
            circles = sorted(c for c in z.cells if S.symbols[c[0]][c[1]] == "o")
            classes = _link_classes(S, circles)
            k = len(classes)
            if mode == "integer" and k > budget:
                raise IntegerModeInfeasible(
                    f"zone needs {k} distinct values, budget is {budget}"
                )
            for value, group in zip(descending(k), classes):
                for cell in group:
                    entries[cell] = value
        else:
            k = len(z.stairs)
            if mode == "integer" and k > budget:
                raise IntegerModeInfeasible(
                    f"zone needs {k} distinct values, budget is {budget}"
                )
            for value, stair in zip(descending(k), z.stairs):
                for cell in stair:
                    entries[cell] = value
    M = MarkedBlockMatrix(S.row_strips, S.col_strips, entries, S.marked)
    return M


def count_params(S: Scheme):
    """Number of free real parameters (circles) and complex parameters
    (stars) of the scheme."""
    n_circ = sum(row.count("o") for row in S.symbols)
    n_star = sum(row.count("*") for row in S.symbols)
    return n_circ, n_star


def render_ascii(S: Scheme) -> str:
    lines = ["".join(row) for row in S.symbols]
    for pair in sorted(sorted(p) for p in S.links):
        a, b = pair
        lines.append(
            f"link ({a[0] + 1},{a[1] + 1})-({b[0] + 1},{b[1] + 1})"
        )
    return "\n".join(lines)
