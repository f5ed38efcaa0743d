"""Marked block matrices and their canonical forms.

A marked block matrix is a complex block matrix with strip partitions of the
rows and columns and a set of marked square blocks.  Admissible
transformations are blockwise A -> R^-1 A S with block-diagonal unitaries
R, S whose blocks agree on strips tied by marks (and by marks added during
the reduction).  The reduction repeatedly locates the first block, in the
order "bottom strip row first, left to right within a strip row", that still
changes under admissible transformations, reduces it by unitary equivalence
or unitary similarity, refines the strips into substrips, and propagates
divisions classwide through all tied strips until a fixpoint is reached.
The fixpoint is the canonical matrix: every block between tied substrips is
a scalar multiple of the identity and every other block is zero.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .numcore import Tolerance, cluster_values, random_unitary, simil_step

__all__ = [
    "MarkedBlockMatrix",
    "TieTable",
    "Transcript",
    "ReductionTrace",
    "ReductionState",
    "Zone",
    "MarkedBlockNotSquareError",
    "DimensionMismatchError",
    "ShapeMismatchError",
    "MarkMismatchError",
    "TieViolationError",
    "NoConvergenceError",
    "ZeroSizeError",
    "validate",
    "tie_closure",
    "apply_admissible",
    "random_transcript",
    "canonicalize",
    "block_direct_sum",
    "decompose",
    "is_indecomposable",
]


class MarkedBlockNotSquareError(ValueError):
    pass


class DimensionMismatchError(ValueError):
    pass


class ShapeMismatchError(ValueError):
    pass


class MarkMismatchError(ValueError):
    pass


class TieViolationError(ValueError):
    pass


class NoConvergenceError(RuntimeError):
    pass


class ZeroSizeError(ValueError):
    pass


def _offsets(sizes):
    return np.concatenate(([0], np.cumsum(sizes))).astype(int)


@dataclass(frozen=True)
class MarkedBlockMatrix:
    """Block matrix with strip partitions and marked (square) blocks.

    ``marked`` holds 0-based ``(i, j)`` block indices; the JSON form is
    1-based."""

    row_strips: tuple[int, ...]
    col_strips: tuple[int, ...]
    entries: np.ndarray
    marked: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "row_strips", tuple(int(s) for s in self.row_strips))
        object.__setattr__(self, "col_strips", tuple(int(s) for s in self.col_strips))
        e = np.asarray(self.entries, dtype=complex)
        object.__setattr__(self, "entries", e)
        object.__setattr__(
            self, "marked", frozenset((int(i), int(j)) for i, j in self.marked)
        )

    @property
    def shape(self):
        return self.entries.shape

    def block(self, i: int, j: int) -> np.ndarray:
        ro = _offsets(self.row_strips)
        co = _offsets(self.col_strips)
        return self.entries[ro[i] : ro[i + 1], co[j] : co[j + 1]]

    def to_json(self) -> dict:
        return {
            "row_strips": list(self.row_strips),
            "col_strips": list(self.col_strips),
            "marked": sorted([i + 1, j + 1] for i, j in self.marked),
            "entries": [
                [[float(z.real), float(z.imag)] for z in row] for row in self.entries
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "MarkedBlockMatrix":
        rows = tuple(data["row_strips"])
        cols = tuple(data["col_strips"])
        entries = np.array(
            [[complex(p[0], p[1]) for p in row] for row in data["entries"]],
            dtype=complex,
        ).reshape(sum(rows), sum(cols))
        marked = frozenset((i - 1, j - 1) for i, j in data.get("marked", []))
        return cls(rows, cols, entries, marked)


def validate(M: MarkedBlockMatrix) -> None:
    m, n = M.entries.shape
    if m != sum(M.row_strips) or n != sum(M.col_strips):
        raise DimensionMismatchError(
            f"entries shape {M.entries.shape} does not match strips "
            f"{M.row_strips} x {M.col_strips}"
        )
    for i, j in M.marked:
        if not (0 <= i < len(M.row_strips) and 0 <= j < len(M.col_strips)):
            raise DimensionMismatchError(f"marked block ({i},{j}) out of range")
        if M.row_strips[i] != M.col_strips[j]:
            raise MarkedBlockNotSquareError(
                f"marked block ({i},{j}) has shape "
                f"{M.row_strips[i]}x{M.col_strips[j]}"
            )


@dataclass(frozen=True)
class TieTable:
    """Partition of the row and column strip slots into classes.

    Slots are ``('r', i)`` and ``('c', j)``; two slots share a class iff a
    chain of marks ties them."""

    classes: tuple[frozenset, ...]

    def cls_of(self, slot):
        for c in self.classes:
            if slot in c:
                return c
        raise KeyError(slot)

    def tied(self, i: int, j: int) -> bool:
        return self.cls_of(("r", i)) is self.cls_of(("c", j))


def tie_closure(M: MarkedBlockMatrix) -> TieTable:
    validate(M)
    slots = [("r", i) for i in range(len(M.row_strips))] + [
        ("c", j) for j in range(len(M.col_strips))
    ]
    parent = {s: s for s in slots}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, j in M.marked:
        a, b = find(("r", i)), find(("c", j))
        if a != b:
            parent[a] = b
    groups: dict = {}
    for s in slots:
        groups.setdefault(find(s), []).append(s)
    return TieTable(classes=tuple(frozenset(g) for g in groups.values()))


@dataclass(frozen=True)
class Transcript:
    """Per-strip unitaries (R, S) with R^-1 A S the transformed matrix."""

    R: tuple
    S: tuple

    def full_matrices(self):
        R = _blockdiag(self.R)
        S = _blockdiag(self.S)
        return R, S


def _blockdiag(blocks):
    n = sum(b.shape[0] for b in blocks)
    out = np.zeros((n, n), dtype=complex)
    o = 0
    for b in blocks:
        k = b.shape[0]
        out[o : o + k, o : o + k] = b
        o += k
    return out


def apply_admissible(
    M: MarkedBlockMatrix, T: Transcript, tol: Tolerance = Tolerance()
) -> MarkedBlockMatrix:
    validate(M)
    if len(T.R) != len(M.row_strips) or len(T.S) != len(M.col_strips):
        raise DimensionMismatchError("transcript does not match strip counts")
    for k, (b, s) in enumerate(zip(T.R, M.row_strips)):
        if b.shape != (s, s):
            raise DimensionMismatchError(f"R[{k}] has shape {b.shape}, expected {s}")
    for k, (b, s) in enumerate(zip(T.S, M.col_strips)):
        if b.shape != (s, s):
            raise DimensionMismatchError(f"S[{k}] has shape {b.shape}, expected {s}")
    check = max(tol.abs, 1e-8)
    for i, j in M.marked:
        if np.linalg.norm(T.R[i] - T.S[j]) > check * max(1, M.row_strips[i]):
            raise TieViolationError(f"R[{i}] != S[{j}] on marked block ({i},{j})")
    R, S = _blockdiag(T.R), _blockdiag(T.S)
    return MarkedBlockMatrix(
        M.row_strips, M.col_strips, R.conj().T @ M.entries @ S, M.marked
    )


def random_transcript(M: MarkedBlockMatrix, seed=None) -> Transcript:
    """Random tie-respecting admissible transformation."""
    table = tie_closure(M)
    rng = np.random.default_rng(seed)
    unitaries = {}
    for c in table.classes:
        slot = sorted(c)[0]
        size = (
            M.row_strips[slot[1]] if slot[0] == "r" else M.col_strips[slot[1]]
        )
        U = random_unitary(size, seed=rng.integers(0, 2**32))
        for s in c:
            unitaries[s] = U
    R = tuple(unitaries[("r", i)] for i in range(len(M.row_strips)))
    S = tuple(unitaries[("c", j)] for j in range(len(M.col_strips)))
    return Transcript(R=R, S=S)


# ---------------------------------------------------------------------------
# reduction engine


class _Sub:
    """A substrip: a contiguous run of rows or columns inside one strip."""

    __slots__ = ("axis", "strip", "start", "size")

    def __init__(self, axis, strip, start, size):
        self.axis = axis
        self.strip = strip
        self.start = start
        self.size = size

    def __repr__(self):  # pragma: no cover
        return f"Sub({self.axis}{self.strip}@{self.start}+{self.size})"


@dataclass
class Zone:
    """Canonical part installed at one point of the reduction."""

    depth: int
    kind: str  # "equivalence" | "similarity"
    block: tuple  # (row_start, row_size, col_start, col_size) of Bl(Z)
    cells: frozenset = field(default_factory=frozenset)
    stairs: tuple = ()  # for similarity zones: groups of diagonal cells
    merged_blocks: tuple = ()  # blocks absorbed by the merge rule


@dataclass
class StepRecord:
    kind: str
    row_block: tuple  # (start, size)
    col_block: tuple
    values: tuple  # (value, size) per piece (equivalence: positive reals
    # then optional (0, leftover); similarity: eigenvalues)
    row_pieces: tuple
    col_pieces: tuple


@dataclass
class ReductionTrace:
    steps: list
    zones: list
    row_substrips: list  # per original strip: list of (start, size, class label)
    col_substrips: list
    num_classes: int
    canonical_entries: np.ndarray = None


class ReductionState:
    """Single-owner mutable state of the derived-matrix iteration."""

    def __init__(self, M: MarkedBlockMatrix, tol: Tolerance = Tolerance()):
        validate(M)
        self.M = M
        self.tol = tol
        self.A = M.entries.astype(complex).copy()
        m, n = self.A.shape
        self.R = np.eye(m, dtype=complex)
        self.S = np.eye(n, dtype=complex)
        self.rows: list[_Sub] = []
        self.cols: list[_Sub] = []
        ro = _offsets(M.row_strips)
        co = _offsets(M.col_strips)
        strip_sub = {}
        for i, s in enumerate(M.row_strips):
            if s > 0:
                sub = _Sub("r", i, int(ro[i]), s)
                self.rows.append(sub)
                strip_sub[("r", i)] = sub
        for j, s in enumerate(M.col_strips):
            if s > 0:
                sub = _Sub("c", j, int(co[j]), s)
                self.cols.append(sub)
                strip_sub[("c", j)] = sub
        self._parent = {id(s): s for s in self.rows + self.cols}
        for i, j in M.marked:
            a = strip_sub.get(("r", i))
            b = strip_sub.get(("c", j))
            if a is not None and b is not None:
                self._union(a, b)
        self.steps: list[StepRecord] = []
        self.zones: list[Zone] = []
        self._zero_candidates: list[Zone] = []
        self.boundaries: dict = {}  # (axis, offset) -> "direct" | "propagated"
        self.done = False

    # -- union-find ----------------------------------------------------
    def _find(self, s: _Sub) -> _Sub:
        p = self._parent
        while p[id(s)] is not s:
            p[id(s)] = p[id(p[id(s)])]
            s = p[id(s)]
        return s

    def _union(self, a: _Sub, b: _Sub):
        ra, rb = self._find(a), self._find(b)
        if ra is not rb:
            self._parent[id(ra)] = rb

    def _members(self, s: _Sub):
        root = self._find(s)
        return [x for x in self.rows + self.cols if self._find(x) is root]

    # -- block helpers -------------------------------------------------
    def _block(self, rs: _Sub, cs: _Sub) -> np.ndarray:
        return self.A[rs.start : rs.start + rs.size, cs.start : cs.start + cs.size]

    def _is_canonical(self, rs: _Sub, cs: _Sub) -> bool:
        B = self._block(rs, cs)
        if self._find(rs) is self._find(cs):
            lam = np.mean(np.diagonal(B))
            return np.linalg.norm(B - lam * np.eye(rs.size)) <= self.tol.abs * max(
                1.0, rs.size
            )
        return np.linalg.norm(B) <= self.tol.abs * max(1.0, (rs.size * cs.size) ** 0.5)

    def _blocks_in_order(self):
        for rs in reversed(self.rows):
            for cs in self.cols:
                yield rs, cs

    def first_changing_block(self):
        for rs, cs in self._blocks_in_order():
            if not self._is_canonical(rs, cs):
                return rs, cs
        return None

    # -- zone bookkeeping ----------------------------------------------
    def _contained(self, cells) -> bool:
        return any(cells <= z.cells for z in self.zones)

    def _candidate_zone(self, rs: _Sub, cs: _Sub, depth: int):
        cells = frozenset(
            (r, c)
            for r in range(rs.start, rs.start + rs.size)
            for c in range(cs.start, cs.start + cs.size)
        )
        if self._contained(cells):
            return
        block = (rs.start, rs.size, cs.start, cs.size)
        if self._find(rs) is self._find(cs):
            stair = tuple(
                (rs.start + t, cs.start + t) for t in range(rs.size)
            )
            z = Zone(depth=depth, kind="similarity", block=block, cells=cells,
                     stairs=(stair,))
        else:
            z = Zone(depth=depth, kind="equivalence", block=block, cells=cells)
            self._zero_candidates.append(z)
        self.zones.append(z)

    def _collect_zones_before(self, target, depth: int):
        for rs, cs in self._blocks_in_order():
            if target is not None and rs is target[0] and cs is target[1]:
                return
            if rs.size == 0 or cs.size == 0:
                continue
            self._candidate_zone(rs, cs, depth)

    # -- transformations -----------------------------------------------
    def _apply(self, row_updates, col_updates):
        """Apply per-substrip unitaries; accumulate transcripts."""
        m, n = self.A.shape
        P = np.eye(m, dtype=complex)
        Q = np.eye(n, dtype=complex)
        for sub, U in row_updates:
            P[sub.start : sub.start + sub.size, sub.start : sub.start + sub.size] = U
        for sub, U in col_updates:
            Q[sub.start : sub.start + sub.size, sub.start : sub.start + sub.size] = U
        self.A = P.conj().T @ self.A @ Q
        self.R = self.R @ P
        self.S = self.S @ Q

    def _divide(self, member_sizes, direct: set):
        """Divide substrips into pieces.

        ``member_sizes``: list of (sub, piece_sizes).  Returns a dict
        sub -> list of new subs.  Updates positional lists and boundary
        provenance (``direct`` holds the subs of the reduced block)."""
        pieces = {}
        for sub, sizes in member_sizes:
            sizes = [s for s in sizes if s > 0]
            assert sum(sizes) == sub.size
            new = []
            off = sub.start
            for k, s in enumerate(sizes):
                if k > 0:
                    self.boundaries[(sub.axis, off)] = (
                        "direct" if sub in direct else "propagated"
                    )
                new.append(_Sub(sub.axis, sub.strip, off, s))
                off += s
            pieces[id(sub)] = new
            lst = self.rows if sub.axis == "r" else self.cols
            at = lst.index(sub)
            lst[at : at + 1] = new
            for ns in new:
                self._parent[id(ns)] = ns
        return pieces

    # -- reduction steps -----------------------------------------------
    def _reduce_equivalence(self, rs: _Sub, cs: _Sub, depth: int):
        tol = self.tol
        B = self._block(rs, cs)
        U, s, Vh = np.linalg.svd(B)
        V = Vh.conj().T
        rmem = self._members(rs)
        cmem = self._members(cs)
        self._apply(
            [(x, U) for x in rmem if x.axis == "r"]
            + [(x, V) for x in cmem if x.axis == "r"],
            [(x, U) for x in rmem if x.axis == "c"]
            + [(x, V) for x in cmem if x.axis == "c"],
        )
        nonzero = s[s > tol.abs]
        clusters = [(rep, len(mem)) for rep, mem in cluster_values(nonzero, tol)]
        r = len(nonzero)
        # snap the block to its canonical part
        D = np.zeros((rs.size, cs.size), dtype=complex)
        pos = 0
        for rep, mult in clusters:
            for _ in range(mult):
                D[pos, pos] = rep
                pos += 1
        self.A[rs.start : rs.start + rs.size, cs.start : cs.start + cs.size] = D
        cells = frozenset(
            (rr, cc)
            for rr in range(rs.start, rs.start + rs.size)
            for cc in range(cs.start, cs.start + cs.size)
        )
        self.zones.append(
            Zone(
                depth=depth,
                kind="equivalence",
                block=(rs.start, rs.size, cs.start, cs.size),
                cells=cells,
            )
        )
        row_sizes = [m for _, m in clusters] + [rs.size - r]
        col_sizes = [m for _, m in clusters] + [cs.size - r]
        member_sizes = [(x, row_sizes) for x in rmem] + [(x, col_sizes) for x in cmem]
        pieces = self._divide(member_sizes, direct={rs, cs})
        k = len(clusters)
        # marks: piece alpha of the row class is tied to piece alpha of the
        # column class for every singular-value cluster
        for a in range(k):
            anchor = None
            for x in rmem + cmem:
                px = pieces[id(x)]
                if a < len(px):
                    if anchor is None:
                        anchor = px[a]
                    else:
                        self._union(anchor, px[a])
        # leftover pieces stay tied within their own former class
        for group in (rmem, cmem):
            anchor = None
            for x in group:
                px = pieces[id(x)]
                if len(px) == k + 1:
                    if anchor is None:
                        anchor = px[k]
                    else:
                        self._union(anchor, px[k])
        self.steps.append(
            StepRecord(
                kind="equivalence",
                row_block=(rs.start, rs.size),
                col_block=(cs.start, cs.size),
                values=tuple(clusters) + (((0.0, rs.size - r),) if rs.size > r else ()),
                row_pieces=tuple(s_ for s_ in row_sizes if s_ > 0),
                col_pieces=tuple(s_ for s_ in col_sizes if s_ > 0),
            )
        )

    def _reduce_similarity(self, rs: _Sub, cs: _Sub, depth: int):
        tol = self.tol
        B = self._block(rs, cs)
        lams, sizes, S = simil_step(B, tol)
        mem = self._members(rs)
        self._apply(
            [(x, S) for x in mem if x.axis == "r"],
            [(x, S) for x in mem if x.axis == "c"],
        )
        offs = _offsets(sizes)
        # snap diagonal blocks and the zero blocks below them
        for a in range(len(sizes)):
            r0, r1 = rs.start + offs[a], rs.start + offs[a + 1]
            c0, c1 = cs.start + offs[a], cs.start + offs[a + 1]
            self.A[r0:r1, c0:c1] = lams[a] * np.eye(sizes[a])
            self.A[r1 : rs.start + rs.size, c0:c1] = 0.0
        cells = set()
        stairs = []
        for a in range(len(sizes)):
            stair = []
            for t in range(sizes[a]):
                stair.append((rs.start + offs[a] + t, cs.start + offs[a] + t))
            stairs.append(tuple(stair))
            for b in range(a + 1):
                for rr in range(rs.start + offs[a], rs.start + offs[a + 1]):
                    for cc in range(cs.start + offs[b], cs.start + offs[b + 1]):
                        cells.add((rr, cc))
        self.zones.append(
            Zone(
                depth=depth,
                kind="similarity",
                block=(rs.start, rs.size, cs.start, cs.size),
                cells=frozenset(cells),
                stairs=tuple(stairs),
            )
        )
        pieces = self._divide([(x, sizes) for x in mem], direct={rs, cs})
        for a in range(len(sizes)):
            anchor = None
            for x in mem:
                px = pieces[id(x)]
                if anchor is None:
                    anchor = px[a]
                else:
                    self._union(anchor, px[a])
        self.steps.append(
            StepRecord(
                kind="similarity",
                row_block=(rs.start, rs.size),
                col_block=(cs.start, cs.size),
                values=tuple((lams[a], sizes[a]) for a in range(len(sizes))),
                row_pieces=tuple(sizes),
                col_pieces=tuple(sizes),
            )
        )

    def derive(self) -> bool:
        """One step of the iteration.  Returns False at the fixpoint."""
        if self.done:
            return False
        target = self.first_changing_block()
        depth = len(self.steps)
        if target is None:
            self._collect_zones_before(None, depth)
            self._merge_zero_zones()
            self._final_snap()
            self.done = True
            return False
        self._collect_zones_before(target, depth)
        rs, cs = target
        if self._find(rs) is self._find(cs):
            self._reduce_similarity(rs, cs, depth)
        else:
            self._reduce_equivalence(rs, cs, depth)
        return True

    def _merge_zero_zones(self):
        """Merge rule: an all-zero block that was never itself reduced joins
        the zone of its neighbour across a propagated division boundary."""
        for _ in range(4):  # a few passes settle chains
            changed = False
            for z in list(self._zero_candidates):
                if z not in self.zones:
                    continue
                r0, rs_, c0, cs_ = z.block
                r1, c1 = r0 + rs_, c0 + cs_
                probes = [
                    (("c", c0), (r0, c0 - 1)),
                    (("c", c1), (r0, c1)),
                    (("r", r0), (r0 - 1, c0)),
                    (("r", r1), (r1, c0)),
                ]
                for key, cell in probes:
                    if self.boundaries.get(key) != "propagated":
                        continue
                    target = next(
                        (
                            t
                            for t in self.zones
                            if t is not z and cell in t.cells
                        ),
                        None,
                    )
                    if target is None:
                        continue
                    target.cells = frozenset(target.cells | z.cells)
                    target.merged_blocks = target.merged_blocks + (z.block,)
                    self.zones.remove(z)
                    changed = True
                    break
            if not changed:
                break

    def _final_snap(self):
        for rs in self.rows:
            for cs in self.cols:
                r0, r1 = rs.start, rs.start + rs.size
                c0, c1 = cs.start, cs.start + cs.size
                if self._find(rs) is self._find(cs):
                    lam = np.mean(np.diagonal(self.A[r0:r1, c0:c1]))
                    self.A[r0:r1, c0:c1] = lam * np.eye(rs.size)
                else:
                    self.A[r0:r1, c0:c1] = 0.0

    def _class_labels(self):
        labels = {}
        for sub in self.rows + self.cols:
            root = self._find(sub)
            if id(root) not in labels:
                labels[id(root)] = len(labels) + 1
        return labels

    def trace(self) -> ReductionTrace:
        labels = self._class_labels()
        row_info = [[] for _ in self.M.row_strips]
        col_info = [[] for _ in self.M.col_strips]
        for sub in self.rows:
            row_info[sub.strip].append(
                (sub.start, sub.size, labels[id(self._find(sub))])
            )
        for sub in self.cols:
            col_info[sub.strip].append(
                (sub.start, sub.size, labels[id(self._find(sub))])
            )
        return ReductionTrace(
            steps=list(self.steps),
            zones=list(self.zones),
            row_substrips=row_info,
            col_substrips=col_info,
            num_classes=len(labels),
            canonical_entries=self.A.copy(),
        )


def canonicalize(M: MarkedBlockMatrix, tol: Tolerance = Tolerance()):
    """Reduce M to its canonical matrix.

    Returns ``(canonical, transcript, trace)`` with
    ``apply_admissible(M, transcript)`` equal to ``canonical`` within
    tolerance."""
    state = ReductionState(M, tol)
    limit = 4 * max(1, M.entries.size) + 8
    steps = 0
    while state.derive():
        steps += 1
        if steps > limit:
            raise NoConvergenceError(
                f"reduction did not converge after {steps} steps"
            )
    canonical = MarkedBlockMatrix(M.row_strips, M.col_strips, state.A, M.marked)
    ro = _offsets(M.row_strips)
    co = _offsets(M.col_strips)
    T = Transcript(
        R=tuple(
            state.R[ro[i] : ro[i + 1], ro[i] : ro[i + 1]].copy()
            for i in range(len(M.row_strips))
        ),
        S=tuple(
            state.S[co[j] : co[j + 1], co[j] : co[j + 1]].copy()
            for j in range(len(M.col_strips))
        ),
    )
    return canonical, T, state.trace()


def block_direct_sum(M: MarkedBlockMatrix, N: MarkedBlockMatrix) -> MarkedBlockMatrix:
    validate(M)
    validate(N)
    if len(M.row_strips) != len(N.row_strips) or len(M.col_strips) != len(
        N.col_strips
    ):
        raise ShapeMismatchError("block grids differ")
    if M.marked != N.marked:
        raise MarkMismatchError("marked sets differ")
    rows = tuple(a + b for a, b in zip(M.row_strips, N.row_strips))
    cols = tuple(a + b for a, b in zip(M.col_strips, N.col_strips))
    out = np.zeros((sum(rows), sum(cols)), dtype=complex)
    ro, co = _offsets(rows), _offsets(cols)
    mro, mco = _offsets(M.row_strips), _offsets(M.col_strips)
    nro, nco = _offsets(N.row_strips), _offsets(N.col_strips)
    for i in range(len(rows)):
        for j in range(len(cols)):
            mb = M.block(i, j)
            nb = N.block(i, j)
            out[
                ro[i] : ro[i] + mb.shape[0], co[j] : co[j] + mb.shape[1]
            ] = mb
            out[
                ro[i] + mb.shape[0] : ro[i + 1], co[j] + mb.shape[1] : co[j + 1]
            ] = nb
    return MarkedBlockMatrix(rows, cols, out, M.marked)


def decompose(M: MarkedBlockMatrix, tol: Tolerance = Tolerance()):
    """Krull-Schmidt decomposition into canonical indecomposable summands
    with multiplicities."""
    canonical, _, trace = canonicalize(M, tol)
    lr, lc = len(M.row_strips), len(M.col_strips)
    by_class: dict = {}
    for i in range(lr):
        for start, size, label in trace.row_substrips[i]:
            by_class.setdefault(label, {"rows": [[] for _ in range(lr)],
                                        "cols": [[] for _ in range(lc)],
                                        "size": size})
            by_class[label]["rows"][i].append(start)
    for j in range(lc):
        for start, size, label in trace.col_substrips[j]:
            by_class.setdefault(label, {"rows": [[] for _ in range(lr)],
                                        "cols": [[] for _ in range(lc)],
                                        "size": size})
            by_class[label]["cols"][j].append(start)
    summands = []
    for label in sorted(by_class):
        info = by_class[label]
        row_counts = tuple(len(v) for v in info["rows"])
        col_counts = tuple(len(v) for v in info["cols"])
        row_starts = [s for v in info["rows"] for s in v]
        col_starts = [s for v in info["cols"] for s in v]
        P = np.zeros((len(row_starts), len(col_starts)), dtype=complex)
        for a, rstart in enumerate(row_starts):
            for b, cstart in enumerate(col_starts):
                P[a, b] = canonical.entries[rstart, cstart]
        summand = MarkedBlockMatrix(row_counts, col_counts, P, M.marked)
        summands.append((summand, info["size"]))
    # merge equal summands (equal canonical matrices are the same class)
    out = []
    for P, mult in summands:
        for k, (Q, qm) in enumerate(out):
            if (
                P.row_strips == Q.row_strips
                and P.col_strips == Q.col_strips
                and np.allclose(P.entries, Q.entries, atol=10 * tol.abs)
            ):
                out[k] = (Q, qm + mult)
                break
        else:
            out.append((P, mult))
    return out


def is_indecomposable(M: MarkedBlockMatrix, tol: Tolerance = Tolerance()) -> bool:
    if M.entries.shape == (0, 0):
        raise ZeroSizeError("the 0x0 matrix is not considered indecomposable")
    parts = decompose(M, tol)
    return len(parts) == 1 and parts[0][1] == 1
