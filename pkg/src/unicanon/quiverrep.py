"""Quivers and their unitary representations.

A representation assigns a matrix of shape d_dst x d_src to every arrow.
Representations are classified up to isometry (vertex-wise unitary basis
changes); the classification reduces to marked block matrices by packing all
arrow matrices into one grid whose admissible transformations are exactly the
vertex-wise unitaries.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .numcore import Tolerance
from . import mbm
from .mbm import MarkedBlockMatrix
from .scheme import Scheme, scheme_of, zones as trace_zones

__all__ = [
    "Quiver",
    "Representation",
    "Isometry",
    "QuiverMismatchError",
    "DimMismatchError",
    "UnknownArrowError",
    "ZeroDimError",
    "pack",
    "unpack",
    "rep_canonical",
    "rep_params",
    "isometric",
    "apply_isometry",
    "direct_sum",
    "decompose_rep",
    "is_indecomposable_rep",
    "reverse_arrow",
    "random_rep",
]


class QuiverMismatchError(ValueError):
    pass


class DimMismatchError(ValueError):
    pass


class UnknownArrowError(KeyError):
    pass


class ZeroDimError(ValueError):
    pass


@dataclass(frozen=True)
class Quiver:
    """Directed graph with 1-based vertices; loops and parallel arrows are
    allowed.  Arrows are (id, src, dst)."""

    p: int
    arrows: tuple

    def __post_init__(self):
        object.__setattr__(
            self,
            "arrows",
            tuple((str(a), int(s), int(d)) for a, s, d in self.arrows),
        )
        ids = [a for a, _, _ in self.arrows]
        if len(set(ids)) != len(ids):
            raise ValueError("arrow ids must be unique")
        for a, s, d in self.arrows:
            if not (1 <= s <= self.p and 1 <= d <= self.p):
                raise ValueError(f"arrow {a}: endpoints out of range")

    def arrow(self, arrow_id):
        for a in self.arrows:
            if a[0] == str(arrow_id):
                return a
        raise UnknownArrowError(arrow_id)

    def to_json(self) -> dict:
        return {
            "vertices": self.p,
            "arrows": [{"id": a, "src": s, "dst": d} for a, s, d in self.arrows],
        }

    @classmethod
    def from_json(cls, data: dict) -> "Quiver":
        return cls(
            p=int(data["vertices"]),
            arrows=tuple((a["id"], a["src"], a["dst"]) for a in data["arrows"]),
        )


@dataclass(frozen=True)
class Representation:
    quiver: Quiver
    dims: tuple
    matrices: dict = field(default_factory=dict)  # arrow id -> ndarray

    def __post_init__(self):
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))
        if len(self.dims) != self.quiver.p:
            raise DimMismatchError("dims length != number of vertices")
        mats = {}
        for a, s, d in self.quiver.arrows:
            A = np.asarray(self.matrices[a], dtype=complex).reshape(
                self.dims[d - 1], self.dims[s - 1]
            )
            mats[a] = A
        object.__setattr__(self, "matrices", mats)

    def to_json(self) -> dict:
        return {
            "quiver": self.quiver.to_json(),
            "dims": list(self.dims),
            "matrices": {
                a: [[[float(z.real), float(z.imag)] for z in row] for row in M]
                for a, M in self.matrices.items()
            },
        }

    @classmethod
    def from_json(cls, data: dict) -> "Representation":
        Q = Quiver.from_json(data["quiver"])
        dims = tuple(data["dims"])
        mats = {}
        for a, s, d in Q.arrows:
            raw = data["matrices"][a]
            mats[a] = np.array(
                [[complex(p[0], p[1]) for p in row] for row in raw],
                dtype=complex,
            ).reshape(dims[d - 1], dims[s - 1])
        return cls(Q, dims, mats)


@dataclass(frozen=True)
class Isometry:
    """Per-vertex unitaries T with T_dst A_arrow = B_arrow T_src."""

    S: tuple

    def inverse(self) -> "Isometry":
        return Isometry(tuple(U.conj().T for U in self.S))


def apply_isometry(A: Representation, T: Isometry) -> Representation:
    mats = {}
    for a, s, d in A.quiver.arrows:
        mats[a] = T.S[d - 1] @ A.matrices[a] @ T.S[s - 1].conj().T
    return Representation(A.quiver, A.dims, mats)


def _check_isometry(A: Representation, B: Representation, T: Isometry, tol):
    for v in range(A.quiver.p):
        U = T.S[v]
        if np.linalg.norm(U.conj().T @ U - np.eye(U.shape[0])) > 1e-6:
            return False
    for a, s, d in A.quiver.arrows:
        lhs = T.S[d - 1] @ A.matrices[a]
        rhs = B.matrices[a] @ T.S[s - 1]
        if np.linalg.norm(lhs - rhs) > 1e-6 * (1 + np.linalg.norm(A.matrices[a])):
            return False
    return True


# ---------------------------------------------------------------------------
# packing


def pack(A: Representation):
    """Pack a representation into a marked block matrix.

    Column strips are the vertices in order.  Row strips are one per arrow,
    stacked in reversed arrow order (so the first arrow forms the bottom
    strip and is reduced first).  The matrix of an arrow i -> j sits where
    its row strip meets the column strip of i; a mark at the column strip of
    j forces the row transformation to equal S_j, so the admissible
    transformations of the packed matrix are exactly the vertex-wise
    unitaries.  Returns ``(M, layout)``."""
    Q = A.quiver
    col_strips = tuple(A.dims)
    row_order = [a for a, _, _ in reversed(Q.arrows)]
    row_strips = tuple(A.dims[Q.arrow(a)[2] - 1] for a in row_order)
    ro = np.concatenate(([0], np.cumsum(row_strips))).astype(int)
    co = np.concatenate(([0], np.cumsum(col_strips))).astype(int)
    entries = np.zeros((int(ro[-1]), int(co[-1])), dtype=complex)
    marked = set()
    for k, aid in enumerate(row_order):
        _, s, d = Q.arrow(aid)
        entries[ro[k] : ro[k + 1], co[s - 1] : co[s]] += A.matrices[aid]
        marked.add((k, d - 1))
    M = MarkedBlockMatrix(row_strips, col_strips, entries, frozenset(marked))
    layout = {"row_order": row_order, "quiver": Q}
    return M, layout


def unpack(M: MarkedBlockMatrix, layout) -> Representation:
    """Inverse of :func:`pack` on the same layout (grids may have different
    strip sizes, e.g. for summands)."""
    Q = layout["quiver"]
    dims = tuple(M.col_strips)
    mats = {}
    for k, aid in enumerate(layout["row_order"]):
        _, s, d = Q.arrow(aid)
        blk = M.block(k, s - 1).copy()
        if s == d:
            # a loop's matrix coincides with its marked block
            pass
        mats[aid] = blk
    return Representation(Q, dims, mats)


# ---------------------------------------------------------------------------
# canonical representations


def rep_canonical(A: Representation, tol: Tolerance = Tolerance()):
    """Canonical representation, the isometry onto it, and per-arrow schemes.

    ``isometric(A, B)`` holds exactly when the canonical representations
    agree entrywise."""
    M, layout = pack(A)
    canonical, T, trace = mbm.canonicalize(M, tol)
    Ainf = unpack(canonical, layout)
    iso = Isometry(tuple(T.S[v].conj().T for v in range(A.quiver.p)))
    full = scheme_of(canonical, trace_zones(trace), tol)
    schemes = {}
    ro = np.concatenate(([0], np.cumsum(M.row_strips))).astype(int)
    co = np.concatenate(([0], np.cumsum(M.col_strips))).astype(int)
    for k, aid in enumerate(layout["row_order"]):
        _, s, d = A.quiver.arrow(aid)
        r0, r1 = int(ro[k]), int(ro[k + 1])
        c0, c1 = int(co[s - 1]), int(co[s])
        region = {
            (r, c) for r in range(r0, r1) for c in range(c0, c1)
        }
        sub_zones = []
        for z in full.zones:
            cells = frozenset(
                (r - r0, c - c0) for (r, c) in z.cells if (r, c) in region
            )
            if not cells:
                continue
            stairs = tuple(
                tuple((r - r0, c - c0) for (r, c) in st)
                for st in z.stairs
                if all((r, c) in region for (r, c) in st)
            )
            sub_zones.append(
                mbm.Zone(
                    depth=z.depth,
                    kind=z.kind,
                    block=z.block,
                    cells=cells,
                    stairs=stairs,
                )
            )
        schemes[aid] = Scheme(
            rows=r1 - r0,
            cols=c1 - c0,
            symbols=tuple(
                tuple(full.symbols[r][c0:c1]) for r in range(r0, r1)
            ),
            links=frozenset(
                frozenset({(a[0] - r0, a[1] - c0), (b[0] - r0, b[1] - c0)})
                for a, b in (sorted(p) for p in full.links)
                if a in region and b in region
            ),
            zones=tuple(sub_zones),
            row_strips=(r1 - r0,),
            col_strips=(c1 - c0,),
            marked=frozenset({(0, 0)} if s == d else ()),
        )
    return Ainf, iso, schemes


def rep_params(A: Representation, tol: Tolerance = Tolerance()):
    """Real and complex parameter counts of the canonical form of A.

    Sums circles and stars over the per-arrow schemes; the coupling cells of
    the packed block matrix carry no parameters and are excluded."""
    _, _, schemes = rep_canonical(A, tol)
    nr = sum(
        sum(row.count("o") for row in S.symbols) for S in schemes.values()
    )
    nc = sum(
        sum(row.count("*") for row in S.symbols) for S in schemes.values()
    )
    return nr, nc


def isometric(A: Representation, B: Representation, tol: Tolerance = Tolerance()) -> bool:
    if A.quiver.arrows != B.quiver.arrows or A.quiver.p != B.quiver.p:
        raise QuiverMismatchError("different quivers")
    if A.dims != B.dims:
        raise DimMismatchError(f"dims {A.dims} vs {B.dims}")
    Ac, _, _ = rep_canonical(A, tol)
    Bc, _, _ = rep_canonical(B, tol)
    return all(
        np.allclose(Ac.matrices[a], Bc.matrices[a], atol=10 * tol.abs)
        for a, _, _ in A.quiver.arrows
    )


def direct_sum(A: Representation, B: Representation) -> Representation:
    if A.quiver.arrows != B.quiver.arrows or A.quiver.p != B.quiver.p:
        raise QuiverMismatchError("different quivers")
    dims = tuple(a + b for a, b in zip(A.dims, B.dims))
    mats = {}
    for aid, s, d in A.quiver.arrows:
        X, Y = A.matrices[aid], B.matrices[aid]
        Z = np.zeros((dims[d - 1], dims[s - 1]), dtype=complex)
        Z[: X.shape[0], : X.shape[1]] = X
        Z[X.shape[0] :, X.shape[1] :] = Y
        mats[aid] = Z
    return Representation(A.quiver, dims, mats)


def decompose_rep(A: Representation, tol: Tolerance = Tolerance()):
    """Krull-Schmidt decomposition into pairwise non-isometric canonical
    indecomposable representations with multiplicities."""
    M, layout = pack(A)
    if M.entries.shape[0] == 0:
        # no arrows: every vertex contributes zero summands
        out = []
        for v in range(A.quiver.p):
            if A.dims[v] == 0:
                continue
            dims = tuple(1 if u == v else 0 for u in range(A.quiver.p))
            mats = {
                a: np.zeros((dims[d - 1], dims[s - 1]), dtype=complex)
                for a, s, d in A.quiver.arrows
            }
            out.append((Representation(A.quiver, dims, mats), A.dims[v]))
        return out
    parts = mbm.decompose(M, tol)
    return [(unpack(P, layout), mult) for P, mult in parts]


def is_indecomposable_rep(A: Representation, tol: Tolerance = Tolerance()) -> bool:
    if all(d == 0 for d in A.dims):
        raise ZeroDimError("the zero dimension vector is not indecomposable")
    parts = decompose_rep(A, tol)
    return len(parts) == 1 and parts[0][1] == 1


def reverse_arrow(A: Representation, arrow_id) -> Representation:
    """Flip one arrow and replace its matrix by the conjugate transpose;
    isometry classes correspond one-to-one."""
    aid, s, d = A.quiver.arrow(arrow_id)
    arrows = tuple(
        (a, dd, ss) if a == aid else (a, ss, dd) for a, ss, dd in A.quiver.arrows
    )
    Q2 = Quiver(A.quiver.p, arrows)
    mats = dict(A.matrices)
    mats[aid] = A.matrices[aid].conj().T
    return Representation(Q2, A.dims, mats)


def random_rep(Q: Quiver, d, seed=None) -> Representation:
    """Representation with complex standard-Gaussian entries."""
    rng = np.random.default_rng(seed)
    d = tuple(int(x) for x in d)
    mats = {}
    for a, s, dst in Q.arrows:
        shape = (d[dst - 1], d[s - 1])
        mats[a] = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    return Representation(Q, d, mats)
