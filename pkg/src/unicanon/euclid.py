"""Euclidean (real) representations and real/quaternionic/complex types.

Realification doubles dimensions by replacing each entry a+bi with the
rotation-scaling block [[a, b], [-b, a]].  An indecomposable unitary
representation A is of real, quaternionic or complex type according to the
self-conjugation isometry S: A -> conj(A): S symmetric (real form exists),
S skew (quaternionic block form exists), or no S at all.  The symmetric and
skew cases rest on Takagi-type factorizations of S.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .numcore import Tolerance
from .quiverrep import (
    Quiver,
    Representation,
    Isometry,
    apply_isometry,
    rep_canonical,
    isometric,
    decompose_rep,
    is_indecomposable_rep,
    direct_sum,
)

__all__ = [
    "RealType",
    "NotSymmetricError",
    "NotUnitaryError",
    "NotSkewError",
    "OddDimensionError",
    "NonScalarGaugeError",
    "ConjugatePairingFailure",
    "DecomposableError",
    "realify",
    "conj_rep",
    "transpose_rep",
    "adjoint_rep",
    "self_conj_isometry",
    "classify_real",
    "takagi_symmetric",
    "skew_canonical",
    "to_real_form",
    "to_quaternionic_form",
    "real_isometry",
    "decompose_real",
    "matrix_real_test",
]


class NotSymmetricError(ValueError):
    pass


class NotUnitaryError(ValueError):
    pass


class NotSkewError(ValueError):
    pass


class OddDimensionError(ValueError):
    pass


class NonScalarGaugeError(RuntimeError):
    pass


class ConjugatePairingFailure(RuntimeError):
    pass


class DecomposableError(ValueError):
    pass


# ---------------------------------------------------------------------------
# realification and the three dualities


def _realify_matrix(A: np.ndarray) -> np.ndarray:
    m, n = A.shape
    out = np.zeros((2 * m, 2 * n), dtype=complex)
    re, im = A.real, A.imag
    out[0::2, 0::2] = re
    out[0::2, 1::2] = im
    out[1::2, 0::2] = -im
    out[1::2, 1::2] = re
    return out


def realify(A: Representation) -> Representation:
    """Replace each entry a+bi by [[a, b], [-b, a]]; dimensions double."""
    dims = tuple(2 * d for d in A.dims)
    mats = {a: _realify_matrix(M) for a, M in A.matrices.items()}
    return Representation(A.quiver, dims, mats)


def conj_rep(A: Representation) -> Representation:
    return Representation(
        A.quiver, A.dims, {a: M.conj() for a, M in A.matrices.items()}
    )


def _reversed_quiver(Q: Quiver) -> Quiver:
    return Quiver(Q.p, tuple((a, d, s) for a, s, d in Q.arrows))


def transpose_rep(A: Representation) -> Representation:
    """Transpose every matrix; all arrows reverse (shapes force it)."""
    return Representation(
        _reversed_quiver(A.quiver),
        A.dims,
        {a: M.T for a, M in A.matrices.items()},
    )


def adjoint_rep(A: Representation) -> Representation:
    """Conjugate-transpose every matrix; all arrows reverse."""
    return Representation(
        _reversed_quiver(A.quiver),
        A.dims,
        {a: M.conj().T for a, M in A.matrices.items()},
    )


# ---------------------------------------------------------------------------
# self-conjugation


def self_conj_isometry(A: Representation, tol: Tolerance = Tolerance()):
    """An isometry S: A -> conj(A) when one exists, else None.

    For indecomposable A the answer is exact: A and conj(A) have equal
    canonical forms iff they are isometric, and composing the two reduction
    transcripts yields S."""
    Ab = conj_rep(A)
    _, TA, _ = rep_canonical(A, tol)
    Cb, TB, _ = rep_canonical(Ab, tol)
    Ca, _, _ = rep_canonical(A, tol)
    same = all(
        np.allclose(Ca.matrices[a], Cb.matrices[a], atol=10 * tol.abs)
        for a, _, _ in A.quiver.arrows
    )
    if not same:
        return None
    # TA: A -> canonical, TB: conj(A) -> canonical; S = TB^-1 TA
    S = Isometry(
        tuple(TB.S[v].conj().T @ TA.S[v] for v in range(A.quiver.p))
    )
    return S


@dataclass(frozen=True)
class RealType:
    """Classification of an indecomposable unitary representation.

    ``kind`` is 'Real', 'Quaternionic' or 'Complex'; ``lam`` is the scalar
    value of conj(S) S (+1, -1, or None); ``S`` the self-conjugation
    isometry; ``form`` the constructed real or quaternionic form."""

    kind: str
    lam: object = None
    S: object = None
    form: object = None


def classify_real(A: Representation, tol: Tolerance = Tolerance()) -> RealType:
    S = self_conj_isometry(A, tol)
    if S is None:
        return RealType(kind="Complex")
    lams = []
    for v in range(A.quiver.p):
        if A.dims[v] == 0:
            continue
        C = S.S[v].conj() @ S.S[v]
        lam = np.mean(np.diagonal(C))
        if np.linalg.norm(C - lam * np.eye(C.shape[0])) > 1e-6 * max(
            1, C.shape[0]
        ):
            raise NonScalarGaugeError(
                "conj(S) S is not scalar; input is not indecomposable"
            )
        lams.append(lam)
    lam = lams[0] if lams else 1.0
    for x in lams[1:]:
        if abs(x - lam) > 1e-6:
            raise NonScalarGaugeError("conj(S) S differs between vertices")
    if abs(lam - 1) <= 1e-6:
        return RealType(kind="Real", lam=1, S=S, form=to_real_form(A, S, tol))
    if abs(lam + 1) <= 1e-6:
        return RealType(
            kind="Quaternionic", lam=-1, S=S, form=to_quaternionic_form(A, S, tol)
        )
    raise NonScalarGaugeError(f"conj(S) S = {lam}, expected +1 or -1")


# ---------------------------------------------------------------------------
# Takagi-type factorizations


def _completion_with_columns(cols: np.ndarray) -> np.ndarray:
    """Unitary whose leading columns are the given orthonormal columns."""
    n, k = cols.shape
    if k == 0:
        return np.eye(n, dtype=complex)
    U, _, _ = np.linalg.svd(cols, full_matrices=True)
    # U's first k columns span the same space; align them with cols exactly
    rest = U[:, k:]
    return np.concatenate([cols, rest], axis=1)


def takagi_symmetric(S, tol: Tolerance = Tolerance()) -> np.ndarray:
    """U with U^T U = S, for symmetric unitary S.

    Recursion on the antilinear involution x -> S conj(x): the unit vector
    u1 proportional to e1 + S e1 is fixed (u1 = i e1 when S e1 is close to
    -e1), and in any unitary basis starting with u1 the problem splits off a
    1x1 identity block."""
    S = np.asarray(S, dtype=complex)
    n = S.shape[0]
    if n == 0:
        return np.eye(0, dtype=complex)
    if np.linalg.norm(S - S.T) > max(tol.abs, 1e-8) * max(1, n):
        raise NotSymmetricError("S is not symmetric")
    if np.linalg.norm(S.conj().T @ S - np.eye(n)) > max(tol.abs, 1e-8) * max(1, n):
        raise NotUnitaryError("S is not unitary")

    def rec(S):
        n = S.shape[0]
        if n == 0:
            return np.eye(0, dtype=complex)
        e1 = np.zeros(n, dtype=complex)
        e1[0] = 1.0
        s1 = S[:, 0]
        w = e1 + s1
        nw = np.linalg.norm(w)
        if nw <= 1e-8:
            u1 = 1j * e1
        else:
            u1 = w / nw
        V = _completion_with_columns(u1.reshape(n, 1))
        T = V.conj().T @ S @ V.conj()
        Tp = T[1:, 1:]
        # symmetrize against roundoff before recursing
        Tp = 0.5 * (Tp + Tp.T)
        Up = rec(Tp)
        Ut = np.eye(n, dtype=complex)
        Ut[1:, 1:] = Up
        return Ut @ V.T

    U = rec(S)
    return U


def _interleaved_J(n: int) -> np.ndarray:
    J = np.zeros((n, n), dtype=complex)
    for k in range(0, n - 1, 2):
        J[k, k + 1] = 1.0
        J[k + 1, k] = -1.0
    return J


def skew_canonical(S, tol: Tolerance = Tolerance()) -> np.ndarray:
    """U with U^T J U = S for skew-symmetric unitary S of even size, where
    J is the direct sum of 2x2 blocks [[0, 1], [-1, 0]].

    Recursion: u1 = e1, u2 = S e1 are orthonormal and the antilinear map
    x -> S conj(x) swaps them up to sign, so the problem splits off one J
    block per step."""
    S = np.asarray(S, dtype=complex)
    n = S.shape[0]
    if n % 2:
        raise OddDimensionError("skew unitary matrices have even size")
    if n == 0:
        return np.eye(0, dtype=complex)
    if np.linalg.norm(S + S.T) > max(tol.abs, 1e-8) * max(1, n):
        raise NotSkewError("S is not skew-symmetric")
    if np.linalg.norm(S.conj().T @ S - np.eye(n)) > max(tol.abs, 1e-8) * max(1, n):
        raise NotUnitaryError("S is not unitary")

    def rec(S):
        n = S.shape[0]
        if n == 0:
            return np.eye(0, dtype=complex)
        e1 = np.zeros(n, dtype=complex)
        e1[0] = 1.0
        u1 = e1
        u2 = -S[:, 0]
        V = _completion_with_columns(np.stack([u1, u2], axis=1))
        T = V.conj().T @ S @ V.conj()
        Tp = T[2:, 2:]
        Tp = 0.5 * (Tp - Tp.T)
        Up = rec(Tp)
        Ut = np.eye(n, dtype=complex)
        Ut[2:, 2:] = Up
        return Ut @ V.T

    return rec(S)


# ---------------------------------------------------------------------------
# real and quaternionic forms


def to_real_form(
    A: Representation, S: Isometry, tol: Tolerance = Tolerance()
) -> Representation:
    """Real representation isometric to A, built from the symmetric
    self-conjugation S via per-vertex Takagi factors U_v (U_v^T U_v = S_v)."""
    U = []
    for v in range(A.quiver.p):
        U.append(takagi_symmetric(S.S[v], tol))
    B = apply_isometry(A, Isometry(tuple(U)))
    mats = {}
    for a, M in B.matrices.items():
        if np.abs(M.imag).max(initial=0.0) > 1e-6 * (1 + np.abs(M).max(initial=0.0)):
            raise NonScalarGaugeError("real form has residual imaginary parts")
        mats[a] = M.real.astype(complex)
    return Representation(A.quiver, A.dims, mats)


def _pair_permutation(n: int) -> np.ndarray:
    """Permutation matrix sending interleaved pair coordinates
    (1,2,3,4,...) to block coordinates (odd positions first)."""
    P = np.zeros((n, n), dtype=complex)
    h = n // 2
    for k in range(h):
        P[k, 2 * k] = 1.0
        P[h + k, 2 * k + 1] = 1.0
    return P


def to_quaternionic_form(
    A: Representation, S: Isometry, tol: Tolerance = Tolerance()
) -> Representation:
    """Representation isometric to A whose matrices have the block shape
    [[X, Y], [-conj(Y), conj(X)]], built from skew S via per-vertex factors
    V_v with V_v^T J V_v = S_v."""
    W = []
    for v in range(A.quiver.p):
        V = skew_canonical(S.S[v], tol)
        P = _pair_permutation(A.dims[v])
        W.append(P @ V)
    C = apply_isometry(A, Isometry(tuple(W)))
    for a, s, d in A.quiver.arrows:
        M = C.matrices[a]
        hr, hc = M.shape[0] // 2, M.shape[1] // 2
        X, Y = M[:hr, :hc], M[:hr, hc:]
        resid = max(
            np.abs(M[hr:, :hc] + Y.conj()).max(initial=0.0),
            np.abs(M[hr:, hc:] - X.conj()).max(initial=0.0),
        )
        if resid > 1e-6 * (1 + np.abs(M).max(initial=0.0)):
            raise NonScalarGaugeError(
                "quaternionic block symmetry violated"
            )
    return C


# ---------------------------------------------------------------------------
# real isometry and real decomposition


def real_isometry(A: Representation, B: Representation, tol: Tolerance = Tolerance()):
    """Real orthogonal intertwiner between real-entried representations, or
    None when they are not complex-isometric.

    Any complex isometry S gives intertwiners Re(e^{i t} S) for every t;
    a generic t makes them invertible, and the polar factor restores
    orthogonality while preserving the intertwining relations."""
    if not isometric(A, B, tol):
        return None
    _, TA, _ = rep_canonical(A, tol)
    _, TB, _ = rep_canonical(B, tol)
    S = tuple(TB.S[v].conj().T @ TA.S[v] for v in range(A.quiver.p))
    scale = max(
        [1.0] + [float(np.linalg.norm(M)) for M in A.matrices.values()]
    )
    thetas = [np.pi * k / 24 for k in range(24)]
    rng = np.random.default_rng(0)
    thetas += list(rng.uniform(0, np.pi, size=16))
    best = None
    for t in thetas:
        phase = np.exp(1j * t)
        T = []
        ok = True
        for v in range(A.quiver.p):
            Phi = (phase * S[v]).real
            if Phi.size:
                sv = np.linalg.svd(Phi, compute_uv=False)
                if sv[-1] < 1e-8:
                    ok = False
                    break
                # polar factor: orthogonal, still intertwining
                U_, _, Vh_ = np.linalg.svd(Phi)
                Phi = U_ @ Vh_
            T.append(Phi.astype(complex))
        if not ok:
            continue
        T = Isometry(tuple(T))
        resid = 0.0
        for a, s, d in A.quiver.arrows:
            resid = max(
                resid,
                float(
                    np.abs(
                        T.S[d - 1] @ A.matrices[a]
                        - B.matrices[a] @ T.S[s - 1]
                    ).max(initial=0.0)
                ),
            )
        if resid < 1e-8 * (1 + scale):
            return T
        if best is None or resid < best[0]:
            best = (resid, T)
    if best is not None and best[0] < 1e-6 * (1 + scale):
        return best[1]
    return None


def decompose_real(A: Representation, tol: Tolerance = Tolerance()):
    """Decomposition of a real-entried representation into summands that are
    indecomposable over the reals.

    Decompose over the complexes and classify each summand: real-type
    summands are emitted as real forms; complex-type summands pair with
    their conjugates and each pair realifies into one real summand;
    quaternionic summands pair with themselves (even multiplicity)."""
    parts = decompose_rep(A, tol)
    out = []
    remaining = [[P, m] for P, m in parts]
    for item in remaining:
        P, m = item
        if m == 0:
            continue
        rt = classify_real(P, tol)
        if rt.kind == "Real":
            out.append((rt.form, m))
            item[1] = 0
        elif rt.kind == "Quaternionic":
            if m % 2:
                raise ConjugatePairingFailure(
                    "quaternionic summand with odd multiplicity"
                )
            out.append((realify_half(P), m // 2))
            item[1] = 0
        else:
            # complex type: find the conjugate partner
            Pc, _, _ = rep_canonical(conj_rep(P), tol)
            partner = None
            for other in remaining:
                Q, qm = other
                if other is item or qm == 0:
                    continue
                if Q.dims != P.dims:
                    continue
                Qc, _, _ = rep_canonical(Q, tol)
                if all(
                    np.allclose(
                        Qc.matrices[a], Pc.matrices[a], atol=10 * tol.abs
                    )
                    for a, _, _ in A.quiver.arrows
                ):
                    partner = other
                    break
            if partner is None or partner[1] != m:
                raise ConjugatePairingFailure(
                    "complex-type summand without matching conjugate"
                )
            out.append((realify_half(P), m))
            item[1] = 0
            partner[1] = 0
    return out


def realify_half(P: Representation) -> Representation:
    """Realification of one complex summand, emitted with real entries."""
    R = realify(P)
    mats = {a: M.real.astype(complex) for a, M in R.matrices.items()}
    return Representation(R.quiver, R.dims, mats)


def matrix_real_test(A, tol: Tolerance = Tolerance()):
    """Is the square matrix A unitarily similar to a real matrix?

    Returns ``(flag, witness)``; the witness is the real matrix when it
    exists.  A must be indecomposable under unitary similarity."""
    A = np.asarray(A, dtype=complex)
    n = A.shape[0]
    loop = Quiver(1, [("a", 1, 1)])
    R = Representation(loop, (n,), {"a": A})
    if not is_indecomposable_rep(R, tol):
        raise DecomposableError(
            "matrix is unitarily similar to a direct sum"
        )
    rt = classify_real(R, tol)
    if rt.kind == "Real":
        return True, rt.form.matrices["a"].real
    return False, None
