"""Dense symmetric eigendecomposition and small support utilities.

Everything here is deterministic: fixed sweep order in the Jacobi
eigensolver, a fixed sign convention for eigenvectors, and
smallest-index tie-breaks in top-k selection.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_MAX_SWEEPS = 100


@dataclass(frozen=True)
class SupportSet:
    """Index set J inside ambient dimension p, stored sorted ascending."""

    indices: tuple
    ambient_dim: int

    def __post_init__(self):
        idx = tuple(sorted(int(i) for i in self.indices))
        if idx and (idx[0] < 0 or idx[-1] >= self.ambient_dim):
            raise ValueError("support index out of range")
        if len(set(idx)) != len(idx):
            raise ValueError("duplicate support index")
        object.__setattr__(self, "indices", idx)

    @classmethod
    def from_vector(cls, x):
        x = np.asarray(x, dtype=float)
        return cls(tuple(np.flatnonzero(x != 0.0)), x.size)

    def complement(self):
        inside = set(self.indices)
        out = tuple(i for i in range(self.ambient_dim) if i not in inside)
        return SupportSet(out, self.ambient_dim)

    def __len__(self):
        return len(self.indices)

    def __iter__(self):
        return iter(self.indices)

    def __contains__(self, i):
        return i in self.indices


class SymMatrix:
    """Square symmetric matrix; asymmetry beyond 1e-12 is rejected."""

    __slots__ = ("entries",)

    def __init__(self, entries):
        arr = np.array(entries, dtype=float)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError("expected a square matrix")
        if arr.shape[0] < 1:
            raise ValueError("dimension must be >= 1")
        if not np.all(np.isfinite(arr)):
            raise ValueError("matrix entries must be finite")
        if np.max(np.abs(arr - arr.T)) > 1e-12:
            raise ValueError("matrix is not symmetric (tolerance 1e-12)")
        arr = 0.5 * (arr + arr.T)
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    @property
    def dim(self):
        return self.entries.shape[0]

    def block(self, indices):
        """Principal submatrix A_JJ."""
        idx = np.asarray(list(indices), dtype=int)
        return self.entries[np.ix_(idx, idx)]

    def __array__(self, dtype=None):
        return np.asarray(self.entries, dtype=dtype)

    def __repr__(self):
        return "SymMatrix(%r)" % (self.entries.tolist(),)


@dataclass(frozen=True)
class EigDecomposition:
    """Eigenvalues sorted non-increasing, orthonormal basis as columns."""

    eigenvalues: np.ndarray
    basis: np.ndarray


def _sign_fix(v):
    # first component with appreciable magnitude decides the sign
    for vi in v:
        if abs(vi) > 1e-9:
            return v if vi > 0 else -v
    return v


def sym_eig(mat):
    """Eigendecomposition of a SymMatrix by cyclic Jacobi sweeps.

    Returns an EigDecomposition with eigenvalues sorted non-increasing
    (stable smallest-index order on ties) and each eigenvector's first
    nonzero component made positive.  Aborts after 100 sweeps if the
    off-diagonal mass refuses to vanish.
    """
    if not isinstance(mat, SymMatrix):
        mat = SymMatrix(mat)
    n = mat.dim
    a = np.array(mat.entries, dtype=float)
    v = np.eye(n)
    if n == 1:
        lam = np.array([a[0, 0]])
        return EigDecomposition(lam, v)

    scale = max(1.0, np.abs(a).max())
    target = 1e-15 * scale
    converged = False
    for _ in range(_MAX_SWEEPS):
        off = np.sqrt(np.sum(np.triu(a, 1) ** 2))
        if off <= n * target:
            converged = True
            break
        # threshold: rotations below this are skipped for the sweep
        thresh = off / (n * n)
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= min(thresh, target):
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = np.sign(theta) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                if theta == 0.0:
                    t = 1.0
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                rot_p = c * a[:, p] - s * a[:, q]
                rot_q = s * a[:, p] + c * a[:, q]
                a[:, p], a[:, q] = rot_p, rot_q
                rot_p = c * a[p, :] - s * a[q, :]
                rot_q = s * a[p, :] + c * a[q, :]
                a[p, :], a[q, :] = rot_p, rot_q
                a[p, q] = a[q, p] = 0.0
                rot_p = c * v[:, p] - s * v[:, q]
                rot_q = s * v[:, p] + c * v[:, q]
                v[:, p], v[:, q] = rot_p, rot_q
    else:
        converged = np.sqrt(np.sum(np.triu(a, 1) ** 2)) <= n * 1e-10 * scale
    if not converged:
        raise RuntimeError("Jacobi eigensolver did not converge in 100 sweeps")

    lam = np.diag(a).copy()
    order = np.argsort(-lam, kind="stable")
    lam = lam[order]
    v = v[:, order]
    for j in range(n):
        v[:, j] = _sign_fix(v[:, j])
    return EigDecomposition(lam, v)


def spectral_norm(mat):
    """Operator 2-norm, i.e. max |eigenvalue|."""
    dec = sym_eig(mat)
    return float(np.max(np.abs(dec.eigenvalues)))


def top_k_indices(v, k):
    """Indices of the k largest-magnitude entries; smaller index wins ties.

    Returned as a SupportSet (sorted ascending).
    """
    v = np.asarray(v, dtype=float)
    if not 0 <= k <= v.size:
        raise ValueError("k out of range")
    # lexsort: primary key last -> sort by (-|v|, index)
    order = np.lexsort((np.arange(v.size), -np.abs(v)))
    return SupportSet(tuple(order[:k]), v.size)
