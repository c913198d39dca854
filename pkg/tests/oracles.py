"""Independent evaluation paths used as oracles by the test suite.

Everything here works directly on raw numpy matrices through the
associative product, bypassing the package's Jordan machinery, so the two
code paths share no logic beyond numpy itself.
"""

import numpy as np

# Pauli matrices for the 2x2 embedding of small spin factors
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = (SX, SY, SZ)


def to_matrix(A, a):
    return a.coords.reshape(A.n, A.n)


def from_matrix(A, m):
    return A.element(np.asarray(m, dtype=complex).ravel())


def assoc_jordan(m, w):
    return 0.5 * (m @ w + w @ m)


def assoc_u(m, w):
    return m @ w @ m


def assoc_u_bilinear(m, w, c):
    return 0.5 * (m @ c @ w + w @ c @ m)


def assoc_triple(x, y, z):
    return 0.5 * (x @ y.conj().T @ z + z @ y.conj().T @ x)


def expm_hermitian(h, t=1.0):
    """exp(i t h) for a hermitian matrix via numpy's eigendecomposition."""
    vals, vecs = np.linalg.eigh(h)
    return (vecs * np.exp(1j * t * vals)) @ vecs.conj().T


def spin_sa_to_pauli(lam, tvec):
    """Embed a self-adjoint spin element lambda*1 + h (h with real H^-
    coordinates tvec, len <= 3) as a 2x2 hermitian matrix."""
    t = np.zeros(3)
    t[: len(tvec)] = tvec
    return lam * np.eye(2, dtype=complex) + sum(ti * si for ti, si in zip(t, PAULI))


def pauli_to_spin_sa(m):
    """Inverse of spin_sa_to_pauli: (lambda, tvec of length 3)."""
    lam = float(np.trace(m).real) / 2.0
    t = np.array([float(np.trace(m @ s).real) / 2.0 for s in PAULI])
    return lam, t


def eig_projectors(m):
    """Cluster-merged eigenprojectors of a hermitian matrix."""
    vals, vecs = np.linalg.eigh(m)
    groups = []
    for i, v in enumerate(vals):
        if groups and abs(v - groups[-1][0][-1]) < 1e-7 * (1.0 + abs(v)):
            groups[-1][0].append(v)
            groups[-1][1].append(i)
        else:
            groups.append(([v], [i]))
    out = []
    for vs, idx in groups:
        P = sum(np.outer(vecs[:, i], vecs[:, i].conj()) for i in idx)
        out.append((float(np.mean(vs)), P))
    return out
