"""Brute-force ground truth on small dense Hilbert spaces.

Builds the tridiagonal one-island Hamiltonian and the full spin-chain
Hamiltonian as explicit matrices, evolves states by eigendecomposition,
and evaluates expectation values.  Everything here is deliberately dumb
and direct; the analytic modules are checked against it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "DenseOperator",
    "Propagator",
    "build_island_hamiltonian",
    "build_full_chain_hamiltonian",
    "spin_ops",
    "site_number_op",
    "evolve",
    "expectation",
]

_HERM_TOL = 1e-12


@dataclass(frozen=True)
class DenseOperator:
    """Dense matrix wrapper carrying its dimension."""

    mat: np.ndarray

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    def is_hermitian(self, tol: float = _HERM_TOL) -> bool:
        return bool(np.max(np.abs(self.mat - self.mat.conj().T)) <= tol * max(1.0, np.max(np.abs(self.mat))))


def build_island_hamiltonian(N: int) -> DenseOperator:
    """Hopping Hamiltonian on the single-island basis |1>..|N>.

    Tridiagonal, zeros on the diagonal, ones on the off-diagonals; its
    eigenvalues are 2 cos(j pi / (N + 1)).
    """
    if N < 1:
        raise ValueError("chain length must be >= 1")
    H = np.zeros((N, N))
    idx = np.arange(N - 1)
    H[idx, idx + 1] = 1.0
    H[idx + 1, idx] = 1.0
    return DenseOperator(H)


# spin-1/2 site operators; basis |down> = (1,0), |up> = (0,1)
_A = np.array([[0.0, 1.0], [0.0, 0.0]])       # a  : up -> down
_ADAG = _A.T.copy()                           # a* : down -> up
_ID2 = np.eye(2)


def spin_ops(n_sites: int, site: int) -> tuple[np.ndarray, np.ndarray]:
    """(a, a*) acting on `site` (0-based) of an n_sites spin chain."""
    ops = [_ID2] * n_sites
    ops[site] = _A
    a = ops[0]
    for o in ops[1:]:
        a = np.kron(a, o)
    return a, a.T.copy()


def site_number_op(n_sites: int, site: int) -> DenseOperator:
    a, adag = spin_ops(n_sites, site)
    return DenseOperator(adag @ a)


def build_full_chain_hamiltonian(n_sites: int) -> DenseOperator:
    """Domino Hamiltonian on the full 2^n_sites spin space.

    Sum over triples (n, n+1, n+2) of a_n* a_n (a_{n+1}* + a_{n+1})
    a_{n+2} a_{n+2}*: spin n+1 flips iff spin n is up and spin n+2 down.
    """
    if not 3 <= n_sites <= 14:
        raise ValueError("n_sites must be in [3, 14]")
    dim = 2**n_sites
    H = np.zeros((dim, dim))
    for n in range(n_sites - 2):
        a_n, adag_n = spin_ops(n_sites, n)
        a_m, adag_m = spin_ops(n_sites, n + 1)
        a_k, adag_k = spin_ops(n_sites, n + 2)
        H += (adag_n @ a_n) @ (adag_m + a_m) @ (a_k @ adag_k)
    return DenseOperator(H)


class Propagator:
    """exp(-itH) applied through a cached eigendecomposition."""

    def __init__(self, H: DenseOperator):
        if not H.is_hermitian():
            raise ValueError("Hamiltonian must be Hermitian")
        self.energies, self.modes = np.linalg.eigh(H.mat)

    def apply(self, psi0: np.ndarray, t) -> np.ndarray:
        """Evolve psi0; vectorized over t (result shape (len(t), dim))."""
        c = self.modes.conj().T @ np.asarray(psi0, dtype=complex)
        t = np.asarray(t, dtype=float)
        if t.ndim == 0:
            return self.modes @ (np.exp(-1j * t * self.energies) * c)
        return (self.modes @ (np.exp(-1j * np.outer(t, self.energies)) * c).T).T


def evolve(H: DenseOperator, psi0: np.ndarray, t: float) -> np.ndarray:
    """exp(-itH) psi0 by eigendecomposition."""
    return Propagator(H).apply(psi0, t)


def expectation(psi: np.ndarray, A: DenseOperator):
    """<psi|A|psi>; returns a real number when A is Hermitian."""
    psi = np.asarray(psi, dtype=complex)
    if psi.shape[0] != A.dim:
        raise ValueError("dimension mismatch")
    val = np.vdot(psi, A.mat @ psi)
    if A.is_hermitian():
        return float(val.real)
    return complex(val)
