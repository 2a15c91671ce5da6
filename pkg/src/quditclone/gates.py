"""Generalized Pauli (Weyl) operators and their companion gates.

Conventions, with w = exp(2*pi*i/d):
    X|k> = |k+1 mod d>            (shift)
    Z|k> = w^k |k>                (phase)
    F|k> = (1/sqrt d) sum_j w^{jk} |j>
so that X = F^dag Z F. Negative powers are taken as the matching
positive powers (X^-m = X^{d-m}), exact by the order-d group structure.
"""

from dataclasses import dataclass

import numpy as np

from .linalg import DEFAULT_TOL, Register, StateVector, is_unitary


def _check_dim(d: int) -> None:
    if d < 2:
        raise ValueError(f"qudit dimension must be >= 2, got {d}")


def omega(d: int) -> complex:
    _check_dim(d)
    return np.exp(2j * np.pi / d)


def shift_x(d: int) -> np.ndarray:
    """Cyclic shift X: permutation matrix sending |k> to |k+1 mod d>."""
    _check_dim(d)
    m = np.zeros((d, d), dtype=complex)
    for k in range(d):
        m[(k + 1) % d, k] = 1.0
    return m


def phase_z(d: int) -> np.ndarray:
    """Diagonal phase Z = diag(1, w, ..., w^{d-1})."""
    _check_dim(d)
    return np.diag(omega(d) ** np.arange(d))


def fourier(d: int) -> np.ndarray:
    """Discrete Fourier gate, the qudit Hadamard generalization."""
    _check_dim(d)
    j = np.arange(d)
    return omega(d) ** np.outer(j, j) / np.sqrt(d)


def x_power(d: int, k: int) -> np.ndarray:
    """X^k with the exponent reduced mod d."""
    _check_dim(d)
    m = np.zeros((d, d), dtype=complex)
    for j in range(d):
        m[(j + k) % d, j] = 1.0
    return m


def z_power(d: int, l: int) -> np.ndarray:
    """Z^l with the exponent reduced mod d."""
    _check_dim(d)
    return np.diag(omega(d) ** (np.arange(d) * (l % d)))


def controlled_power(u: np.ndarray, d: int, tol: float = DEFAULT_TOL) -> np.ndarray:
    """C(U)|j>|k> = |j> U^j |k> on d^2 (control first)."""
    _check_dim(d)
    u = np.asarray(u, dtype=complex)
    if u.shape != (d, d):
        raise ValueError(f"controlled_power: gate shape {u.shape}, expected ({d}, {d})")
    check = is_unitary(u, tol)
    if not check:
        raise ValueError(
            f"controlled_power: gate is not unitary (deviation {check.max_deviation:.3e})"
        )
    out = np.zeros((d * d, d * d), dtype=complex)
    up = np.eye(d, dtype=complex)
    for j in range(d):
        out[j * d:(j + 1) * d, j * d:(j + 1) * d] = up
        up = u @ up
    return out


def p_controlled(u: np.ndarray, d: int, p: int, tol: float = DEFAULT_TOL) -> np.ndarray:
    """C_p(U)|j>|k> = |j> U^{j delta_{p,j}} |k>: applies U^p only when j = p."""
    _check_dim(d)
    if not 0 <= p < d:
        raise ValueError(f"p_controlled: level {p} out of range for d={d}")
    u = np.asarray(u, dtype=complex)
    if u.shape != (d, d):
        raise ValueError(f"p_controlled: gate shape {u.shape}, expected ({d}, {d})")
    check = is_unitary(u, tol)
    if not check:
        raise ValueError(
            f"p_controlled: gate is not unitary (deviation {check.max_deviation:.3e})"
        )
    out = np.eye(d * d, dtype=complex)
    out[p * d:(p + 1) * d, p * d:(p + 1) * d] = np.linalg.matrix_power(u, p)
    return out


def swap_gate(d: int) -> np.ndarray:
    """SWAP|j>|k> = |k>|j>."""
    _check_dim(d)
    s = np.zeros((d * d, d * d), dtype=complex)
    for j in range(d):
        for k in range(d):
            s[k * d + j, j * d + k] = 1.0
    return s


def bell_amplitudes(d: int) -> np.ndarray:
    """Flat amplitudes of the maximally entangled two-qudit state."""
    _check_dim(d)
    v = np.zeros(d * d, dtype=complex)
    v[np.arange(d) * d + np.arange(d)] = 1.0
    return v / np.sqrt(d)


def bell_state(d: int, wires=("q0", "q1")) -> StateVector:
    """Generalized Bell state (1/sqrt d) sum_p |p>|p>."""
    return StateVector(Register(d, tuple(wires)), bell_amplitudes(d))


@dataclass(frozen=True)
class WeylIndex:
    """Exponent pair (k, l) of a displacement X^k Z^l in dimension d."""

    d: int
    k: int
    l: int

    def __post_init__(self):
        _check_dim(self.d)
        if not (0 <= self.k < self.d and 0 <= self.l < self.d):
            raise ValueError(
                f"Weyl exponents ({self.k}, {self.l}) out of range for d={self.d}"
            )


def weyl_displacement(idx: WeylIndex) -> np.ndarray:
    """The displacement operator X^k Z^l."""
    return x_power(idx.d, idx.k) @ z_power(idx.d, idx.l)


def bell_basis_amplitudes(idx: WeylIndex) -> np.ndarray:
    return np.kron(weyl_displacement(idx), np.eye(idx.d)) @ bell_amplitudes(idx.d)


def bell_basis_state(idx: WeylIndex, wires=("q0", "q1")) -> StateVector:
    """Bell-basis member (X^k Z^l x I)|Phi_d>; orthonormal over all (k, l)."""
    return StateVector(Register(idx.d, tuple(wires)), bell_basis_amplitudes(idx))
