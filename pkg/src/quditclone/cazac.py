"""Zadoff-Chu sequences and the correlation analytics behind them.

The encryption coefficients are the Chu sequence
    c(k) = exp(-i pi k (k + d%2) / d),
the root u=1, offset q=0 member of the Zadoff-Chu family. Every valid
member has unit modulus, a delta-function periodic autocorrelation and a
perfectly flat DFT spectrum; those three facts carry all the unitarity
proofs downstream.
"""

import math
from dataclasses import dataclass

import numpy as np

DEFAULT_TOL = 1e-10


def _check_dim(d: int) -> None:
    if d < 2:
        raise ValueError(f"sequence length must be >= 2, got {d}")


@dataclass(frozen=True)
class ChuSequence:
    """A length-d Zadoff-Chu coefficient sequence."""

    d: int
    u: int
    q: int
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=complex).reshape(-1)
        object.__setattr__(self, "values", vals)
        if vals.size != self.d:
            raise ValueError("value count does not match d")
        if np.max(np.abs(np.abs(vals) - 1.0)) > DEFAULT_TOL:
            raise ValueError("sequence entries must have unit modulus")
        worst = max(
            abs(periodic_autocorr(vals, s)) for s in range(1, self.d)
        )
        if worst > DEFAULT_TOL:
            raise ValueError(
                f"sequence is not zero-autocorrelation (worst {worst:.3e})"
            )


def zadoff_chu(d: int, u: int, q: int) -> ChuSequence:
    """Zadoff-Chu sequence zc(k) = exp(-i pi u k (k + c_f + 2q) / d).

    c_f = d mod 2; requires gcd(u, d) = 1.
    """
    _check_dim(d)
    if math.gcd(u, d) != 1:
        raise ValueError(f"zadoff_chu: gcd(u={u}, d={d}) must be 1")
    k = np.arange(d)
    cf = d % 2
    vals = np.exp(-1j * np.pi * u * k * (k + cf + 2 * q) / d)
    return ChuSequence(d, u, q, vals)


def chu(d: int) -> ChuSequence:
    """The Chu sequence c(k) = exp(-i pi k (k + d%2) / d) (u=1, q=0)."""
    return zadoff_chu(d, 1, 0)


@dataclass(frozen=True)
class CoeffGrid:
    """The d x d coefficient grid c_kl = c(k) * c(l)."""

    d: int
    entries: np.ndarray

    def __post_init__(self):
        ent = np.asarray(self.entries, dtype=complex)
        object.__setattr__(self, "entries", ent)
        if ent.shape != (self.d, self.d):
            raise ValueError("grid shape does not match d")
        if np.max(np.abs(np.abs(ent) - 1.0)) > DEFAULT_TOL:
            raise ValueError("grid entries must have unit modulus")


def coeff_grid(d: int) -> CoeffGrid:
    c = chu(d).values
    return CoeffGrid(d, np.outer(c, c))


def periodic_autocorr(seq, shift: int) -> complex:
    """(1/L) sum_k seq[k] * conj(seq[(k+shift) mod L])."""
    seq = np.asarray(seq, dtype=complex).reshape(-1)
    n = seq.size
    if not 0 <= shift < n:
        raise ValueError(f"shift {shift} out of range for length {n}")
    return complex(np.sum(seq * np.conj(np.roll(seq, -shift))) / n)


def autocorr2d(d: int) -> np.ndarray:
    """Magnitudes of the 2D periodic autocorrelation of the c_kl grid.

    Entry (m, n) is |(1/d^2) sum_{k,l} c_kl conj(c_{k+m, l+n})| with
    cyclic index shifts; the grid is a delta at (0, 0).
    """
    g = coeff_grid(d).entries
    out = np.empty((d, d))
    for m in range(d):
        for n in range(d):
            shifted = np.roll(np.roll(g, -m, axis=0), -n, axis=1)
            out[m, n] = abs(np.sum(g * np.conj(shifted)) / (d * d))
    return out


def gauss_sum(d: int, m: int) -> complex:
    """sum_j c(j+m) * conj(c(j)) with j+m the literal integer sum.

    Equals d when m = 0 and vanishes for every m in {1..d-1}; this is
    the cancellation that makes the coefficient-weighted operator sums
    unitary.
    """
    _check_dim(d)
    if not 0 <= m < d:
        raise ValueError(f"m {m} out of range for d={d}")
    cf = d % 2
    j = np.arange(d)
    terms = np.exp(-1j * np.pi * (j + m) * ((j + m) + cf) / d) * np.exp(
        1j * np.pi * j * (j + cf) / d
    )
    return complex(np.sum(terms))


def autocorr_csv(d: int) -> str:
    """CSV of the autocorr2d grid: header m,n,magnitude, one row per shift."""
    grid = autocorr2d(d)
    lines = ["m,n,magnitude"]
    for m in range(d):
        for n in range(d):
            lines.append(f"{m},{n},{grid[m, n]!s}")
    return "\n".join(lines) + "\n"
