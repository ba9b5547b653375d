"""Exact arithmetic on roots of unity and integer exponent grids.

The integer layer is the source of truth for every matrix built by this
package; complex matrices are derived from it for verification only.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "DEFAULT_TOL",
    "ExponentMatrix",
    "RootExponent",
    "Tolerance",
    "complex_matrix",
    "complex_vector",
    "is_unitary",
    "is_zeilinger",
    "root_value",
    "to_complex",
]


@dataclass(frozen=True)
class Tolerance:
    """Absolute tolerance for approximate comparisons of O(1) quantities."""

    eps: float = 1e-9

    def __post_init__(self) -> None:
        if not 0.0 < self.eps < 1e-3:
            raise ValueError(f"eps must lie in (0, 1e-3), got {self.eps!r}")


DEFAULT_TOL = Tolerance()

# Quarter-turn roots are returned exactly so that +/-1 and +/-i entries
# survive conversion without rounding noise.
_QUARTER_TURNS = (1 + 0j, 1j, -1 + 0j, -1j)


def root_value(order: int, exponent: int) -> complex:
    """exp(2*pi*i*exponent/order), with the exponent reduced mod order."""
    if order < 1:
        raise ValueError(f"root order must be a positive integer, got {order}")
    e = exponent % order
    if (4 * e) % order == 0:
        return _QUARTER_TURNS[(4 * e) // order]
    return cmath.exp(2j * cmath.pi * e / order)


@dataclass(frozen=True)
class RootExponent:
    """The root of unity omega_order ** exponent, kept as an integer pair.

    Multiplication adds exponents mod order; the inverse negates them.
    """

    order: int
    exponent: int

    def __post_init__(self) -> None:
        if self.order < 1:
            raise ValueError(f"root order must be a positive integer, got {self.order}")
        object.__setattr__(self, "exponent", self.exponent % self.order)

    def __mul__(self, other: "RootExponent") -> "RootExponent":
        if self.order != other.order:
            raise ValueError(f"mixed root orders: {self.order} and {other.order}")
        return RootExponent(self.order, self.exponent + other.exponent)

    def inverse(self) -> "RootExponent":
        return RootExponent(self.order, -self.exponent)

    @property
    def value(self) -> complex:
        return root_value(self.order, self.exponent)


@dataclass(frozen=True)
class ExponentMatrix:
    """A d x d grid of integer exponents standing for a complex matrix.

    Entry (k, j) = e means the matrix element omega_d**e / sqrt(d), where
    omega_d = exp(2*pi*i/d). Exponents are stored reduced mod d.
    """

    d: int
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if self.d < 1:
            raise ValueError(f"dimension must be >= 1, got {self.d}")
        if len(self.entries) != self.d:
            raise ValueError(f"expected {self.d} rows, got {len(self.entries)}")
        reduced = []
        for i, row in enumerate(self.entries):
            if len(row) != self.d:
                raise ValueError(f"row {i} has length {len(row)}, expected {self.d}")
            reduced.append(tuple(int(e) % self.d for e in row))
        object.__setattr__(self, "entries", tuple(reduced))

    @classmethod
    def from_rows(cls, rows) -> "ExponentMatrix":
        rows = [tuple(r) for r in rows]
        return cls(len(rows), tuple(rows))

    def to_array(self) -> np.ndarray:
        return np.array(self.entries, dtype=np.int64)


def to_complex(matrix: ExponentMatrix) -> np.ndarray:
    """The complex matrix with entry (k, j) = root_value(d, e(k, j)) / sqrt(d)."""
    d = matrix.d
    scale = 1.0 / math.sqrt(d)
    out = np.empty((d, d), dtype=complex)
    for k in range(d):
        row = matrix.entries[k]
        for j in range(d):
            out[k, j] = root_value(d, row[j]) * scale
    return out


def complex_matrix(data) -> np.ndarray:
    """Dense complex matrix; NaN and Inf entries are rejected."""
    m = np.asarray(data, dtype=complex)
    if m.ndim != 2:
        raise ValueError(f"expected a 2-d array, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix contains NaN or Inf entries")
    return m


def complex_vector(data) -> np.ndarray:
    """Dense complex vector; NaN and Inf entries are rejected."""
    v = np.asarray(data, dtype=complex).ravel()
    if not np.all(np.isfinite(v)):
        raise ValueError("vector contains NaN or Inf entries")
    return v


def _square(m) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    return m


def is_unitary(m, tol: Tolerance = DEFAULT_TOL) -> bool:
    """True when the max-norm of (M^dagger M - identity) is within eps."""
    m = _square(m)
    gram = m.conj().T @ m
    residual = np.max(np.abs(gram - np.eye(m.shape[0])))
    return float(residual) <= tol.eps


def is_zeilinger(m, tol: Tolerance = DEFAULT_TOL) -> bool:
    """True when M is unitary and every entry has modulus 1/sqrt(d)."""
    m = _square(m)
    d = m.shape[0]
    flat = np.max(np.abs(np.abs(m) - 1.0 / math.sqrt(d)))
    return float(flat) <= tol.eps and is_unitary(m, tol)
