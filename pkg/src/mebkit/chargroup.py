"""Ordered factorizations of d, mixed-radix index digits, characters of
the associated finite abelian group, and the generator matrices they
induce.

A factorization d = d_1 * d_2 * ... * d_r fixes the group
Z_{d_1} x ... x Z_{d_r}. Group elements are addressed by an index j whose
digits (m_1, ..., m_r) use the prefix-product weights
delta_i = d_1 * ... * d_{i-1}; characters are addressed by an index n
whose digits (n_1, ..., n_r) use the suffix-product weights
D_i = d_{i+1} * ... * d_r. The character value is

    chi^(n)(element j) = omega_d ** (d * sum_i n_i * m_i / d_i),

which is always an integer power of the d-th root of unity.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import prod

from .exact import ExponentMatrix, RootExponent

__all__ = [
    "Decomposition",
    "char_exponent",
    "character",
    "decompositions",
    "dft_generator",
    "digits_j",
    "digits_n",
    "hadamard_generator",
    "zeilinger_generator",
]


@dataclass(frozen=True)
class Decomposition:
    """An ordered factorization of d into factors >= 2.

    The single-factor tuple (d,) is the trivial decomposition, the only
    one available when d is prime.
    """

    factors: tuple[int, ...]

    def __post_init__(self) -> None:
        factors = tuple(int(f) for f in self.factors)
        if not factors:
            raise ValueError("a decomposition needs at least one factor")
        if any(f < 2 for f in factors):
            raise ValueError(f"all factors must be >= 2, got {factors}")
        object.__setattr__(self, "factors", factors)

    @property
    def d(self) -> int:
        return prod(self.factors)

    @property
    def j_weights(self) -> tuple[int, ...]:
        """delta_i = product of the factors before position i."""
        return tuple(prod(self.factors[:i]) for i in range(len(self.factors)))

    @property
    def n_weights(self) -> tuple[int, ...]:
        """D_i = product of the factors after position i."""
        return tuple(prod(self.factors[i + 1 :]) for i in range(len(self.factors)))

    def __str__(self) -> str:
        return "[" + ",".join(str(f) for f in self.factors) + "]"


def _ordered_factorizations(m: int) -> list[tuple[int, ...]]:
    seqs: list[tuple[int, ...]] = [(m,)]
    for a in range(2, m):
        if m % a == 0:
            seqs.extend((a,) + tail for tail in _ordered_factorizations(m // a))
    return seqs


def decompositions(d: int) -> list[Decomposition]:
    """All ordered factorizations of d with factors >= 2.

    The trivial decomposition (d,) comes first; the nontrivial ones follow
    in lexicographic order of their factor tuples.
    """
    if d < 2:
        raise ValueError(f"dimension must be >= 2, got {d}")
    nontrivial = sorted(seq for seq in _ordered_factorizations(d) if len(seq) > 1)
    return [Decomposition((d,))] + [Decomposition(seq) for seq in nontrivial]


def digits_j(j: int, dec: Decomposition) -> tuple[int, ...]:
    """Digits (m_1, ..., m_r) of j under the prefix weights, m_i in [0, d_i)."""
    if not 0 <= j < dec.d:
        raise ValueError(f"index {j} out of range [0, {dec.d})")
    return tuple((j // w) % f for f, w in zip(dec.factors, dec.j_weights))


def digits_n(n: int, dec: Decomposition) -> tuple[int, ...]:
    """Digits (n_1, ..., n_r) of n under the suffix weights, n_i in [0, d_i)."""
    if not 0 <= n < dec.d:
        raise ValueError(f"index {n} out of range [0, {dec.d})")
    return tuple((n // w) % f for f, w in zip(dec.factors, dec.n_weights))


def char_exponent(n: int, j: int, dec: Decomposition) -> int:
    """The pairing (sum_i (d/d_i) * n_i * m_i) mod d of indices n and j."""
    ms = digits_j(j, dec)
    ns = digits_n(n, dec)
    d = dec.d
    return sum((d // f) * ni * mi for f, ni, mi in zip(dec.factors, ns, ms)) % d


def character(n: int, j: int, dec: Decomposition) -> RootExponent:
    """The n-th character evaluated on the j-th group element."""
    return RootExponent(dec.d, char_exponent(n, j, dec))


def zeilinger_generator(dec: Decomposition) -> ExponentMatrix:
    """Character matrix of the group fixed by dec.

    Column j lists the j-th character over all group elements, so the
    induced complex matrix maps |j> to the j-th state of the character
    family. For the trivial decomposition this reduces to dft_generator(d).
    """
    d = dec.d
    rows = [[char_exponent(j, k, dec) for j in range(d)] for k in range(d)]
    return ExponentMatrix.from_rows(rows)


def dft_generator(d: int) -> ExponentMatrix:
    """Discrete Fourier transform exponents, entry (j, k) = j*k mod d."""
    if d < 1:
        raise ValueError(f"dimension must be >= 1, got {d}")
    return ExponentMatrix.from_rows([[(j * k) % d for k in range(d)] for j in range(d)])


def hadamard_generator(n: int) -> ExponentMatrix:
    """Sign pattern of the n-fold Kronecker power of the 2x2 Hadamard matrix.

    The result has dimension d = 2**n with every entry 0 or d/2 (values
    +1/sqrt(d) and -1/sqrt(d)), built by the recursion H_{n+1} = H_1 (x) H_n.
    """
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    base = ((0, 0), (0, 1))
    signs = base
    for _ in range(n - 1):
        size = len(signs)
        grown = [[0] * (2 * size) for _ in range(2 * size)]
        for a in (0, 1):
            for b in (0, 1):
                for j in range(size):
                    for k in range(size):
                        grown[a * size + j][b * size + k] = (base[a][b] + signs[j][k]) % 2
        signs = tuple(tuple(row) for row in grown)
    d = 2**n
    return ExponentMatrix.from_rows([[s * (d // 2) for s in row] for row in signs])
