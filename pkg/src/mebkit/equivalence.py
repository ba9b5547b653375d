"""Equivalence of generated maximally entangled bases.

Two generators V1, V2 produce equivalent bases exactly when some column
permutation P1 makes V1 P1^{-1} V2^{-1} a monomial matrix P D. The fast
path compares canonical forms of the exponent grids under row and column
permutations; the exhaustive path scans column permutations and attempts
the monomial split, yielding an explicit witness (P1, P, D) or, after
exhaustion, a certificate of two distinct canonical forms. A verified
witness can be upgraded to explicit local unitaries U1 (x) U2 together
with the index relabeling and phases that carry one basis onto the other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import permutations as _all_perms

import numpy as np

from .chargroup import Decomposition, decompositions, zeilinger_generator
from .exact import DEFAULT_TOL, ExponentMatrix, Tolerance, is_zeilinger, to_complex
from .meb import gcnot_index_map, generate_meb

__all__ = [
    "BilocalWitness",
    "DiagonalUnitary",
    "Equivalent",
    "EquivalenceVerdict",
    "Inequivalent",
    "MAX_CANONICAL_DIM",
    "MAX_CLASSES_DIM",
    "MAX_ORACLE_DIM",
    "MAX_WITNESS_DIM",
    "MebClass",
    "Permutation",
    "canonical_form",
    "enumerate_classes",
    "meb_equivalent",
    "monomial_factor",
    "operator_schmidt_rank",
    "perm_equivalent",
    "witness_residual",
    "witness_to_bilocal",
]

# Search budgets. Canonicalization is cheap on the structured grids this
# package produces; the oracle and witness searches scan d! permutations.
MAX_CANONICAL_DIM = 16
MAX_ORACLE_DIM = 8
MAX_WITNESS_DIM = 6
MAX_CLASSES_DIM = 12


@dataclass(frozen=True)
class Permutation:
    """A bijection on [0, d), stored as its image tuple."""

    image: tuple[int, ...]

    def __post_init__(self) -> None:
        image = tuple(int(i) for i in self.image)
        if sorted(image) != list(range(len(image))):
            raise ValueError(f"not a permutation of 0..{len(image) - 1}: {image}")
        object.__setattr__(self, "image", image)

    @classmethod
    def identity(cls, d: int) -> "Permutation":
        return cls(tuple(range(d)))

    def __call__(self, i: int) -> int:
        return self.image[i]

    def __len__(self) -> int:
        return len(self.image)

    @property
    def is_identity(self) -> bool:
        return all(v == i for i, v in enumerate(self.image))

    def inverse(self) -> "Permutation":
        inv = [0] * len(self.image)
        for i, v in enumerate(self.image):
            inv[v] = i
        return Permutation(tuple(inv))

    def matrix(self) -> np.ndarray:
        """Permutation matrix P with P |j> = |image[j]>."""
        d = len(self.image)
        m = np.zeros((d, d), dtype=complex)
        m[np.array(self.image), np.arange(d)] = 1.0
        return m


@dataclass(frozen=True)
class DiagonalUnitary:
    """A diagonal of unit-modulus phases."""

    phases: tuple[complex, ...]

    def __post_init__(self) -> None:
        phases = tuple(complex(p) for p in self.phases)
        # 1e-3 is the loosest tolerance any caller may use.
        if any(abs(abs(p) - 1.0) > 1e-3 for p in phases):
            raise ValueError("diagonal entries must have unit modulus")
        object.__setattr__(self, "phases", phases)

    def matrix(self) -> np.ndarray:
        return np.diag(np.asarray(self.phases, dtype=complex))


@dataclass(frozen=True)
class Equivalent:
    """Witness: row_perm^{-1} V1 col_perm^{-1} = diag V2."""

    col_perm: Permutation
    row_perm: Permutation
    diag: DiagonalUnitary


@dataclass(frozen=True)
class Inequivalent:
    """Certificate: the two canonical forms differ."""

    canon1: ExponentMatrix
    canon2: ExponentMatrix


EquivalenceVerdict = Equivalent | Inequivalent


def canonical_form(matrix: ExponentMatrix) -> ExponentMatrix:
    """Lexicographically least grid (row-major) over all row and column
    permutations; identical inside an orbit, distinct across orbits.

    Rows are emitted greedily. Column freedom is tracked as an ordered
    partition of columns: columns in the same cell are still
    interchangeable, so the best word a candidate row can contribute
    sorts its values cell by cell, and committing to a row refines the
    partition. Every choice tied for the minimal word is kept (states are
    deduplicated by partition plus used-row set), which makes the greedy
    scan exact rather than heuristic.
    """
    d = matrix.d
    if d > MAX_CANONICAL_DIM:
        raise ValueError(f"canonical form limited to d <= {MAX_CANONICAL_DIM}, got {d}")
    rows = matrix.entries
    frontier: set[tuple[tuple[tuple[int, ...], ...], frozenset[int]]] = {
        ((tuple(range(d)),), frozenset())
    }
    emitted: list[tuple[int, ...]] = []
    for _ in range(d):
        best_word: tuple[int, ...] | None = None
        winners: list[tuple[tuple[tuple[int, ...], ...], frozenset[int], int]] = []
        for cells, used in frontier:
            for r in range(d):
                if r in used:
                    continue
                row = rows[r]
                word = tuple(v for cell in cells for v in sorted(row[c] for c in cell))
                if best_word is None or word < best_word:
                    best_word = word
                    winners = [(cells, used, r)]
                elif word == best_word:
                    winners.append((cells, used, r))
        assert best_word is not None
        emitted.append(best_word)
        refined: set[tuple[tuple[tuple[int, ...], ...], frozenset[int]]] = set()
        for cells, used, r in winners:
            row = rows[r]
            new_cells: list[tuple[int, ...]] = []
            for cell in cells:
                groups: dict[int, list[int]] = {}
                for c in cell:
                    groups.setdefault(row[c], []).append(c)
                new_cells.extend(tuple(groups[v]) for v in sorted(groups))
            refined.add((tuple(new_cells), used | {r}))
        frontier = refined
    return ExponentMatrix(d, tuple(emitted))


def perm_equivalent(first: ExponentMatrix, second: ExponentMatrix) -> bool:
    """True when some row and column permutation maps one grid to the other."""
    if first.d != second.d:
        raise ValueError(f"dimension mismatch: {first.d} vs {second.d}")
    return canonical_form(first).entries == canonical_form(second).entries


def monomial_factor(
    m, tol: Tolerance = DEFAULT_TOL
) -> tuple[Permutation, DiagonalUnitary] | None:
    """Split M = P D into a permutation and a diagonal of phases.

    Succeeds only when every column holds exactly one entry of modulus
    within eps of 1 and all other entries below eps; returns None otherwise.
    """
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    d = m.shape[0]
    eps = tol.eps
    moduli = np.abs(m)
    image: list[int] = []
    phases: list[complex] = []
    for j in range(d):
        big = np.nonzero(moduli[:, j] > eps)[0]
        if big.size != 1 or abs(moduli[big[0], j] - 1.0) > eps:
            return None
        image.append(int(big[0]))
        phases.append(complex(m[big[0], j]))
    if sorted(image) != list(range(d)):
        return None
    return Permutation(tuple(image)), DiagonalUnitary(tuple(phases))


def _validated_pair(first: ExponentMatrix, second: ExponentMatrix, tol: Tolerance):
    if first.d != second.d:
        raise ValueError(f"dimension mismatch: {first.d} vs {second.d}")
    v1 = to_complex(first)
    v2 = to_complex(second)
    if not is_zeilinger(v1, tol) or not is_zeilinger(v2, tol):
        raise ValueError("both generators must be unitary with flat-modulus entries")
    return v1, v2


def meb_equivalent(
    first: ExponentMatrix, second: ExponentMatrix, tol: Tolerance = DEFAULT_TOL
) -> EquivalenceVerdict:
    """Exhaustive equivalence decision for two generators.

    Scans column permutations in lexicographic order and returns the
    first witness for which V1 P1^{-1} V2^{-1} splits as P D; if none
    exists, returns the two canonical forms as an inequivalence
    certificate. Lexicographic order makes the witness deterministic.
    """
    d = first.d
    if d > MAX_ORACLE_DIM:
        raise ValueError(f"exhaustive search limited to d <= {MAX_ORACLE_DIM}, got {d}")
    v1, v2 = _validated_pair(first, second, tol)
    v2_inv = v2.conj().T
    for image in _all_perms(range(d)):
        col_perm = Permutation(image)
        # Column c of V1 P1^{-1} is column inv(c) of V1.
        candidate = v1[:, np.array(col_perm.inverse().image)] @ v2_inv
        split = monomial_factor(candidate, tol)
        if split is not None:
            row_perm, diag = split
            return Equivalent(col_perm=col_perm, row_perm=row_perm, diag=diag)
    return Inequivalent(canon1=canonical_form(first), canon2=canonical_form(second))


def witness_residual(
    first: ExponentMatrix, second: ExponentMatrix, witness: Equivalent
) -> float:
    """Max-norm of row_perm^{-1} V1 col_perm^{-1} - diag V2."""
    v1 = to_complex(first)
    v2 = to_complex(second)
    lhs = witness.row_perm.matrix().T @ v1 @ witness.col_perm.matrix().T
    rhs = witness.diag.matrix() @ v2
    return float(np.max(np.abs(lhs - rhs)))


def operator_schmidt_rank(w, tol: Tolerance = DEFAULT_TOL) -> int:
    """Number of product terms of a bipartite operator on C^d (x) C^d.

    Realigns W[(i,j),(k,l)] to R[(i,k),(j,l)] and counts singular values
    above eps times the largest. Rank 1 means W = U1 (x) U2.
    """
    w = np.asarray(w, dtype=complex)
    if w.ndim != 2 or w.shape[0] != w.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {w.shape}")
    d = math.isqrt(w.shape[0])
    if d * d != w.shape[0]:
        raise ValueError(f"side {w.shape[0]} is not a perfect square")
    r = w.reshape(d, d, d, d).transpose(0, 2, 1, 3).reshape(d * d, d * d)
    sv = np.linalg.svd(r, compute_uv=False)
    if sv[0] == 0.0:
        return 0
    return int(np.sum(sv > tol.eps * sv[0]))


@dataclass(frozen=True, eq=False)
class BilocalWitness:
    """Explicit data instantiating the equivalence of two bases.

    For every (j, k), phases[(j, k)] * (u1 (x) u2) applied to the second
    basis state at pair_map[(j, k)] reproduces the first basis state.
    """

    u1: np.ndarray
    u2: np.ndarray
    pair_map: dict[tuple[int, int], tuple[int, int]]
    phases: dict[tuple[int, int], complex]


def witness_to_bilocal(
    first: ExponentMatrix,
    second: ExponentMatrix,
    witness: Equivalent,
    tol: Tolerance = DEFAULT_TOL,
) -> BilocalWitness:
    """Upgrade an algebraic witness to local unitaries and a relabeling.

    Scans second-side permutations Q until
    W = GCNOT (V1 P1^{-1} V2^{-1} (x) Q^{-1}) GCNOT has operator Schmidt
    rank 1, splits W into U1 (x) U2 via the realignment's dominant
    singular pair, and reads the pair relabeling and phases off the
    overlap matrix of the two bases. Raises if no permutation works,
    which would contradict a verified witness.
    """
    d = first.d
    if d > MAX_WITNESS_DIM:
        raise ValueError(f"witness search limited to d <= {MAX_WITNESS_DIM}, got {d}")
    if witness_residual(first, second, witness) > tol.eps:
        raise ValueError("witness does not verify on these generators")
    v1, v2 = _validated_pair(first, second, tol)
    monomial = v1[:, np.array(witness.col_perm.inverse().image)] @ v2.conj().T
    g = gcnot_index_map(d)

    w = None
    for image in _all_perms(range(d)):
        q_inv = Permutation(image).matrix().T
        candidate = np.kron(monomial, q_inv)[np.ix_(g, g)]
        if operator_schmidt_rank(candidate, tol) == 1:
            w = candidate
            break
    if w is None:
        raise RuntimeError(
            "no second-side permutation yields a product operator; "
            "the witness contradicts the factorization theory"
        )

    realigned = w.reshape(d, d, d, d).transpose(0, 2, 1, 3).reshape(d * d, d * d)
    u, sv, vh = np.linalg.svd(realigned)
    scale = math.sqrt(sv[0])
    u1 = (scale * u[:, 0]).reshape(d, d)
    u2 = (scale * vh[0, :]).reshape(d, d)
    # The split is unique up to a phase swapped between the factors; pin it
    # by making the largest entry of u1 real positive.
    anchor = u1.flat[int(np.argmax(np.abs(u1)))]
    spin = anchor / abs(anchor)
    u1 = u1 / spin
    u2 = u2 * spin

    basis1 = generate_meb(first, tol).states.reshape(d * d, d * d)
    basis2 = generate_meb(second, tol).states.reshape(d * d, d * d)
    overlaps = basis1.conj() @ w @ basis2.T

    pair_map: dict[tuple[int, int], tuple[int, int]] = {}
    phases: dict[tuple[int, int], complex] = {}
    for j in range(d):
        for k in range(d):
            row = overlaps[j * d + k]
            hits = np.nonzero(np.abs(np.abs(row) - 1.0) <= tol.eps)[0]
            if hits.size != 1:
                raise RuntimeError(
                    f"state ({j},{k}) maps onto {hits.size} partner states, expected 1"
                )
            target = int(hits[0])
            pair_map[(j, k)] = (target // d, target % d)
            phase = row[target].conjugate()
            phases[(j, k)] = phase / abs(phase)
    if len(set(pair_map.values())) != d * d:
        raise RuntimeError("pair relabeling is not a bijection")
    return BilocalWitness(u1=u1, u2=u2, pair_map=pair_map, phases=phases)


@dataclass(frozen=True)
class MebClass:
    """An equivalence class of decompositions with its canonical form."""

    members: tuple[Decomposition, ...]
    canon: ExponentMatrix


def enumerate_classes(d: int, tol: Tolerance = DEFAULT_TOL) -> list[MebClass]:
    """Partition the decompositions of d by equivalence of their generators.

    Classes are keyed on canonical forms and ordered by their first
    member in decomposition order. For d <= 6 every verdict is
    cross-checked against the exhaustive search; a disagreement raises,
    since it would mean the two decision routes contradict each other.
    """
    if not 2 <= d <= MAX_CLASSES_DIM:
        raise ValueError(f"class enumeration limited to 2 <= d <= {MAX_CLASSES_DIM}, got {d}")
    decs = decompositions(d)
    gens = [zeilinger_generator(dec) for dec in decs]
    canons = [canonical_form(g) for g in gens]

    if d <= MAX_WITNESS_DIM:
        for a in range(len(decs)):
            for b in range(len(decs)):
                fast = canons[a].entries == canons[b].entries
                oracle = isinstance(meb_equivalent(gens[a], gens[b], tol), Equivalent)
                if fast != oracle:
                    raise RuntimeError(
                        f"internal discrepancy at d={d}: canonical forms say "
                        f"{fast} but the exhaustive search says {oracle} for "
                        f"{decs[a]} vs {decs[b]}"
                    )

    grouped: dict[tuple[tuple[int, ...], ...], list[Decomposition]] = {}
    rep: dict[tuple[tuple[int, ...], ...], ExponentMatrix] = {}
    for dec, canon in zip(decs, canons):
        grouped.setdefault(canon.entries, []).append(dec)
        rep.setdefault(canon.entries, canon)
    return [MebClass(members=tuple(members), canon=rep[key]) for key, members in grouped.items()]
