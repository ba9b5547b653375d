"""Maximally entangled bases of two qudits.

A generator matrix V with flat-modulus unitary entries turns the product
basis |j>|k> into the d^2 states GCNOT (V x 1) |j>|k>, where
GCNOT |j>|k> = |j>|j - k mod d>. This module builds those states and
checks the properties that make them a maximally entangled basis:
orthonormality, flat reduced spectra, and the group law obeyed by the
generator columns under componentwise multiplication.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .chargroup import dft_generator
from .exact import DEFAULT_TOL, ExponentMatrix, Tolerance, is_zeilinger, to_complex

__all__ = [
    "GroupReport",
    "MebBasis",
    "MebReport",
    "bell_basis",
    "entropy_bits",
    "gcnot",
    "gcnot_index_map",
    "gcnot_matrix",
    "generate_meb",
    "generator_columns",
    "group_verify",
    "identity_element",
    "reduced_density",
    "vector_mul",
    "verify_meb",
]


def _bipartite_dim(size: int) -> int:
    d = math.isqrt(size)
    if d * d != size:
        raise ValueError(f"state length {size} is not a perfect square")
    return d


def gcnot_index_map(d: int) -> np.ndarray:
    """Index permutation p with p[j*d + k] = j*d + (j - k) mod d."""
    if d < 1:
        raise ValueError(f"dimension must be >= 1, got {d}")
    idx = np.arange(d * d)
    j, k = idx // d, idx % d
    return j * d + (j - k) % d


def gcnot(state) -> np.ndarray:
    """Apply |j>|k> -> |j>|j - k mod d> to a bipartite state vector.

    The gate is its own inverse: applying it twice returns the input.
    """
    s = np.asarray(state, dtype=complex).ravel()
    d = _bipartite_dim(s.size)
    out = np.empty_like(s)
    out[gcnot_index_map(d)] = s
    return out


def gcnot_matrix(d: int) -> np.ndarray:
    """The gate as a d^2 x d^2 permutation matrix."""
    p = gcnot_index_map(d)
    m = np.zeros((d * d, d * d), dtype=complex)
    m[p, np.arange(d * d)] = 1.0
    return m


@dataclass(frozen=True, eq=False)
class MebBasis:
    """The d^2 bipartite states produced from a generator, indexed (j, k).

    states[j, k] is a flat length-d^2 vector; pair (a, b) sits at a*d + b.
    """

    d: int
    states: np.ndarray
    generator: ExponentMatrix | None = None

    def __post_init__(self) -> None:
        expected = (self.d, self.d, self.d * self.d)
        if self.states.shape != expected:
            raise ValueError(f"states must have shape {expected}, got {self.states.shape}")
        if not np.all(np.isfinite(self.states)):
            raise ValueError("states contain NaN or Inf amplitudes")

    def state(self, j: int, k: int) -> np.ndarray:
        return self.states[j, k]

    def __iter__(self):
        for j in range(self.d):
            for k in range(self.d):
                yield (j, k), self.states[j, k]


def generate_meb(generator: ExponentMatrix, tol: Tolerance = DEFAULT_TOL) -> MebBasis:
    """Build the basis GCNOT (V x 1) |j>|k> from a flat-modulus unitary V.

    State (j, k) carries amplitude V[m, j] at pair position (m, (m - k) mod d).
    """
    v = to_complex(generator)
    if not is_zeilinger(v, tol):
        raise ValueError("generator must be unitary with all entries of modulus 1/sqrt(d)")
    d = generator.d
    states = np.zeros((d, d, d * d), dtype=complex)
    m = np.arange(d)
    for j in range(d):
        for k in range(d):
            states[j, k, m * d + (m - k) % d] = v[m, j]
    return MebBasis(d=d, states=states, generator=generator)


def bell_basis() -> MebBasis:
    """The four qubit Bell states 2^{-1/2} sum_m (-1)^{jm} |m>|m xor k>."""
    amp = 1.0 / math.sqrt(2.0)
    states = np.zeros((2, 2, 4), dtype=complex)
    for j in range(2):
        for k in range(2):
            for m in range(2):
                states[j, k, m * 2 + (m ^ k)] = amp * (-1.0) ** (j * m)
    return MebBasis(d=2, states=states, generator=dft_generator(2))


def vector_mul(a, b) -> np.ndarray:
    """Componentwise product scaled by sqrt(d); not renormalized."""
    a = np.asarray(a, dtype=complex).ravel()
    b = np.asarray(b, dtype=complex).ravel()
    if a.size != b.size:
        raise ValueError(f"dimension mismatch: {a.size} vs {b.size}")
    return math.sqrt(a.size) * a * b


def identity_element(d: int) -> np.ndarray:
    """The unit for vector_mul: the flat state with amplitudes 1/sqrt(d)."""
    return np.full(d, 1.0 / math.sqrt(d), dtype=complex)


def generator_columns(generator: ExponentMatrix) -> list[np.ndarray]:
    """The columns of the induced complex matrix, as a family of states."""
    v = to_complex(generator)
    return [v[:, j].copy() for j in range(generator.d)]


def _phase_distance(u: np.ndarray, v: np.ndarray) -> float:
    """Max-norm of u - e^{ia} v with the phase a aligned via <v|u>.

    Computed from the difference vector itself; the inner-product formula
    sqrt(|u|^2 + |v|^2 - 2|<v,u>|) loses half the float precision to
    cancellation and would turn 1e-16 noise into 1e-8.
    """
    ip = np.vdot(v, u)
    phase = ip / abs(ip) if abs(ip) > 0.0 else 1.0
    return float(np.max(np.abs(u - phase * v)))


@dataclass(frozen=True)
class GroupReport:
    """Outcome of the five group-law checks on a state family."""

    closure: bool
    identity_present: bool
    inverses: bool
    power_condition: bool
    commutative: bool
    failures: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return (
            self.closure
            and self.identity_present
            and self.inverses
            and self.power_condition
            and self.commutative
        )


def group_verify(family, tol: Tolerance = DEFAULT_TOL) -> GroupReport:
    """Check that d states of dimension d form an abelian group under vector_mul.

    Matching is up to a global phase: a vector counts as a family member
    (or as the unit) when the phase-minimized distance is within eps.
    Failures are reported, not raised.
    """
    states = [np.asarray(s, dtype=complex).ravel() for s in family]
    d = len(states)
    if d == 0 or any(s.size != d for s in states):
        raise ValueError("family must contain d states of dimension d")
    eps = tol.eps
    unit = identity_element(d)
    failures: list[str] = []

    def in_family(v: np.ndarray) -> bool:
        return any(_phase_distance(v, s) <= eps for s in states)

    closure = True
    for a in range(d):
        for b in range(d):
            if not in_family(vector_mul(states[a], states[b])):
                closure = False
                failures.append(f"closure: product of members {a} and {b} left the family")

    identity_present = any(_phase_distance(unit, s) <= eps for s in states)
    if not identity_present:
        failures.append("identity: the flat unit vector is not in the family")

    inverses = True
    for a in range(d):
        if not any(_phase_distance(vector_mul(states[a], s), unit) <= eps for s in states):
            inverses = False
            failures.append(f"inverses: member {a} has no inverse in the family")

    power_condition = True
    for a in range(d):
        acc = states[a]
        for _ in range(d - 1):
            acc = vector_mul(acc, states[a])
        if _phase_distance(acc, unit) > eps:
            power_condition = False
            failures.append(f"power: member {a} to the d-th power is not the unit")

    commutative = True
    for a in range(d):
        for b in range(a + 1, d):
            gap = np.max(np.abs(vector_mul(states[a], states[b]) - vector_mul(states[b], states[a])))
            if gap > eps:
                commutative = False
                failures.append(f"commutativity: members {a} and {b} do not commute")

    return GroupReport(
        closure=closure,
        identity_present=identity_present,
        inverses=inverses,
        power_condition=power_condition,
        commutative=commutative,
        failures=tuple(failures),
    )


def reduced_density(state) -> np.ndarray:
    """Trace out the second subsystem of a bipartite pure state."""
    s = np.asarray(state, dtype=complex).ravel()
    d = _bipartite_dim(s.size)
    psi = s.reshape(d, d)
    return psi @ psi.conj().T


def entropy_bits(rho, tol: Tolerance = DEFAULT_TOL) -> float:
    """Von Neumann entropy -sum(lam * log2 lam) of a density matrix.

    The input must be Hermitian, positive semidefinite, and of unit trace
    within eps; eigenvalues at or below eps count as exact zeros.
    """
    r = np.asarray(rho, dtype=complex)
    if r.ndim != 2 or r.shape[0] != r.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {r.shape}")
    eps = tol.eps
    if np.max(np.abs(r - r.conj().T)) > eps:
        raise ValueError("matrix is not Hermitian")
    if abs(np.trace(r).real - 1.0) > eps or abs(np.trace(r).imag) > eps:
        raise ValueError("matrix does not have unit trace")
    lam = np.linalg.eigvalsh(r)
    if lam[0] < -eps:
        raise ValueError("matrix is not positive semidefinite")
    lam = lam[lam > eps]
    return float(-(lam * np.log2(lam)).sum())


@dataclass(frozen=True)
class MebReport:
    """Outcome of the basis checks; generator_flat_ok is None when the
    basis carries no generator."""

    gram_ok: bool
    entangled_ok: bool
    generator_flat_ok: bool | None
    failures: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return self.gram_ok and self.entangled_ok and self.generator_flat_ok is not False


def verify_meb(basis: MebBasis, tol: Tolerance = DEFAULT_TOL) -> MebReport:
    """Check orthonormality and maximal entanglement of all d^2 states.

    When the basis carries its generator, the flat-modulus condition
    |V[k, j]| = 1/sqrt(d) is checked as well. All failures are collected
    rather than short-circuiting, so the report can diagnose edited bases.
    """
    d = basis.d
    eps = tol.eps
    failures: list[str] = []

    flat = basis.states.reshape(d * d, d * d)
    gram = flat @ flat.conj().T
    gram_ok = bool(np.max(np.abs(gram - np.eye(d * d))) <= eps)
    if not gram_ok:
        worst = np.unravel_index(np.argmax(np.abs(gram - np.eye(d * d))), gram.shape)
        failures.append(f"gram: worst deviation at state pair {worst}")

    target = math.log2(d)
    entangled_ok = True
    for j in range(d):
        for k in range(d):
            try:
                ent = entropy_bits(reduced_density(basis.states[j, k]), tol)
            except ValueError as exc:
                entangled_ok = False
                failures.append(f"entanglement: state ({j},{k}) invalid ({exc})")
                continue
            if abs(ent - target) > eps:
                entangled_ok = False
                failures.append(f"entanglement: state ({j},{k}) has entropy {ent:.6f}, want {target:.6f}")

    generator_flat_ok: bool | None = None
    if basis.generator is not None:
        v = to_complex(basis.generator)
        generator_flat_ok = bool(np.max(np.abs(np.abs(v) - 1.0 / math.sqrt(d))) <= eps)
        if not generator_flat_ok:
            failures.append("generator: some entry deviates from modulus 1/sqrt(d)")

    return MebReport(
        gram_ok=gram_ok,
        entangled_ok=entangled_ok,
        generator_flat_ok=generator_flat_ok,
        failures=tuple(failures),
    )
