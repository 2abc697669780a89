"""Pauli strings, weighted Pauli-sum Hamiltonians, and their text format.

A Hamiltonian is a weighted sum of Pauli strings

    H = sum_i  h_i * P_i,      P_i in {I, X, Y, Z}^n

stored as an ordered list of terms. Character i of a string acts on
qubit i, and qubit 0 is the least-significant bit of a state-vector
index (this convention is shared by every module in the package).

Text file format (UTF-8): one term per line, ``<coefficient> <string>``
separated by spaces or tabs; lines whose first non-blank character is
``#`` are comments. Coefficients are written with 17 significant digits
so that serialize/parse round-trips double precision exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from typing import Iterable, Iterator, Sequence

import numpy as np

PAULI_CHARS = "IXYZ"

_MAX_DENSE_QUBITS = 12


class HamiltonianFormatError(ValueError):
    """Raised when Hamiltonian text cannot be parsed."""


class PauliString:
    """An immutable tensor product of single-qubit Pauli factors.

    Besides the factor string itself, precomputes the bit masks used by
    the state-vector engine: ``x_mask`` flags qubits whose factor flips
    the computational basis (X or Y), ``zy_mask`` flags qubits whose
    factor contributes a basis-dependent sign (Z or Y).
    """

    __slots__ = ("factors", "x_mask", "zy_mask", "num_y", "_apply_cache")

    def __init__(self, factors: str):
        bad = set(factors) - set(PAULI_CHARS)
        if bad:
            raise HamiltonianFormatError(
                f"illegal Pauli character(s) {sorted(bad)} in {factors!r}"
            )
        if not factors:
            raise HamiltonianFormatError("empty Pauli string")
        self.factors = factors
        x_mask = 0
        zy_mask = 0
        num_y = 0
        for i, ch in enumerate(factors):
            if ch in "XY":
                x_mask |= 1 << i
            if ch in "ZY":
                zy_mask |= 1 << i
            if ch == "Y":
                num_y += 1
        self.x_mask = x_mask
        self.zy_mask = zy_mask
        self.num_y = num_y
        self._apply_cache: dict = {}

    @property
    def n(self) -> int:
        return len(self.factors)

    @property
    def weight(self) -> int:
        """Number of non-identity factors."""
        return sum(1 for ch in self.factors if ch != "I")

    @property
    def xy_count(self) -> int:
        """Number of X or Y factors (drives basis-change gate counts)."""
        return (self.x_mask).bit_count()

    @property
    def is_identity(self) -> bool:
        return self.x_mask == 0 and self.zy_mask == 0

    def __eq__(self, other) -> bool:
        return isinstance(other, PauliString) and self.factors == other.factors

    def __hash__(self) -> int:
        return hash(self.factors)

    def __repr__(self) -> str:
        return f"PauliString({self.factors!r})"


@dataclass(frozen=True)
class PauliTerm:
    """One weighted Pauli string ``coefficient * string``."""

    coefficient: float
    string: PauliString

    def __post_init__(self):
        if not np.isfinite(self.coefficient):
            raise ValueError(f"non-finite coefficient {self.coefficient!r}")


class Hamiltonian:
    """Ordered list of Pauli terms acting on a fixed number of qubits.

    Term order is significant: it is preserved by the text format, and
    the detector-coupling product in the gradient protocol applies
    terms in this order.
    """

    def __init__(self, terms: Iterable[PauliTerm]):
        terms = tuple(terms)
        if not terms:
            raise ValueError("a Hamiltonian needs at least one term")
        n = terms[0].string.n
        for t in terms:
            if t.string.n != n:
                raise ValueError(
                    f"inconsistent string lengths: expected {n}, "
                    f"got {t.string.n} in {t.string.factors!r}"
                )
        self.terms = terms
        self.n = n

    @property
    def num_terms(self) -> int:
        return len(self.terms)

    @property
    def one_norm(self) -> float:
        """Sum of absolute coefficients; gauges the coupling-validity bound."""
        return float(sum(abs(t.coefficient) for t in self.terms))

    def __iter__(self) -> Iterator[PauliTerm]:
        return iter(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __repr__(self) -> str:
        return f"Hamiltonian(n={self.n}, terms={self.num_terms})"

    def to_matrix(self) -> np.ndarray:
        """Dense 2^n x 2^n matrix. Guarded to n <= 12."""
        if self.n > _MAX_DENSE_QUBITS:
            raise ValueError(f"dense matrix limited to n <= {_MAX_DENSE_QUBITS}")
        dim = 1 << self.n
        cols = np.arange(dim)
        mat = np.zeros((dim, dim), dtype=complex)
        for term in self.terms:
            p = term.string
            rows = cols ^ p.x_mask
            signs = 1.0 - 2.0 * _parity(cols & p.zy_mask)
            mat[rows, cols] += term.coefficient * (1j**p.num_y) * signs
        return mat

    def ground_energy(self) -> float:
        """Smallest eigenvalue from dense diagonalization (n <= 12)."""
        return float(np.linalg.eigvalsh(self.to_matrix())[0])


def _parity(values: np.ndarray) -> np.ndarray:
    return (np.bitwise_count(values) & 1).astype(np.float64)


@dataclass(frozen=True)
class RandomHamSpec:
    """Recipe for a random Hamiltonian: uniform strings, Gaussian weights."""

    n: int
    j: int
    mu: float
    sigma: float
    seed: int
    allow_identity: bool = False

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"qubit count must be >= 1, got {self.n}")
        if self.j < 1:
            raise ValueError(f"term count must be >= 1, got {self.j}")
        if self.sigma < 0:
            raise ValueError(f"sigma must be >= 0, got {self.sigma}")


def gen_random_hamiltonian(spec: RandomHamSpec) -> Hamiltonian:
    """Draw ``spec.j`` terms: strings uniform over the 4^n products,
    coefficients i.i.d. Normal(mu, sigma). Deterministic given the seed.

    The all-identity string is redrawn unless ``allow_identity``;
    duplicate strings between terms are kept (the term count is the
    complexity knob and must not silently shrink).
    """
    rng = np.random.default_rng(np.random.SeedSequence(spec.seed & _SEED_MASK))
    strings = []
    for _ in range(spec.j):
        while True:
            letters = rng.integers(0, 4, size=spec.n)
            if spec.allow_identity or letters.any():
                break
        strings.append("".join(PAULI_CHARS[v] for v in letters))
    coeffs = rng.normal(spec.mu, spec.sigma, size=spec.j)
    return Hamiltonian(
        PauliTerm(float(c), PauliString(s)) for c, s in zip(coeffs, strings)
    )


_SEED_MASK = (1 << 64) - 1


def parse_hamiltonian(text: str) -> Hamiltonian:
    """Parse the one-term-per-line text format. See module docstring."""
    terms = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        if len(fields) != 2:
            raise HamiltonianFormatError(
                f"line {lineno}: expected '<coefficient> <string>', got {raw!r}"
            )
        try:
            coeff = float(fields[0])
        except ValueError:
            raise HamiltonianFormatError(
                f"line {lineno}: malformed coefficient {fields[0]!r}"
            ) from None
        if not np.isfinite(coeff):
            raise HamiltonianFormatError(
                f"line {lineno}: non-finite coefficient {fields[0]!r}"
            )
        try:
            string = PauliString(fields[1])
        except HamiltonianFormatError as exc:
            raise HamiltonianFormatError(f"line {lineno}: {exc}") from None
        terms.append(PauliTerm(coeff, string))
    if not terms:
        raise HamiltonianFormatError("no terms found in input")
    try:
        return Hamiltonian(terms)
    except ValueError as exc:
        raise HamiltonianFormatError(str(exc)) from None


def serialize_hamiltonian(h: Hamiltonian, header: Sequence[str] = ()) -> str:
    """Render a Hamiltonian in the text format, preserving term order.

    ``header`` lines are emitted as leading comments.
    """
    lines = [f"# {line}" for line in header]
    lines.extend(f"{t.coefficient:.17g} {t.string.factors}" for t in h.terms)
    return "\n".join(lines) + "\n"


def load_hamiltonian(path) -> Hamiltonian:
    with open(path, encoding="utf-8") as fh:
        return parse_hamiltonian(fh.read())


# Minimal-basis molecular-hydrogen Hamiltonian bundled with the package
# (4 qubits, 15 terms), plus its dense-diagonalization ground energy.
H2_BUNDLED_NAME = "h2"
H2_REFERENCE_GROUND_ENERGY = -1.8509821284448642

_BUNDLED_FILES = {H2_BUNDLED_NAME: "h2_sto3g_4q.txt"}


def bundled_hamiltonian(name: str = H2_BUNDLED_NAME) -> Hamiltonian:
    """Load a Hamiltonian shipped with the package."""
    if name not in _BUNDLED_FILES:
        raise ValueError(
            f"unknown bundled Hamiltonian {name!r}; "
            f"available: {sorted(_BUNDLED_FILES)}"
        )
    text = (
        resources.files("vqa_lab.data")
        .joinpath(_BUNDLED_FILES[name])
        .read_text(encoding="utf-8")
    )
    return parse_hamiltonian(text)
