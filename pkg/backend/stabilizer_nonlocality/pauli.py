"""
Pauli operators in binary symplectic form.

An N-site operator is stored as

    w^phase * (X^{x_1} Z^{z_1}) (x) ... (x) (X^{x_N} Z^{z_N})

with exponents over Z_d and ``w = exp(i*pi/d)`` the primitive 2d-th root of
unity, so the phase lives in Z_{2d} for every d. For qubits ``w = i`` and
``Y = i X Z`` is stored as ``x = z = 1`` with one unit of phase.

Conventions shared with the dense oracle:
    - X|j> = |j + 1 mod d>,  Z|j> = w^{2j}|j>
    - site 1 is the leftmost tensor factor (most significant digit)

Functions:
    - parse_pauli: text -> PauliOperator (qubit and qudit grammars)
    - to_text: canonical printer, inverse of parse_pauli
    - multiply: phase-exact group product
    - commutation_phase: symplectic form, 0 iff the operators commute
    - restrict: sub-operator on a set of sites (phase dropped)
    - site_pauli: single-site letter (qubits) or exponent pair (qudits)
"""

from __future__ import annotations

import itertools
import logging
import re
from collections.abc import Iterable
from dataclasses import dataclass
from functools import lru_cache, reduce

import numpy as np

from .exceptions import DimensionError, DomainError, ParseError

logger = logging.getLogger(__name__)

#: 1-based site index
SiteLabel = int

_LETTER_BITS: dict[str, tuple[int, int]] = {
    "I": (0, 0),
    "X": (1, 0),
    "Z": (0, 1),
    "Y": (1, 1),
}
_BITS_LETTER = {bits: letter for letter, bits in _LETTER_BITS.items()}

_TENSOR_SEPARATORS = ("⊗", "*")


@dataclass(frozen=True)
class PauliOperator:
    """Immutable N-site generalized Pauli operator.

    Attributes:
        d: Local dimension (2 for qubits).
        x: X exponents per site, reduced mod d.
        z: Z exponents per site, reduced mod d.
        phase: Exponent of ``exp(i*pi/d)``, reduced mod 2d.
    """

    d: int
    x: tuple[int, ...]
    z: tuple[int, ...]
    phase: int = 0

    def __post_init__(self) -> None:
        if self.d < 2:
            raise DomainError(f"local dimension must be >= 2, got {self.d}")
        if len(self.x) != len(self.z):
            raise DimensionError(
                f"x has {len(self.x)} sites but z has {len(self.z)} sites"
            )
        if len(self.x) == 0:
            raise DomainError("an operator needs at least one site")
        object.__setattr__(self, "x", tuple(int(v) % self.d for v in self.x))
        object.__setattr__(self, "z", tuple(int(v) % self.d for v in self.z))
        object.__setattr__(self, "phase", int(self.phase) % (2 * self.d))

    # ------------------------------------------------------------------
    # Constructors
    # ------------------------------------------------------------------

    @classmethod
    def identity(cls, n_sites: int, d: int = 2) -> PauliOperator:
        return cls(d=d, x=(0,) * n_sites, z=(0,) * n_sites, phase=0)

    @classmethod
    def from_letters(cls, letters: str, sign: int = 0) -> PauliOperator:
        """Build the Hermitian qubit operator ``(-1)^sign * letters``.

        Example:
            >>> PauliOperator.from_letters("YY", sign=1).to_text()
            '-YY'
        """
        x: list[int] = []
        z: list[int] = []
        for column, letter in enumerate(letters, start=1):
            if letter not in _LETTER_BITS:
                raise ParseError(f"invalid Pauli letter {letter!r}", column=column)
            bx, bz = _LETTER_BITS[letter]
            x.append(bx)
            z.append(bz)
        y_count = sum(1 for bx, bz in zip(x, z) if bx and bz)
        return cls(d=2, x=tuple(x), z=tuple(z), phase=2 * (sign % 2) + y_count)

    @classmethod
    def single_site(
        cls, letter: str, site: SiteLabel, n_sites: int, sign: int = 0
    ) -> PauliOperator:
        """Qubit operator acting as ``letter`` on one site, identity elsewhere."""
        check_site(site, n_sites)
        letters = ["I"] * n_sites
        letters[site - 1] = letter
        return cls.from_letters("".join(letters), sign=sign)

    # ------------------------------------------------------------------
    # Views
    # ------------------------------------------------------------------

    @property
    def n_sites(self) -> int:
        return len(self.x)

    @property
    def phase_modulus(self) -> int:
        return 2 * self.d

    @property
    def is_qubit(self) -> bool:
        return self.d == 2

    @property
    def weight(self) -> int:
        """Number of sites carrying a non-identity factor."""
        return sum(1 for a, b in zip(self.x, self.z) if a or b)

    @property
    def y_count(self) -> int:
        return sum(1 for a, b in zip(self.x, self.z) if a and b)

    def is_identity(self) -> bool:
        """True when all exponents vanish (any phase)."""
        return not any(self.x) and not any(self.z)

    @property
    def letters(self) -> str:
        """Per-site letters of a qubit operator, Y where x = z = 1."""
        self._require_qubit("letters")
        return "".join(_BITS_LETTER[(a, b)] for a, b in zip(self.x, self.z))

    def is_hermitian(self) -> bool:
        """Qubit Hermiticity: the phase minus the Y count is even."""
        self._require_qubit("is_hermitian")
        return (self.phase - self.y_count) % 2 == 0

    @property
    def hermitian_sign(self) -> int:
        """Sign bit s with ``self == (-1)^s * letters`` for a Hermitian qubit operator."""
        if not self.is_hermitian():
            raise DomainError(f"{self.to_text()} is not Hermitian")
        return ((self.phase - self.y_count) % 4) // 2

    def symplectic_bits(self) -> int:
        """Pack a qubit operator as an int: x on bits 0..n-1, z on bits n..2n-1."""
        self._require_qubit("symplectic_bits")
        value = 0
        for s, (a, b) in enumerate(zip(self.x, self.z)):
            if a:
                value |= 1 << s
            if b:
                value |= 1 << (self.n_sites + s)
        return value

    def with_phase(self, phase: int) -> PauliOperator:
        return PauliOperator(d=self.d, x=self.x, z=self.z, phase=phase)

    def negated(self) -> PauliOperator:
        return self.with_phase(self.phase + self.d)

    def power(self, exponent: int) -> PauliOperator:
        """Integer power by repeated multiplication (exponent taken mod the order)."""
        result = PauliOperator.identity(self.n_sites, self.d)
        for _ in range(exponent % (2 * self.d)):
            result = multiply(result, self)
        return result

    def to_text(self) -> str:
        return to_text(self)

    def __str__(self) -> str:
        return to_text(self)

    # ------------------------------------------------------------------
    # Dense oracle
    # ------------------------------------------------------------------

    def _basis_action(self) -> tuple[np.ndarray, np.ndarray]:
        """Row index and value of the single nonzero entry of each column."""
        n, d = self.n_sites, self.d
        digits, place = basis_digits(n, d)
        rows = ((digits + np.array(self.x)) % d) @ place
        exponents = (self.phase + 2 * (digits @ np.array(self.z))) % (2 * d)
        values = np.exp(1j * np.pi * exponents / d)
        return rows, values

    def to_matrix(self) -> np.ndarray:
        """Dense d^N x d^N matrix of the operator."""
        rows, values = self._basis_action()
        dim = self.d**self.n_sites
        matrix = np.zeros((dim, dim), dtype=complex)
        matrix[rows, np.arange(dim)] = values
        return matrix

    def apply(self, vector: np.ndarray) -> np.ndarray:
        """Left-multiply a state vector (or the columns of a matrix) without
        building the operator matrix."""
        rows, values = self._basis_action()
        out = np.zeros_like(vector, dtype=complex)
        out[rows] = values.reshape((-1,) + (1,) * (vector.ndim - 1)) * vector
        return out

    def _require_qubit(self, what: str) -> None:
        if self.d != 2:
            raise DomainError(f"{what} is defined for qubit operators only (d={self.d})")


@lru_cache(maxsize=32)
def basis_digits(n_sites: int, d: int) -> tuple[np.ndarray, np.ndarray]:
    """Digit table of the computational basis (site 1 most significant) and place values."""
    digits = np.array(list(itertools.product(range(d), repeat=n_sites)), dtype=np.int64)
    digits.setflags(write=False)
    place = d ** np.arange(n_sites - 1, -1, -1, dtype=np.int64)
    place.setflags(write=False)
    return digits, place


def check_site(site: SiteLabel, n_sites: int) -> SiteLabel:
    """Validate a 1-based site label."""
    if not isinstance(site, (int, np.integer)) or not 1 <= site <= n_sites:
        raise DomainError(f"site {site} outside [1, {n_sites}]")
    return int(site)


def _check_shapes(a: PauliOperator, b: PauliOperator) -> None:
    if a.d != b.d:
        raise DimensionError(f"local dimensions differ: {a.d} vs {b.d}")
    if a.n_sites != b.n_sites:
        raise DimensionError(f"site counts differ: {a.n_sites} vs {b.n_sites}")


# =============================================================================
# Algebra
# =============================================================================


def multiply(a: PauliOperator, b: PauliOperator) -> PauliOperator:
    """Group product ``a * b`` with exact phase.

    Moving ``Z^{z_a}`` past ``X^{x_b}`` costs ``w^{2 z_a x_b}``.

    Example:
        >>> z, x = parse_pauli("Z", 2), parse_pauli("X", 2)
        >>> multiply(z, x).phase
        2
    """
    _check_shapes(a, b)
    d = a.d
    cross = sum(za * xb for za, xb in zip(a.z, b.x))
    return PauliOperator(
        d=d,
        x=tuple((u + v) % d for u, v in zip(a.x, b.x)),
        z=tuple((u + v) % d for u, v in zip(a.z, b.z)),
        phase=a.phase + b.phase + 2 * cross,
    )


def product(operators: Iterable[PauliOperator], n_sites: int, d: int = 2) -> PauliOperator:
    """Ordered product of operators; the identity for an empty iterable."""
    return reduce(multiply, operators, PauliOperator.identity(n_sites, d))


def commutation_phase(a: PauliOperator, b: PauliOperator) -> int:
    """Symplectic form ``sum_s (x_a z_b - z_a x_b) mod d``.

    ``b a = w^{2c} a b`` with ``c`` the returned value; for qubits it is 1 exactly
    when the operators anticommute.
    """
    _check_shapes(a, b)
    total = sum(xa * zb - za * xb for xa, za, xb, zb in zip(a.x, a.z, b.x, b.z))
    return total % a.d


def site_commutation_phases(a: PauliOperator, b: PauliOperator) -> tuple[int, ...]:
    """Per-site commutation phases; they sum to ``commutation_phase(a, b)``."""
    _check_shapes(a, b)
    d = a.d
    return tuple(
        (xa * zb - za * xb) % d for xa, za, xb, zb in zip(a.x, a.z, b.x, b.z)
    )


def restrict(a: PauliOperator, sites: Iterable[SiteLabel]) -> PauliOperator:
    """Sub-operator on ``sites`` in ascending order, with phase 0."""
    selected = sorted(set(sites))
    if not selected:
        raise DomainError("restriction needs a nonempty set of sites")
    for site in selected:
        check_site(site, a.n_sites)
    return PauliOperator(
        d=a.d,
        x=tuple(a.x[s - 1] for s in selected),
        z=tuple(a.z[s - 1] for s in selected),
        phase=0,
    )


def site_pauli(a: PauliOperator, site: SiteLabel) -> str | tuple[int, int]:
    """Local factor at ``site``: a letter for qubits, ``(x, z)`` otherwise."""
    check_site(site, a.n_sites)
    bits = (a.x[site - 1], a.z[site - 1])
    if a.d == 2:
        return _BITS_LETTER[bits]
    return bits


def site_letter(a: PauliOperator, site: SiteLabel) -> str:
    """Qubit-only form of :func:`site_pauli` with a precise return type."""
    a._require_qubit("site_letter")
    letter = site_pauli(a, site)
    assert isinstance(letter, str)
    return letter


# =============================================================================
# Text form
# =============================================================================

_QUBIT_PREFIX_PHASE = {"+": 0, "+i": 1, "-": 2, "-i": 3}
_QUDIT_TOKEN = re.compile(r"(X(?:\^(\d+))?)?(Z(?:\^(\d+))?)?$")
_QUDIT_PHASE = re.compile(r"w\^(\d+)")


def parse_pauli(text: str, d: int = 2) -> PauliOperator:
    """Parse operator text.

    Qubits (d = 2): ``[+-]? i? site+`` where a site is one of ``I X Y Z`` or the
    bracketed single-site token ``(XZ)``. Sites may also be separated by ``⊗``
    or ``*``, in which case every chunk is one site and ``XZ`` is allowed bare.
    Whitespace is ignored.

    Qudits (d > 2): ``[w^a ] token(.token)*`` with tokens ``X^aZ^b``; ``I``,
    ``X``, ``Z``, ``X^a``, ``Z^b`` and ``XZ`` are accepted shorthands.

    Raises:
        ParseError: With the 1-based column of the offending character.

    Example:
        >>> parse_pauli("+XZZXI").x
        (1, 0, 0, 1, 0)
    """
    if d < 2:
        raise DomainError(f"local dimension must be >= 2, got {d}")
    if d == 2:
        return _parse_qubit(text)
    return _parse_qudit(text, d)


def _parse_qubit(text: str) -> PauliOperator:
    chars = [(col, ch) for col, ch in enumerate(text, start=1) if not ch.isspace()]
    if not chars:
        raise ParseError("empty operator text", column=1)

    pos = 0
    sign = "+"
    if chars[pos][1] in "+-":
        sign = chars[pos][1]
        pos += 1
    prefix_i = pos < len(chars) and chars[pos][1] == "i"
    if prefix_i:
        pos += 1
    phase = _QUBIT_PREFIX_PHASE[sign + ("i" if prefix_i else "")]

    body = chars[pos:]
    if not body:
        column = chars[-1][0] + 1
        raise ParseError("operator has no sites", column=column)

    if any(ch in _TENSOR_SEPARATORS for _, ch in body):
        sites = _split_tensor_chunks(body)
    else:
        sites = _split_letter_sites(body)

    x: list[int] = []
    z: list[int] = []
    for bx, bz, extra_phase in sites:
        x.append(bx)
        z.append(bz)
        phase += extra_phase
    return PauliOperator(d=2, x=tuple(x), z=tuple(z), phase=phase)


def _site_from_letter(column: int, letter: str) -> tuple[int, int, int]:
    if letter not in _LETTER_BITS:
        raise ParseError(f"invalid Pauli letter {letter!r}", column=column)
    bx, bz = _LETTER_BITS[letter]
    return bx, bz, 1 if letter == "Y" else 0


def _split_letter_sites(body: list[tuple[int, str]]) -> list[tuple[int, int, int]]:
    sites = []
    pos = 0
    while pos < len(body):
        column, ch = body[pos]
        if ch == "(":
            token = "".join(c for _, c in body[pos + 1 : pos + 4])
            if token != "XZ)":
                raise ParseError("expected '(XZ)' token", column=column)
            sites.append((1, 1, 0))
            pos += 4
            continue
        sites.append(_site_from_letter(column, ch))
        pos += 1
    return sites


def _split_tensor_chunks(body: list[tuple[int, str]]) -> list[tuple[int, int, int]]:
    chunks: list[list[tuple[int, str]]] = [[]]
    for column, ch in body:
        if ch in _TENSOR_SEPARATORS:
            chunks.append([])
        else:
            chunks[-1].append((column, ch))

    sites = []
    for chunk in chunks:
        if not chunk:
            column = body[-1][0] + 1
            raise ParseError("empty tensor factor", column=column)
        text = "".join(ch for _, ch in chunk).strip("()")
        if text == "XZ":
            sites.append((1, 1, 0))
        elif len(chunk) == 1:
            sites.append(_site_from_letter(*chunk[0]))
        else:
            raise ParseError(f"invalid tensor factor {text!r}", column=chunk[0][0])
    return sites


def _parse_qudit(text: str, d: int) -> PauliOperator:
    stripped = text.strip()
    if not stripped:
        raise ParseError("empty operator text", column=1)
    offset = len(text) - len(text.lstrip())
    phase = 0
    match = _QUDIT_PHASE.match(stripped)
    if match:
        phase = int(match.group(1))
        rest_start = match.end()
        while rest_start < len(stripped) and stripped[rest_start] in " *":
            rest_start += 1
        offset += rest_start
        stripped = stripped[rest_start:]
        if not stripped:
            raise ParseError("operator has no sites", column=offset + 1)

    x: list[int] = []
    z: list[int] = []
    column = offset + 1
    for token in stripped.split("."):
        body = token.strip()
        if body == "I":
            x.append(0)
            z.append(0)
        else:
            token_match = _QUDIT_TOKEN.match(body)
            if not body or token_match is None:
                raise ParseError(f"invalid qudit token {token!r}", column=column)
            x_part, x_exp, z_part, z_exp = token_match.groups()
            x.append(0 if x_part is None else int(x_exp or 1))
            z.append(0 if z_part is None else int(z_exp or 1))
        column += len(token) + 1
    return PauliOperator(d=d, x=tuple(x), z=tuple(z), phase=phase)


def to_text(op: PauliOperator) -> str:
    """Canonical text; ``parse_pauli(to_text(op), op.d) == op``.

    Example:
        >>> to_text(parse_pauli("-YY"))
        '-YY'
    """
    if op.d == 2:
        prefix = {0: "+", 1: "+i", 2: "-", 3: "-i"}[(op.phase - op.y_count) % 4]
        return prefix + op.letters
    tokens = ".".join(f"X^{a}Z^{b}" for a, b in zip(op.x, op.z))
    if op.phase:
        return f"w^{op.phase} {tokens}"
    return tokens


__all__ = [
    "SiteLabel",
    "PauliOperator",
    "check_site",
    "multiply",
    "product",
    "commutation_phase",
    "site_commutation_phases",
    "restrict",
    "site_pauli",
    "site_letter",
    "parse_pauli",
    "to_text",
]
