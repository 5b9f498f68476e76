"""Quantum convolutional codes as frame-indexed Pauli generator streams.

A code transmits k logical qubits per frame of n physical qubits and is
described by n - k generators.  Each generator is a finite stream of n-qubit
Pauli blocks h_{i,1} | ... | h_{i,l_i}; block j acts on frame j.  The code is
valid when every generator commutes with every generator shifted by any whole
number of frames.

Text format (one code per file):

    # optional comment lines
    n=<int>
    k=<int>
    h <BLOCK>|<BLOCK>|...      (exactly n - k of these)

where each BLOCK is exactly n characters over I, X, Y, Z.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, List, Tuple

from .errors import InvalidDelayError, ParseError, WidthMismatchError
from .pauli import Pauli, symplectic_product

__all__ = [
    "GeneratorPolynomial",
    "ConvolutionalCode",
    "ValidationResult",
    "parse_code",
    "serialize_code",
    "validate_code",
    "delay_generator",
    "multiply_generators",
]


@dataclass(frozen=True)
class GeneratorPolynomial:
    """One generator as a tuple of equal-width Pauli blocks, frame 1 first."""

    blocks: Tuple[Pauli, ...]

    def __post_init__(self):
        assert len(self.blocks) >= 1
        widths = {b.width for b in self.blocks}
        assert len(widths) == 1

    @classmethod
    def from_strings(cls, parts: List[str]) -> "GeneratorPolynomial":
        return cls(tuple(Pauli.from_string(p) for p in parts))

    @property
    def degree(self) -> int:
        return len(self.blocks)

    @property
    def width(self) -> int:
        return self.blocks[0].width

    @property
    def is_identity(self) -> bool:
        return all(b.is_identity for b in self.blocks)

    def block(self, j: int) -> Pauli:
        """Block at frame j (1-based); identity outside the stream."""
        if 1 <= j <= self.degree:
            return self.blocks[j - 1]
        return Pauli.identity(self.width)

    def __str__(self) -> str:
        return "|".join(str(b) for b in self.blocks)


@dataclass(frozen=True)
class ConvolutionalCode:
    """A rate k/n code given by its n - k generator streams."""

    n: int
    k: int
    generators: Tuple[GeneratorPolynomial, ...]

    def __post_init__(self):
        assert 1 <= self.k < self.n
        assert len(self.generators) == self.n - self.k
        for g in self.generators:
            assert g.width == self.n

    @property
    def max_degree(self) -> int:
        return max(g.degree for g in self.generators)

    def with_generator(self, index: int, gen: GeneratorPolynomial) -> "ConvolutionalCode":
        """Copy of the code with generator ``index`` (0-based) replaced."""
        gens = list(self.generators)
        gens[index] = gen
        return ConvolutionalCode(self.n, self.k, tuple(gens))


def _meaningful_lines(text: str) -> Iterator[Tuple[int, str]]:
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        yield lineno, line


def _parse_header(line: str, lineno: int, key: str) -> int:
    if not line.startswith(key + "="):
        raise ParseError(f"expected {key}=<int>, got {line!r}", lineno)
    value = line[len(key) + 1 :]
    if not value.isdigit():
        raise ParseError(f"{key} must be a positive integer, got {value!r}", lineno)
    return int(value)


def parse_code(text: str) -> ConvolutionalCode:
    """Parse the text format; raises ParseError with a line number on failure."""
    lines = list(_meaningful_lines(text))
    if len(lines) < 2:
        raise ParseError("missing n= and k= header lines")
    n = _parse_header(lines[0][1], lines[0][0], "n")
    k = _parse_header(lines[1][1], lines[1][0], "k")
    if not 1 <= k < n:
        raise ParseError(f"need 1 <= k < n, got n={n} k={k}", lines[1][0])

    generators: List[GeneratorPolynomial] = []
    for lineno, line in lines[2:]:
        if not line.startswith("h "):
            raise ParseError(f"expected generator line 'h ...', got {line!r}", lineno)
        parts = line[2:].split("|")
        blocks = []
        for part in parts:
            part = part.strip()
            if len(part) != n:
                raise ParseError(
                    f"block {part!r} has width {len(part)}, expected {n}", lineno
                )
            try:
                blocks.append(Pauli.from_string(part))
            except ValueError as exc:
                raise ParseError(str(exc), lineno) from exc
        generators.append(GeneratorPolynomial(tuple(blocks)))

    if len(generators) != n - k:
        raise ParseError(
            f"expected {n - k} generator lines for n={n} k={k}, found {len(generators)}"
        )
    return ConvolutionalCode(n, k, tuple(generators))


def serialize_code(code: ConvolutionalCode) -> str:
    """Canonical text form; parse(serialize(code)) == code."""
    out = [f"n={code.n}", f"k={code.k}"]
    out.extend(f"h {g}" for g in code.generators)
    return "\n".join(out) + "\n"


@dataclass
class ValidationResult:
    valid: bool
    violations: List[Tuple[int, int, int]]


def _shifted_product(a: GeneratorPolynomial, b: GeneratorPolynomial, t: int) -> int:
    """Symplectic product of a delayed by t frames with b, summed over frames."""
    total = 0
    for j in range(1, b.degree + 1):
        total ^= symplectic_product(a.block(j - t), b.block(j))
    return total


def validate_code(code: ConvolutionalCode) -> ValidationResult:
    """Check all generator pairs against all frame shifts.

    A violation (i, i2, t) means generator i delayed by t frames anticommutes
    with generator i2; indices are 1-based and 0 <= t < max(l_i, l_i2).
    """
    violations: List[Tuple[int, int, int]] = []
    gens = code.generators
    for i, a in enumerate(gens, start=1):
        for i2, b in enumerate(gens, start=1):
            for t in range(max(a.degree, b.degree)):
                if t == 0 and i2 <= i:
                    # Symmetric at zero shift; report each unordered pair once.
                    continue
                if _shifted_product(a, b, t):
                    violations.append((i, i2, t))
    violations.sort()
    return ValidationResult(not violations, violations)


def delay_generator(gen: GeneratorPolynomial, j: int) -> GeneratorPolynomial:
    """Shift the stream j frames later; j < 0 strips leading identity frames."""
    if j >= 0:
        pad = tuple(Pauli.identity(gen.width) for _ in range(j))
        return GeneratorPolynomial(pad + gen.blocks)
    strip = -j
    if strip >= gen.degree or any(not b.is_identity for b in gen.blocks[:strip]):
        raise InvalidDelayError(
            f"cannot advance by {strip}: leading blocks are not all identity"
        )
    return GeneratorPolynomial(gen.blocks[strip:])


def multiply_generators(
    a: GeneratorPolynomial, b: GeneratorPolynomial
) -> GeneratorPolynomial:
    """Frame-wise product aligned at frame 1, trailing identity frames trimmed.

    An all-identity product is collapsed to a single identity block.
    """
    if a.width != b.width:
        raise WidthMismatchError(f"generator widths {a.width} and {b.width} differ")
    degree = max(a.degree, b.degree)
    blocks = [a.block(j) * b.block(j) for j in range(1, degree + 1)]
    while len(blocks) > 1 and blocks[-1].is_identity:
        blocks.pop()
    return GeneratorPolynomial(tuple(blocks))
