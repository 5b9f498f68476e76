"""Projective Pauli operators and GF(2) symplectic linear algebra.

A projective Pauli on w qubits (phases ignored) is stored as two packed
GF(2) words: bit q of ``x`` marks an X factor on qubit q, bit q of ``z`` a
Z factor, both bits a Y.  Qubit 0 is the leftmost character of the string
form.  Multiplication is bitwise XOR; the symplectic product

    <a, b> = a.x . b.z + a.z . b.x   (mod 2)

is 0 when the operators commute and 1 when they anticommute.

GF(2) matrices are lists of packed row words plus an explicit column count.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Sequence, Tuple

from .errors import InvalidMatrixError, WidthMismatchError

__all__ = [
    "Pauli",
    "BinaryMatrix",
    "GramSchmidtResult",
    "symplectic_product",
    "multiply",
    "gf2_rank",
    "gf2_in_rowspan",
    "gf2_row_dependencies",
    "gf2_solve_combination",
    "gf2_solve_dot_system",
    "gf2_invert",
    "symplectic_gram_schmidt",
    "operators_from_commutativity",
    "gram_matrix",
    "exists_gram_realization",
]

_CHAR_TO_BITS = {"I": (0, 0), "X": (1, 0), "Z": (0, 1), "Y": (1, 1)}
_BITS_TO_CHAR = {v: k for k, v in _CHAR_TO_BITS.items()}


def _parity(word: int) -> int:
    return word.bit_count() & 1


@dataclass(frozen=True)
class Pauli:
    """Immutable projective Pauli operator on ``width`` qubits."""

    width: int
    x: int = 0
    z: int = 0

    def __post_init__(self):
        assert self.width >= 0
        mask = (1 << self.width) - 1
        assert 0 <= self.x <= mask and 0 <= self.z <= mask

    @classmethod
    def identity(cls, width: int) -> "Pauli":
        return cls(width, 0, 0)

    @classmethod
    def from_string(cls, text: str) -> "Pauli":
        """Parse an uppercase I/X/Y/Z string, one character per qubit."""
        x = z = 0
        for q, ch in enumerate(text):
            if ch not in _CHAR_TO_BITS:
                raise ValueError(f"invalid Pauli character {ch!r} at position {q}")
            xb, zb = _CHAR_TO_BITS[ch]
            x |= xb << q
            z |= zb << q
        return cls(len(text), x, z)

    def __str__(self) -> str:
        return "".join(
            _BITS_TO_CHAR[(self.x >> q) & 1, (self.z >> q) & 1]
            for q in range(self.width)
        )

    def __repr__(self) -> str:
        return f"Pauli({str(self)!r})"

    @property
    def is_identity(self) -> bool:
        return self.x == 0 and self.z == 0

    def __mul__(self, other: "Pauli") -> "Pauli":
        if self.width != other.width:
            raise WidthMismatchError(
                f"cannot multiply widths {self.width} and {other.width}"
            )
        return Pauli(self.width, self.x ^ other.x, self.z ^ other.z)

    def concat(self, other: "Pauli") -> "Pauli":
        """Tensor this operator with ``other`` acting on fresh qubits."""
        return Pauli(
            self.width + other.width,
            self.x | (other.x << self.width),
            self.z | (other.z << self.width),
        )

    def cut(self, start: int, stop: int) -> "Pauli":
        """Restriction to the qubit range [start, stop)."""
        assert 0 <= start <= stop <= self.width
        mask = (1 << (stop - start)) - 1
        return Pauli(stop - start, (self.x >> start) & mask, (self.z >> start) & mask)


def symplectic_product(a: Pauli, b: Pauli) -> int:
    """0 if the operators commute, 1 if they anticommute."""
    if a.width != b.width:
        raise WidthMismatchError(
            f"symplectic product of widths {a.width} and {b.width}"
        )
    return _parity(a.x & b.z) ^ _parity(a.z & b.x)


def multiply(a: Pauli, b: Pauli) -> Pauli:
    """Projective product (phase discarded)."""
    return a * b


@dataclass
class BinaryMatrix:
    """GF(2) matrix as packed row words."""

    rows: List[int]
    ncols: int

    @classmethod
    def from_lists(cls, entries: Sequence[Sequence[int]], ncols: Optional[int] = None) -> "BinaryMatrix":
        if ncols is None:
            ncols = len(entries[0]) if entries else 0
        rows = []
        for row in entries:
            assert len(row) == ncols
            word = 0
            for c, bit in enumerate(row):
                if bit & 1:
                    word |= 1 << c
            rows.append(word)
        return cls(rows, ncols)

    def to_lists(self) -> List[List[int]]:
        return [[(row >> c) & 1 for c in range(self.ncols)] for row in self.rows]

    @property
    def nrows(self) -> int:
        return len(self.rows)

    def rank(self) -> int:
        return gf2_rank(self.rows)

    def copy(self) -> "BinaryMatrix":
        return BinaryMatrix(list(self.rows), self.ncols)

    def get(self, r: int, c: int) -> int:
        return (self.rows[r] >> c) & 1


def gf2_rank(rows: Iterable[int]) -> int:
    """Rank of the row set over GF(2)."""
    basis: List[int] = []
    for row in rows:
        for b in basis:
            row = min(row, row ^ b)
        if row:
            basis.append(row)
            basis.sort(reverse=True)
    return len(basis)


def _reduce_against(row: int, basis: Sequence[int]) -> int:
    for b in basis:
        row = min(row, row ^ b)
    return row


def gf2_in_rowspan(vec: int, rows: Iterable[int]) -> bool:
    basis: List[int] = []
    for row in rows:
        row = _reduce_against(row, basis)
        if row:
            basis.append(row)
            basis.sort(reverse=True)
    return _reduce_against(vec, basis) == 0


def gf2_row_dependencies(rows: Sequence[int]) -> List[int]:
    """Basis of coefficient masks c with XOR of {rows[i] : bit i of c} = 0.

    Bit i of each returned mask refers to rows[i].
    """
    # Reduce augmented rows (row | tracking tag); rows reducing to zero give
    # the dependency coefficients.
    basis: List[Tuple[int, int]] = []
    deps: List[int] = []
    for i, row in enumerate(rows):
        tag = 1 << i
        for b, btag in basis:
            if min(row, row ^ b) != row:
                row ^= b
                tag ^= btag
        if row:
            basis.append((row, tag))
            basis.sort(reverse=True)
        else:
            deps.append(tag)
    return deps


def gf2_solve_combination(rows: Sequence[int], target: int) -> Optional[int]:
    """Lexicographically least coefficient mask c with XOR-combination = target.

    Coefficients are compared as the sequence (c for rows[0], c for rows[1], ...),
    preferring 0 at the earliest position.  Returns None when no solution exists.
    """
    n = len(rows)
    if not gf2_in_rowspan(target, rows):
        return None
    chosen = 0
    residual = target
    for i in range(n):
        # Feasible with coefficient 0 here iff the residual stays in the span
        # of the remaining rows.
        if gf2_in_rowspan(residual, rows[i + 1 :]):
            continue
        chosen |= 1 << i
        residual ^= rows[i]
    assert residual == 0
    return chosen


def gf2_solve_dot_system(
    rows: Sequence[int], ncols: int, rhs: Sequence[int]
) -> Optional[Tuple[int, List[int]]]:
    """Solve <rows[i], v> = rhs[i] (dot-product parity) for v.

    Returns (particular solution with free variables zero, nullspace basis),
    or None when inconsistent.
    """
    assert len(rows) == len(rhs)
    eqs = [(row, int(b) & 1) for row, b in zip(rows, rhs)]
    pivots: List[Tuple[int, int, int]] = []  # (column, row word, rhs bit)
    used_cols: List[int] = []
    for row, b in eqs:
        for col, prow, pb in pivots:
            if (row >> col) & 1:
                row ^= prow
                b ^= pb
        if row == 0:
            if b:
                return None
            continue
        col = (row & -row).bit_length() - 1
        pivots.append((col, row, b))
        used_cols.append(col)
    # Back-substitute so each pivot row has zeros in every other pivot column.
    for idx in range(len(pivots) - 1, -1, -1):
        col, row, b = pivots[idx]
        for jdx in range(idx):
            jcol, jrow, jb = pivots[jdx]
            if (jrow >> col) & 1:
                pivots[jdx] = (jcol, jrow ^ row, jb ^ b)
    particular = 0
    for col, _row, b in pivots:
        if b:
            particular |= 1 << col
    pivot_set = set(used_cols)
    null_basis: List[int] = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        vec = 1 << free
        for col, row, _b in pivots:
            if (row >> free) & 1:
                vec |= 1 << col
        null_basis.append(vec)
    return particular, null_basis


def gf2_invert(rows: Sequence[int], n: int) -> Optional[List[int]]:
    """Inverse of an n x n matrix given as packed rows, or None if singular."""
    work = list(rows)
    inv = [1 << i for i in range(n)]
    row_at = 0
    for col in range(n):
        pivot = None
        for r in range(row_at, n):
            if (work[r] >> col) & 1:
                pivot = r
                break
        if pivot is None:
            return None
        work[row_at], work[pivot] = work[pivot], work[row_at]
        inv[row_at], inv[pivot] = inv[pivot], inv[row_at]
        for r in range(n):
            if r != row_at and (work[r] >> col) & 1:
                work[r] ^= work[row_at]
                inv[r] ^= inv[row_at]
        row_at += 1
    return inv


@dataclass
class GramSchmidtResult:
    """Outcome of the symplectic Gram-Schmidt decomposition.

    ``basis_change`` rows are coefficient combinations of the original rows,
    permuted so hyperbolic pairs come first; conjugating the input by it
    yields ``standard_form`` (c blocks [[0,1],[1,0]] then a d x d zero block).
    ``pairs`` and ``isotropics`` use original row indices; ``transform`` is
    the unpermuted row-operation matrix.
    """

    c: int
    d: int
    basis_change: BinaryMatrix
    standard_form: BinaryMatrix
    pairs: List[Tuple[int, int]] = field(default_factory=list)
    isotropics: List[int] = field(default_factory=list)
    transform: Optional[BinaryMatrix] = None


def _check_commutativity_matrix(mat: BinaryMatrix) -> None:
    n = mat.nrows
    if n != mat.ncols:
        raise InvalidMatrixError(f"matrix is {n} x {mat.ncols}, not square")
    for r in range(n):
        if mat.get(r, r):
            raise InvalidMatrixError(f"nonzero diagonal entry at {r}")
        for s in range(r + 1, n):
            if mat.get(r, s) != mat.get(s, r):
                raise InvalidMatrixError(f"asymmetry at ({r}, {s})")


def symplectic_gram_schmidt(mat: BinaryMatrix) -> GramSchmidtResult:
    """Decompose a commutativity matrix into hyperbolic pairs and isotropics.

    Scans rows in ascending order; an unprocessed row is paired with the
    lowest-index unprocessed row it anticommutes with, and the pair is
    eliminated from all remaining rows by congruence row operations.
    """
    _check_commutativity_matrix(mat)
    n = mat.nrows
    w = [list(row_bits) for row_bits in mat.to_lists()]
    g = [1 << i for i in range(n)]
    done = [False] * n
    pairs: List[Tuple[int, int]] = []
    isotropics: List[int] = []
    for i in range(n):
        if done[i]:
            continue
        partner = None
        for j in range(i + 1, n):
            if not done[j] and w[i][j]:
                partner = j
                break
        if partner is None:
            done[i] = True
            isotropics.append(i)
            continue
        j = partner
        done[i] = done[j] = True
        pairs.append((i, j))
        for r in range(n):
            if done[r]:
                continue
            a = w[r][i]
            b = w[r][j]
            if a:
                g[r] ^= g[j]
                for s in range(n):
                    w[r][s] ^= w[j][s]
            if b:
                g[r] ^= g[i]
                for s in range(n):
                    w[r][s] ^= w[i][s]
            for s in range(n):
                w[s][r] = w[r][s]
    for i, j in pairs:
        assert w[i][j] == 1 and w[j][i] == 1
    for r in isotropics:
        assert all(bit == 0 for bit in w[r])

    order = [idx for pair in pairs for idx in pair] + sorted(isotropics)
    basis_rows = [g[idx] for idx in order]
    standard = [[w[a][b] for b in order] for a in order]
    return GramSchmidtResult(
        c=len(pairs),
        d=len(isotropics),
        basis_change=BinaryMatrix(basis_rows, n),
        standard_form=BinaryMatrix.from_lists(standard, n),
        pairs=pairs,
        isotropics=isotropics,
        transform=BinaryMatrix(list(g), n),
    )


def gram_matrix(ops: Sequence[Pauli]) -> BinaryMatrix:
    """Pairwise symplectic products of the given operators."""
    entries = [[symplectic_product(a, b) for b in ops] for a in ops]
    return BinaryMatrix.from_lists(entries, len(ops))


def operators_from_commutativity(
    mat: BinaryMatrix, order: Optional[Sequence[int]] = None
) -> List[Pauli]:
    """Construct dim(mat) Paulis on c + d qubits whose products reproduce mat.

    ``order`` lists row indices in the sequence fresh memory qubits should be
    claimed (default: ascending).  Each hyperbolic pair takes one qubit at the
    first touch of either member (scan anchor gets X, partner Z); each
    isotropic row takes one qubit for a Z.
    """
    n = mat.nrows
    if n == 0:
        _check_commutativity_matrix(mat)
        return []
    gs = symplectic_gram_schmidt(mat)
    m = gs.c + gs.d
    if order is None:
        order = range(n)
    assert sorted(order) == list(range(n))

    pair_of = {}
    for i, j in gs.pairs:
        pair_of[i] = (i, j)
        pair_of[j] = (i, j)
    qubit_of_pair = {}
    qubit_of_iso = {}
    next_q = 0
    for idx in order:
        if idx in pair_of:
            key = pair_of[idx]
            if key not in qubit_of_pair:
                qubit_of_pair[key] = next_q
                next_q += 1
        else:
            if idx not in qubit_of_iso:
                qubit_of_iso[idx] = next_q
                next_q += 1
    assert next_q == m

    standard: List[Pauli] = [Pauli.identity(m)] * n
    for i, j in gs.pairs:
        q = qubit_of_pair[(i, j)]
        standard[i] = Pauli(m, 1 << q, 0)
        standard[j] = Pauli(m, 0, 1 << q)
    for i in gs.isotropics:
        standard[i] = Pauli(m, 0, 1 << qubit_of_iso[i])

    ginv = gf2_invert(gs.transform.rows, n)
    assert ginv is not None
    ops: List[Pauli] = []
    for r in range(n):
        acc = Pauli.identity(m)
        combo = ginv[r]
        for s in range(n):
            if (combo >> s) & 1:
                acc = acc * standard[s]
        ops.append(acc)
    assert gram_matrix(ops).rows == mat.rows
    return ops


def exists_gram_realization(
    mat: BinaryMatrix, qubits: int, require_independent: bool = True
) -> bool:
    """Whether some tuple of Paulis on ``qubits`` qubits has Gram matrix ``mat``.

    With ``require_independent`` the tuple must be linearly independent as
    GF(2) vectors, matching the role memory operators play in an encoder.
    Exhaustive backtracking; intended for small dimensions only.
    """
    n = mat.nrows
    width = 2 * qubits
    target = mat.to_lists()

    def sym(u: int, v: int) -> int:
        ux, uz = u & ((1 << qubits) - 1), u >> qubits
        vx, vz = v & ((1 << qubits) - 1), v >> qubits
        return _parity(ux & vz) ^ _parity(uz & vx)

    chosen: List[int] = []

    def backtrack(level: int) -> bool:
        if level == n:
            return True
        for cand in range(1 << width):
            ok = True
            for prev_idx in range(level):
                if sym(chosen[prev_idx], cand) != target[level][prev_idx]:
                    ok = False
                    break
            if not ok:
                continue
            if require_independent and gf2_in_rowspan(cand, chosen):
                continue
            chosen.append(cand)
            if backtrack(level + 1):
                return True
            chosen.pop()
        return False

    return backtrack(0)
