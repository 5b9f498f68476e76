"""Memory synthesis: from a valid code to a minimal-memory partial encoder.

The pipeline is: build the memory commutativity matrix, read off the minimal
memory-qubit count, assign concrete memory operators reproducing the matrix,
lay out the frame-by-frame encoder rows, and append extra information-qubit
rows that provably rule out catastrophic behavior.

Encoder rows describe how one application of the (not yet completed) encoder
unitary must transform Paulis: inputs are (memory, ancilla, information)
parts, outputs are (physical, memory) parts.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from .code import ConvolutionalCode, validate_code
from .errors import (
    AssemblyError,
    InvalidCodeError,
    InvalidMatrixError,
    SynthesisFailureError,
)
from .pauli import (
    BinaryMatrix,
    Pauli,
    gf2_in_rowspan,
    gf2_rank,
    gf2_solve_dot_system,
    operators_from_commutativity,
    symplectic_product,
)

__all__ = [
    "MemoryCommutativityMatrix",
    "EncoderRow",
    "PartialEncoder",
    "CatastrophicityContext",
    "MemoryOperatorTable",
    "build_commutativity_matrix",
    "verify_consistency",
    "minimal_memory",
    "assign_memory_operators",
    "assemble_partial_encoder",
    "compute_centralizer",
    "CentralizerBasis",
    "find_s1",
    "add_noncatastrophic_rows",
    "combination_rows",
    "has_catastrophic_combination",
    "synthesize",
    "SynthesisResult",
]


@dataclass
class MemoryCommutativityMatrix:
    """Symmetric GF(2) matrix of deferred commutation obligations.

    ``index_map[r]`` gives the (generator, frame) pair, both 1-based, that row
    r stands for; rows are ordered lexicographically by that pair.  Entry
    (r, s) is 1 exactly when the corresponding memory operators must
    anticommute for the streamed generators to commute across frames.
    """

    matrix: BinaryMatrix
    index_map: List[Tuple[int, int]]

    @property
    def dim(self) -> int:
        return self.matrix.nrows

    @property
    def rank(self) -> int:
        return self.matrix.rank()


def _memory_indices(code: ConvolutionalCode) -> List[Tuple[int, int]]:
    return [
        (i, j)
        for i, gen in enumerate(code.generators, start=1)
        for j in range(1, gen.degree)
    ]


def build_commutativity_matrix(code: ConvolutionalCode) -> MemoryCommutativityMatrix:
    """Forward-recursion matrix; refuses invalid codes with their violations.

    Entry ((i,j),(i2,j2)) is the parity of products between later blocks:
    sum over t >= 1 of <h_{i,j+t}, h_{i2,j2+t}>.
    """
    result = validate_code(code)
    if not result.valid:
        raise InvalidCodeError(result.violations)
    index_map = _memory_indices(code)
    entries = []
    for i, j in index_map:
        a = code.generators[i - 1]
        row = []
        for i2, j2 in index_map:
            b = code.generators[i2 - 1]
            acc = 0
            for t in range(1, min(a.degree - j, b.degree - j2) + 1):
                acc ^= symplectic_product(a.block(j + t), b.block(j2 + t))
            row.append(acc)
        entries.append(row)
    matrix = BinaryMatrix.from_lists(entries, len(index_map))
    return MemoryCommutativityMatrix(matrix, index_map)


def _backward_matrix(code: ConvolutionalCode) -> BinaryMatrix:
    # Same obligations accumulated from earlier blocks instead of later ones.
    index_map = _memory_indices(code)
    entries = []
    for i, j in index_map:
        a = code.generators[i - 1]
        row = []
        for i2, j2 in index_map:
            b = code.generators[i2 - 1]
            acc = 0
            for t in range(min(j, j2)):
                acc ^= symplectic_product(a.block(j - t), b.block(j2 - t))
            row.append(acc)
        entries.append(row)
    return BinaryMatrix.from_lists(entries, len(index_map))


def verify_consistency(code: ConvolutionalCode) -> int:
    """1 when forward and backward accumulation agree entrywise, else 0.

    Agreement for every pair is equivalent to the code's validity, so this is
    an independent route to the same verdict as validate_code.
    """
    result = validate_code(code)
    if not result.valid:
        return 0
    forward = build_commutativity_matrix(code).matrix
    backward = _backward_matrix(code)
    return int(forward.rows == backward.rows)


def minimal_memory(omega: MemoryCommutativityMatrix) -> int:
    """Minimal memory-qubit count: dim - rank/2."""
    rank = omega.rank
    if rank % 2 != 0:
        raise InvalidMatrixError(
            f"commutativity matrix has odd rank {rank}; it cannot be symplectic"
        )
    return omega.dim - rank // 2


@dataclass
class MemoryOperatorTable:
    """Concrete memory operators g_{i,j} on m qubits, keyed by (i, j)."""

    m: int
    ops: Dict[Tuple[int, int], Pauli]
    index_map: List[Tuple[int, int]]

    def op(self, i: int, j: int) -> Pauli:
        return self.ops[(i, j)]

    def as_list(self) -> List[Pauli]:
        return [self.ops[key] for key in self.index_map]


def assign_memory_operators(omega: MemoryCommutativityMatrix) -> MemoryOperatorTable:
    """Deterministic minimal-memory operator assignment reproducing omega.

    Memory qubits are claimed in the order encoding brings the slots into
    play: frame index first, then generator index.  That ordering pins down
    which qubit each hyperbolic pair or isotropic row lands on.
    """
    n = omega.dim
    order = sorted(range(n), key=lambda r: (omega.index_map[r][1], omega.index_map[r][0]))
    ops = operators_from_commutativity(omega.matrix, order=order)
    table = {omega.index_map[r]: ops[r] for r in range(n)}
    m = minimal_memory(omega)
    assert all(op.width == m for op in ops) or n == 0
    return MemoryOperatorTable(m, table, list(omega.index_map))


@dataclass(frozen=True)
class EncoderRow:
    """One input-output Pauli constraint on the encoder unitary."""

    mem_in: Pauli
    anc_in: Pauli
    info_in: Pauli
    phys_out: Pauli
    mem_out: Pauli

    def input_pauli(self) -> Pauli:
        return self.mem_in.concat(self.anc_in).concat(self.info_in)

    def output_pauli(self) -> Pauli:
        return self.phys_out.concat(self.mem_out)

    def combine(self, other: "EncoderRow") -> "EncoderRow":
        return EncoderRow(
            self.mem_in * other.mem_in,
            self.anc_in * other.anc_in,
            self.info_in * other.info_in,
            self.phys_out * other.phys_out,
            self.mem_out * other.mem_out,
        )

    def as_strings(self) -> Dict[str, str]:
        return {
            "mem_in": str(self.mem_in),
            "anc_in": str(self.anc_in),
            "info_in": str(self.info_in),
            "phys_out": str(self.phys_out),
            "mem_out": str(self.mem_out),
        }


@dataclass
class PartialEncoder:
    """Generator rows plus any added rows, with the operator table used."""

    m: int
    n: int
    k: int
    rows: List[EncoderRow]
    added_rows: List[EncoderRow] = field(default_factory=list)
    memory_ops: Optional[MemoryOperatorTable] = None

    @property
    def all_rows(self) -> List[EncoderRow]:
        return self.rows + self.added_rows

    @property
    def width(self) -> int:
        return self.m + self.n


def _check_row_consistency(rows: Sequence[EncoderRow]) -> None:
    for a, b in itertools.combinations(range(len(rows)), 2):
        lhs = symplectic_product(rows[a].input_pauli(), rows[b].input_pauli())
        rhs = symplectic_product(rows[a].output_pauli(), rows[b].output_pauli())
        if lhs != rhs:
            raise AssemblyError(
                f"rows {a + 1} and {b + 1} disagree: inputs "
                f"{'anticommute' if lhs else 'commute'} but outputs do not match"
            )


def assemble_partial_encoder(
    code: ConvolutionalCode, table: MemoryOperatorTable
) -> PartialEncoder:
    """Frame-by-frame rows for each generator.

    Row (i, j) consumes memory g_{i,j-1} (identity at j=1, when the ancilla
    Z_i is consumed instead), emits block h_{i,j} on the physical qubits and
    hands g_{i,j} (identity at j=l_i) to the next frame.
    """
    n, k = code.n, code.k
    s = n - k
    m = table.m
    rows: List[EncoderRow] = []
    for i, gen in enumerate(code.generators, start=1):
        for j in range(1, gen.degree + 1):
            mem_in = table.op(i, j - 1) if j > 1 else Pauli.identity(m)
            anc_in = (
                Pauli(s, 0, 1 << (i - 1)) if j == 1 else Pauli.identity(s)
            )
            mem_out = (
                table.op(i, j) if j < gen.degree else Pauli.identity(m)
            )
            rows.append(
                EncoderRow(
                    mem_in=mem_in,
                    anc_in=anc_in,
                    info_in=Pauli.identity(k),
                    phys_out=gen.block(j),
                    mem_out=mem_out,
                )
            )
    _check_row_consistency(rows)
    return PartialEncoder(m=m, n=n, k=k, rows=rows, memory_ops=table)


@dataclass
class CentralizerBasis:
    """Span of memory Paulis commuting with every memory operator."""

    m: int
    basis: List[Pauli]

    def __len__(self) -> int:
        return 1 << len(self.basis)

    def enumerate(self) -> Iterator[Pauli]:
        for picks in itertools.product((0, 1), repeat=len(self.basis)):
            acc = Pauli.identity(self.m)
            for bit, op in zip(picks, self.basis):
                if bit:
                    acc = acc * op
            yield acc

    def contains(self, op: Pauli) -> bool:
        vec = op.x | (op.z << self.m)
        return gf2_in_rowspan(vec, [b.x | (b.z << self.m) for b in self.basis])


def compute_centralizer(table: MemoryOperatorTable) -> CentralizerBasis:
    """Nullspace of the commutation constraints against all memory operators.

    A memory Pauli w is in the centralizer iff <w, g> = 0 for every operator
    g in the table; the span has size 2^(2m - rank of the operator set).
    """
    m = table.m
    ops = table.as_list()
    # <w, g> depends linearly on w through the swapped vector (g.z | g.x).
    constraint_rows = [g.z | (g.x << m) for g in ops]
    solved = gf2_solve_dot_system(constraint_rows, 2 * m, [0] * len(ops))
    assert solved is not None
    _particular, null_basis = solved
    mask = (1 << m) - 1
    basis = [Pauli(m, vec & mask, vec >> m) for vec in sorted(null_basis)]
    return CentralizerBasis(m, basis)


def find_s1(encoder: PartialEncoder, centralizer: CentralizerBasis) -> List[EncoderRow]:
    """Independent generating set of zero-physical row combinations.

    Selected combinations of the generator rows must emit identity on all
    physical qubits and have both memory parts inside the centralizer span.
    """
    rows = encoder.rows
    m = encoder.m
    ops = encoder.memory_ops.as_list() if encoder.memory_ops else []
    # Unknowns: one GF(2) coefficient per generator row.  Constraints: each
    # physical bit of the combined output vanishes, and both memory parts
    # commute with every memory operator.
    n_rows = len(rows)
    constraint_cols: List[int] = []
    n_phys_bits = 2 * encoder.n

    def row_constraint_bits(row: EncoderRow) -> List[int]:
        bits = []
        for b in range(encoder.n):
            bits.append((row.phys_out.x >> b) & 1)
        for b in range(encoder.n):
            bits.append((row.phys_out.z >> b) & 1)
        for g in ops:
            bits.append(symplectic_product(row.mem_in, g))
        for g in ops:
            bits.append(symplectic_product(row.mem_out, g))
        return bits

    per_row = [row_constraint_bits(r) for r in rows]
    n_constraints = n_phys_bits + 2 * len(ops)
    # Transpose into constraint rows over the coefficient space.
    constraint_words = []
    for c in range(n_constraints):
        word = 0
        for r in range(n_rows):
            if per_row[r][c]:
                word |= 1 << r
        constraint_words.append(word)
    solved = gf2_solve_dot_system(constraint_words, n_rows, [0] * n_constraints)
    assert solved is not None
    _particular, null_basis = solved
    combos: List[EncoderRow] = []
    for mask in sorted(null_basis):
        acc = _identity_row(encoder)
        for r in range(n_rows):
            if (mask >> r) & 1:
                acc = acc.combine(rows[r])
        assert acc.phys_out.is_identity
        assert centralizer.contains(acc.mem_in)
        assert centralizer.contains(acc.mem_out)
        combos.append(acc)
    return combos


def _identity_row(encoder: PartialEncoder) -> EncoderRow:
    return EncoderRow(
        Pauli.identity(encoder.m),
        Pauli.identity(encoder.n - encoder.k),
        Pauli.identity(encoder.k),
        Pauli.identity(encoder.n),
        Pauli.identity(encoder.m),
    )


def combination_rows(rows: Sequence[EncoderRow], encoder: PartialEncoder) -> List[EncoderRow]:
    """All nonzero GF(2) combinations of the given rows."""
    out = []
    for r in range(1, 1 << len(rows)):
        acc = _identity_row(encoder)
        for idx in range(len(rows)):
            if (r >> idx) & 1:
                acc = acc.combine(rows[idx])
        out.append(acc)
    return out


def has_catastrophic_combination(
    rows: Sequence[EncoderRow], encoder: PartialEncoder
) -> bool:
    """Brute-force cycle oracle on the span of the given zero-physical rows.

    Treats each combination as a state-diagram edge mem_in -> mem_out and
    reports whether an edge with non-identity logical label lies on a cycle.
    """
    import networkx as nx

    combos = combination_rows(rows, encoder)
    graph = nx.DiGraph()
    labelled_edges = []
    for row in combos:
        assert row.phys_out.is_identity
        u = row.mem_in.x | (row.mem_in.z << encoder.m)
        v = row.mem_out.x | (row.mem_out.z << encoder.m)
        graph.add_edge(u, v)
        labelled_edges.append((u, v, not row.info_in.is_identity))
    components = list(nx.strongly_connected_components(graph))
    scc_of = {}
    for idx, comp in enumerate(components):
        for node in comp:
            scc_of[node] = idx
    for u, v, logical in labelled_edges:
        if not logical:
            continue
        if u == v or scc_of[u] == scc_of[v]:
            return True
    return False


@dataclass
class CatastrophicityContext:
    """Everything needed to audit the added-row choice afterwards."""

    centralizer: CentralizerBasis
    s1_rows: List[EncoderRow]
    s2_rows: List[EncoderRow]
    basis_m: List[Pauli]


def add_noncatastrophic_rows(
    encoder: PartialEncoder, seed: int = 0
) -> Tuple[PartialEncoder, CatastrophicityContext]:
    """Append information-qubit rows completing the centralizer basis.

    The rows map X on a fresh information qubit to identity physical output
    and a centralizer element M_i, chosen so S1 and the new rows together
    span the centralizer without admitting a catastrophic cycle.  A greedy
    canonical choice is tried first, then seeded random completions.
    """
    assert encoder.memory_ops is not None
    centralizer = compute_centralizer(encoder.memory_ops)
    s1 = find_s1(encoder, centralizer)
    m, n, k, s = encoder.m, encoder.n, encoder.k, encoder.n - encoder.k

    s1_out_vecs = [row.mem_out.x | (row.mem_out.z << m) for row in s1]

    def completion_ok(cands: List[Pauli]) -> bool:
        vecs = list(s1_out_vecs) + [p.x | (p.z << m) for p in cands]
        return gf2_rank(vecs) == len(centralizer.basis)

    def build_rows(cands: List[Pauli]) -> List[EncoderRow]:
        out = []
        for idx, target in enumerate(cands):
            out.append(
                EncoderRow(
                    mem_in=Pauli.identity(m),
                    anc_in=Pauli.identity(s),
                    info_in=Pauli(k, 1 << idx, 0),
                    phys_out=Pauli.identity(n),
                    mem_out=target,
                )
            )
        return out

    needed = len(centralizer.basis) - gf2_rank(s1_out_vecs)
    if needed > k:
        raise SynthesisFailureError(
            f"{needed} centralizer directions to cover but only {k} information qubits"
        )

    # Greedy canonical completion from the centralizer basis.
    candidates: List[Pauli] = []
    for b in centralizer.basis:
        if len(candidates) == needed:
            break
        cur = s1_out_vecs + [p.x | (p.z << m) for p in candidates]
        if gf2_rank(cur + [b.x | (b.z << m)]) > gf2_rank(cur):
            candidates.append(b)
    attempts: List[List[Pauli]] = []
    if len(candidates) == needed:
        assert completion_ok(candidates)
        attempts.append(candidates)
    rng = random.Random(seed)
    elements = [e for e in centralizer.enumerate() if not e.is_identity]
    for _ in range(500):
        if not elements or needed == 0:
            break
        pick = rng.sample(elements, min(needed, len(elements)))
        if len(pick) == needed and completion_ok(pick):
            attempts.append(pick)

    tried = 0
    for cands in attempts:
        tried += 1
        s2 = build_rows(cands)
        if has_catastrophic_combination(s1 + s2, encoder):
            continue
        new_rows = list(encoder.added_rows) + s2
        _check_row_consistency(encoder.rows + new_rows)
        extended = PartialEncoder(
            m=m,
            n=n,
            k=k,
            rows=list(encoder.rows),
            added_rows=new_rows,
            memory_ops=encoder.memory_ops,
        )
        context = CatastrophicityContext(
            centralizer=centralizer,
            s1_rows=s1,
            s2_rows=s2,
            basis_m=cands,
        )
        return extended, context
    raise SynthesisFailureError(
        f"no non-catastrophic completion found after {tried} candidate sets"
    )


@dataclass
class SynthesisResult:
    code: ConvolutionalCode
    omega: MemoryCommutativityMatrix
    m: int
    table: MemoryOperatorTable
    encoder: PartialEncoder
    context: CatastrophicityContext


def synthesize(code: ConvolutionalCode, seed: int = 0) -> SynthesisResult:
    """Full synthesis chain for an already-shortened valid code."""
    omega = build_commutativity_matrix(code)
    assert verify_consistency(code) == 1
    m = minimal_memory(omega)
    table = assign_memory_operators(omega)
    encoder = assemble_partial_encoder(code, table)
    extended, context = add_noncatastrophic_rows(encoder, seed=seed)
    return SynthesisResult(
        code=code, omega=omega, m=m, table=table, encoder=extended, context=context
    )
