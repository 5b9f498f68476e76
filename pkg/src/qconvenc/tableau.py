"""Clifford completion, circuit extraction, and state-diagram analysis.

The encoder acts on width = memory + frame qubits.  Input qubits are laid out
as memory, then ancilla, then information; output qubits as physical frame,
then memory.  A tableau stores the image of each input X_q and Z_q as a
packed 2*width-bit vector (bit q = x component on qubit q, bit width+q = z
component), so composing and comparing maps is pure integer arithmetic.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import networkx as nx

from .code import ConvolutionalCode
from .errors import CompletionError, MemoryBoundError
from .pauli import (
    Pauli,
    gf2_in_rowspan,
    gf2_invert,
    gf2_row_dependencies,
    gf2_solve_dot_system,
)
from .synth import PartialEncoder

__all__ = [
    "Gate",
    "CliffordTableau",
    "StateDiagramEdge",
    "CycleWitness",
    "pauli_to_vec",
    "vec_to_pauli",
    "complete_to_clifford",
    "synthesize_circuit",
    "replay_gates",
    "zero_physical_edges",
    "detect_catastrophic",
    "verify_non_recursive",
    "roundtrip_verify",
    "GATE_COUNT_FACTOR",
]

# Worst-case gates per synthesized circuit is GATE_COUNT_FACTOR * width**2.
GATE_COUNT_FACTOR = 8

DEFAULT_MEMORY_BOUND = 8


def pauli_to_vec(p: Pauli) -> int:
    return p.x | (p.z << p.width)


def vec_to_pauli(vec: int, width: int) -> Pauli:
    mask = (1 << width) - 1
    return Pauli(width, vec & mask, (vec >> width) & mask)


def _swap_halves(vec: int, width: int) -> int:
    mask = (1 << width) - 1
    return ((vec & mask) << width) | ((vec >> width) & mask)


def _vec_parity(word: int) -> int:
    return bin(word).count("1") & 1


def symplectic_product_vec(a: int, b: int, width: int) -> int:
    return _vec_parity(a & _swap_halves(b, width))


@dataclass(frozen=True)
class Gate:
    kind: str  # "h", "s", "cnot" or "cz"
    qubits: Tuple[int, ...]

    def as_json(self) -> Dict[str, object]:
        return {"kind": self.kind, "qubits": list(self.qubits)}


class CliffordTableau:
    """Symplectic map given by the images of every input X_q and Z_q."""

    def __init__(self, width: int, images: Sequence[int]):
        if len(images) != 2 * width:
            raise ValueError(
                f"tableau of width {width} needs {2 * width} images, got {len(images)}"
            )
        self.width = width
        self.images = list(images)

    @classmethod
    def identity(cls, width: int) -> "CliffordTableau":
        return cls(width, [1 << t for t in range(2 * width)])

    def copy(self) -> "CliffordTableau":
        return CliffordTableau(self.width, list(self.images))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CliffordTableau):
            return NotImplemented
        return self.width == other.width and self.images == other.images

    def is_identity(self) -> bool:
        return self.images == [1 << t for t in range(2 * self.width)]

    def is_symplectic(self) -> bool:
        w = self.width
        for a in range(2 * w):
            for b in range(a + 1, 2 * w):
                want = 1 if b == a + w else 0
                if symplectic_product_vec(self.images[a], self.images[b], w) != want:
                    return False
        return True

    def image_of_vector(self, vec: int) -> int:
        w = self.width
        out = 0
        x_part = vec & ((1 << w) - 1)
        z_part = vec >> w
        while x_part:
            q = (x_part & -x_part).bit_length() - 1
            out ^= self.images[q]
            x_part &= x_part - 1
        while z_part:
            q = (z_part & -z_part).bit_length() - 1
            out ^= self.images[w + q]
            z_part &= z_part - 1
        return out

    def image_of_pauli(self, p: Pauli) -> Pauli:
        return vec_to_pauli(self.image_of_vector(pauli_to_vec(p)), self.width)

    # Gate actions update every stored image in place.  Each primitive is an
    # involution on vectors, which circuit extraction relies on.
    def apply_gate(self, gate: Gate) -> None:
        w = self.width
        if gate.kind == "h":
            (q,) = gate.qubits
            xbit, zbit = 1 << q, 1 << (w + q)
            for t, vec in enumerate(self.images):
                x = vec & xbit
                z = vec & zbit
                vec &= ~(xbit | zbit)
                if x:
                    vec |= zbit
                if z:
                    vec |= xbit
                self.images[t] = vec
        elif gate.kind == "s":
            (q,) = gate.qubits
            xbit, zbit = 1 << q, 1 << (w + q)
            for t, vec in enumerate(self.images):
                if vec & xbit:
                    self.images[t] = vec ^ zbit
        elif gate.kind == "cnot":
            c, t_q = gate.qubits
            xc, xt = 1 << c, 1 << t_q
            zc, zt = 1 << (w + c), 1 << (w + t_q)
            for t, vec in enumerate(self.images):
                if vec & xc:
                    vec ^= xt
                if vec & zt:
                    vec ^= zc
                self.images[t] = vec
        elif gate.kind == "cz":
            a, b = gate.qubits
            xa, xb = 1 << a, 1 << b
            za, zb = 1 << (w + a), 1 << (w + b)
            for t, vec in enumerate(self.images):
                if vec & xa:
                    vec ^= zb
                if vec & xb:
                    vec ^= za
                self.images[t] = vec
        else:
            raise ValueError(f"unknown gate kind {gate.kind!r}")


def _not_in_span_solution(
    particular: int, null_basis: Sequence[int], span_rows: Sequence[int], rng: Optional[random.Random]
) -> Optional[int]:
    if rng is not None:
        for _ in range(64):
            cand = particular
            mask = rng.getrandbits(len(null_basis)) if null_basis else 0
            for b in range(len(null_basis)):
                if (mask >> b) & 1:
                    cand ^= null_basis[b]
            if not gf2_in_rowspan(cand, span_rows):
                return cand
    if not gf2_in_rowspan(particular, span_rows):
        return particular
    for vec in null_basis:
        if not gf2_in_rowspan(particular ^ vec, span_rows):
            return particular ^ vec
    return None


def complete_to_clifford(encoder: PartialEncoder, seed: int = 0) -> CliffordTableau:
    """Extend the encoder's input-output rows to a full symplectic map.

    New input directions are paired with compatible output images one at a
    time; every commutation relation already fixed is preserved, and the
    given rows map exactly as specified.  Seed 0 extends along the standard
    basis; other seeds randomize both the direction and the image choice.
    """
    w = encoder.width
    in_vecs: List[int] = []
    out_vecs: List[int] = []
    for row in encoder.all_rows:
        in_p = row.input_pauli()
        out_p = row.output_pauli()
        assert in_p.width == w and out_p.width == w
        in_vecs.append(pauli_to_vec(in_p))
        out_vecs.append(pauli_to_vec(out_p))
    for i in range(len(in_vecs)):
        for j in range(i + 1, len(in_vecs)):
            if symplectic_product_vec(
                in_vecs[i], in_vecs[j], w
            ) != symplectic_product_vec(out_vecs[i], out_vecs[j], w):
                raise CompletionError(
                    f"rows {i + 1} and {j + 1} do not transform consistently"
                )
    deps = gf2_row_dependencies(in_vecs)
    if deps:
        members = [str(b + 1) for b in range(len(in_vecs)) if (deps[0] >> b) & 1]
        raise CompletionError(
            "input rows are dependent: rows " + ", ".join(members)
        )
    rng = random.Random(seed) if seed != 0 else None
    basis_in = list(in_vecs)
    basis_out = list(out_vecs)
    while len(basis_in) < 2 * w:
        v = None
        if rng is not None:
            while True:
                cand = rng.getrandbits(2 * w)
                if cand and not gf2_in_rowspan(cand, basis_in):
                    v = cand
                    break
        else:
            for t in range(2 * w):
                if not gf2_in_rowspan(1 << t, basis_in):
                    v = 1 << t
                    break
        assert v is not None
        rhs = [symplectic_product_vec(v, b, w) for b in basis_in]
        words = [_swap_halves(b, w) for b in basis_out]
        solved = gf2_solve_dot_system(words, 2 * w, rhs)
        assert solved is not None
        particular, null_basis = solved
        image = _not_in_span_solution(particular, null_basis, basis_out, rng)
        if image is None:
            raise CompletionError(
                "no independent image for a new input direction; given rows are "
                "not jointly symplectic"
            )
        basis_in.append(v)
        basis_out.append(image)
    inverse = gf2_invert(basis_in, 2 * w)
    assert inverse is not None
    images = []
    for t in range(2 * w):
        img = 0
        mask = inverse[t]
        while mask:
            i = (mask & -mask).bit_length() - 1
            img ^= basis_out[i]
            mask &= mask - 1
        images.append(img)
    tableau = CliffordTableau(w, images)
    assert tableau.is_symplectic()
    for in_vec, out_vec in zip(in_vecs, out_vecs):
        assert tableau.image_of_vector(in_vec) == out_vec
    return tableau


def synthesize_circuit(tableau: CliffordTableau) -> List[Gate]:
    """Gate list whose replay onto the identity tableau reproduces the input.

    One qubit at a time, conjugation by primitive gates reduces the working
    tableau to the identity; the reversed gate sequence (every primitive is
    its own inverse) is the circuit.  Gate count stays below
    GATE_COUNT_FACTOR * width**2.
    """
    w = tableau.width
    work = tableau.copy()
    applied: List[Gate] = []

    def emit(kind: str, *qubits: int) -> None:
        gate = Gate(kind, qubits)
        work.apply_gate(gate)
        applied.append(gate)

    for q in range(w):
        xbit, zbit = 1 << q, 1 << (w + q)
        a = work.images[q]
        # Give the X_q image an x component on qubit q itself.
        if not a & xbit:
            pivot = None
            for r in range(q, w):
                if a & (1 << r):
                    pivot = r
                    break
            if pivot is None:
                for r in range(q, w):
                    if a & (1 << (w + r)):
                        emit("h", r)
                        pivot = r
                        break
            assert pivot is not None
            if pivot != q:
                emit("cnot", pivot, q)
        # Clear every other component of the X_q image.
        a = work.images[q]
        for r in range(q + 1, w):
            if a & (1 << r):
                emit("cnot", q, r)
        a = work.images[q]
        if a & zbit:
            emit("s", q)
        a = work.images[q]
        for r in range(q + 1, w):
            if a & (1 << (w + r)):
                emit("cz", q, r)
        assert work.images[q] == xbit
        # Fix the Z_q image, conjugating through h so the same sweep applies.
        if work.images[w + q] != zbit:
            emit("h", q)
            b = work.images[w + q]
            assert b & xbit
            for r in range(q + 1, w):
                if b & (1 << r):
                    emit("cnot", q, r)
            b = work.images[w + q]
            if b & zbit:
                emit("s", q)
            b = work.images[w + q]
            for r in range(q + 1, w):
                if b & (1 << (w + r)):
                    emit("cz", q, r)
            assert work.images[w + q] == xbit
            emit("h", q)
        assert work.images[q] == xbit and work.images[w + q] == zbit
    assert work.is_identity()
    gates = list(reversed(applied))
    assert len(gates) <= GATE_COUNT_FACTOR * w * w
    replayed = replay_gates(w, gates)
    assert replayed == tableau
    return gates


def replay_gates(width: int, gates: Iterable[Gate]) -> CliffordTableau:
    tableau = CliffordTableau.identity(width)
    for gate in gates:
        tableau.apply_gate(gate)
    return tableau


@dataclass(frozen=True)
class StateDiagramEdge:
    """One transition: inputs (M, S_z, L) produce outputs (P, M')."""

    mem_from: Pauli
    anc: Pauli
    logical: Pauli
    physical: Pauli
    mem_to: Pauli

    @property
    def logical_weight(self) -> int:
        p = self.logical
        weight = 0
        for q in range(p.width):
            if ((p.x >> q) | (p.z >> q)) & 1:
                weight += 1
        return weight

    def as_strings(self) -> Dict[str, str]:
        return {
            "mem_from": str(self.mem_from),
            "anc": str(self.anc),
            "logical": str(self.logical),
            "physical": str(self.physical),
            "mem_to": str(self.mem_to),
        }


@dataclass
class CycleWitness:
    """Zero-physical cycle carrying at least one non-identity logical label."""

    vertices: List[Pauli]
    edges: List[StateDiagramEdge]

    @property
    def logical_weight(self) -> int:
        return sum(edge.logical_weight for edge in self.edges)


def _check_memory_bound(m: int, max_memory: int) -> None:
    if m > max_memory:
        raise MemoryBoundError(m, max_memory)


def _edge_from_input(
    tableau: CliffordTableau, n: int, k: int, m: int, mem: Pauli, anc_mask: int, logical: Pauli
) -> StateDiagramEdge:
    w = tableau.width
    info_shift = m + (n - k)
    x = mem.x | (logical.x << info_shift)
    z = mem.z | (anc_mask << m) | (logical.z << info_shift)
    out = tableau.image_of_vector(x | (z << w))
    out_x = out & ((1 << w) - 1)
    out_z = out >> w
    phys_mask = (1 << n) - 1
    physical = Pauli(n, out_x & phys_mask, out_z & phys_mask)
    mem_to = Pauli(m, out_x >> n, out_z >> n)
    return StateDiagramEdge(
        mem_from=mem,
        anc=Pauli(n - k, 0, anc_mask),
        logical=logical,
        physical=physical,
        mem_to=mem_to,
    )


def zero_physical_edges(
    tableau: CliffordTableau, n: int, k: int, m: int, max_memory: int = DEFAULT_MEMORY_BOUND
) -> List[StateDiagramEdge]:
    """Every state-diagram edge whose physical output is the identity.

    The zero-physical condition is linear over the allowed inputs (memory
    X/Z, ancilla Z, logical X/Z), so the solution space is enumerated from a
    nullspace basis instead of scanning all inputs.
    """
    _check_memory_bound(m, max_memory)
    w = tableau.width
    assert w == m + n
    info_shift = m + (n - k)
    # Input coefficient directions, as full input vectors.
    directions: List[int] = []
    for q in range(m):
        directions.append(1 << q)  # memory X
        directions.append(1 << (w + q))  # memory Z
    for q in range(n - k):
        directions.append(1 << (w + m + q))  # ancilla Z
    for q in range(k):
        directions.append(1 << (info_shift + q))  # logical X
        directions.append(1 << (w + info_shift + q))  # logical Z
    image_vecs = [tableau.image_of_vector(d) for d in directions]
    phys_positions = [p for p in range(n)] + [w + p for p in range(n)]
    words = []
    for pos in phys_positions:
        word = 0
        for t, img in enumerate(image_vecs):
            if (img >> pos) & 1:
                word |= 1 << t
        words.append(word)
    solved = gf2_solve_dot_system(words, len(directions), [0] * len(words))
    assert solved is not None
    particular, null_basis = solved
    assert particular == 0
    edges = []
    for combo in range(1 << len(null_basis)):
        coeffs = 0
        c = combo
        while c:
            b = (c & -c).bit_length() - 1
            coeffs ^= null_basis[b]
            c &= c - 1
        in_vec = 0
        cc = coeffs
        while cc:
            t = (cc & -cc).bit_length() - 1
            in_vec ^= directions[t]
            cc &= cc - 1
        x = in_vec & ((1 << w) - 1)
        z = in_vec >> w
        mem = Pauli(m, x & ((1 << m) - 1), z & ((1 << m) - 1))
        anc_mask = (z >> m) & ((1 << (n - k)) - 1)
        logical = Pauli(
            k,
            (x >> info_shift) & ((1 << k) - 1),
            (z >> info_shift) & ((1 << k) - 1),
        )
        edge = _edge_from_input(tableau, n, k, m, mem, anc_mask, logical)
        assert edge.physical.is_identity
        edges.append(edge)
    return edges


def _vertex_int(p: Pauli) -> int:
    return p.x | (p.z << p.width)


def _zero_physical_graph(
    edges: Sequence[StateDiagramEdge],
) -> "nx.MultiDiGraph":
    graph = nx.MultiDiGraph()
    for idx, edge in enumerate(edges):
        graph.add_edge(_vertex_int(edge.mem_from), _vertex_int(edge.mem_to), key=idx)
    return graph


def detect_catastrophic(
    tableau: CliffordTableau, n: int, k: int, m: int, max_memory: int = DEFAULT_MEMORY_BOUND
) -> Tuple[bool, Optional[CycleWitness]]:
    """Search the zero-physical subgraph for a cycle with logical content.

    An edge with a non-identity logical label whose endpoints share a
    strongly connected component always closes to a cycle of zero-physical
    edges, and conversely any offending cycle contains such an edge.
    """
    edges = zero_physical_edges(tableau, n, k, m, max_memory)
    graph = _zero_physical_graph(edges)
    component_of: Dict[int, int] = {}
    for comp_index, comp in enumerate(nx.strongly_connected_components(graph)):
        for node in comp:
            component_of[node] = comp_index
    for edge in edges:
        if edge.logical_weight == 0:
            continue
        u = _vertex_int(edge.mem_from)
        v = _vertex_int(edge.mem_to)
        if u == v:
            return True, CycleWitness(vertices=[edge.mem_from], edges=[edge])
        if component_of[u] == component_of[v]:
            path = nx.shortest_path(graph, v, u)
            witness_edges = [edge]
            vertices = [edge.mem_from]
            by_pair: Dict[Tuple[int, int], StateDiagramEdge] = {}
            for e in edges:
                pair = (_vertex_int(e.mem_from), _vertex_int(e.mem_to))
                by_pair.setdefault(pair, e)
            for a, b in zip(path, path[1:]):
                witness_edges.append(by_pair[(a, b)])
                vertices.append(Pauli(m, a & ((1 << m) - 1), a >> m))
            return True, CycleWitness(vertices=vertices, edges=witness_edges)
    return False, None


def _loop_vertices(graph: "nx.MultiDiGraph") -> List[int]:
    """Vertices lying on at least one cycle of the given subgraph."""
    on_loop = set()
    for comp in nx.strongly_connected_components(graph):
        if len(comp) > 1:
            on_loop.update(comp)
        else:
            (node,) = comp
            if graph.has_edge(node, node):
                on_loop.add(node)
    return sorted(on_loop)


def _weight_one_labels(k: int) -> List[Pauli]:
    labels = []
    for q in range(k):
        for x, z in ((1, 0), (0, 1), (1, 1)):
            labels.append(Pauli(k, x << q, z << q))
    return labels


def verify_non_recursive(
    tableau: CliffordTableau, n: int, k: int, m: int, max_memory: int = DEFAULT_MEMORY_BOUND
) -> Tuple[bool, Optional[List[StateDiagramEdge]]]:
    """Find a path out of a zero-physical loop that returns to one.

    The first edge carries exactly one non-identity logical label and must
    not itself sit on a zero-physical cycle; all later inputs are identity,
    which makes the continuation a deterministic walk.  Success exhibits
    finite-impulse behavior: the encoder is not recursive.
    """
    edges = zero_physical_edges(tableau, n, k, m, max_memory)
    graph = _zero_physical_graph(edges)
    component_of: Dict[int, int] = {}
    for comp_index, comp in enumerate(nx.strongly_connected_components(graph)):
        for node in comp:
            component_of[node] = comp_index
    loop_vertices = set(_loop_vertices(graph))
    if not loop_vertices:
        # No zero-physical loop at all: trivially nothing to escape from.
        return True, []
    for start in sorted(loop_vertices):
        mem = Pauli(m, start & ((1 << m) - 1), start >> m)
        for logical in _weight_one_labels(k):
            for anc_mask in range(1 << (n - k)):
                first = _edge_from_input(tableau, n, k, m, mem, anc_mask, logical)
                if first.physical.is_identity:
                    u = _vertex_int(first.mem_from)
                    v = _vertex_int(first.mem_to)
                    if u == v or component_of.get(u) == component_of.get(v):
                        continue  # first edge lies on a zero-physical cycle
                path = [first]
                current = first.mem_to
                seen = set()
                found = False
                while True:
                    if _vertex_int(current) in loop_vertices:
                        found = True
                        break
                    if _vertex_int(current) in seen:
                        break
                    seen.add(_vertex_int(current))
                    step = _edge_from_input(
                        tableau, n, k, m, current, 0, Pauli.identity(k)
                    )
                    path.append(step)
                    current = step.mem_to
                if found:
                    return True, path
    return False, None


def roundtrip_verify(tableau: CliffordTableau, code: ConvolutionalCode) -> int:
    """Stream each generator through the encoder frame by frame.

    Ancilla i carries Z in the first frame and identity afterwards; the
    emitted physical blocks must reproduce the generator's blocks and the
    memory must return to identity.
    """
    n, k = code.n, code.k
    m = tableau.width - n
    for i, gen in enumerate(code.generators):
        mem = Pauli.identity(m)
        for j, block in enumerate(gen.blocks):
            anc_mask = (1 << i) if j == 0 else 0
            edge = _edge_from_input(
                tableau, n, k, m, mem, anc_mask, Pauli.identity(k)
            )
            if edge.physical != block:
                return 0
            mem = edge.mem_to
        if not mem.is_identity:
            return 0
    return 1
