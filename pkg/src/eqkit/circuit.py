"""Threshold-circuit IR, matrix-to-circuit compilers, and exhaustive equivalence checks.

Gate semantics over the integer values v of the fan-in sources:

    LT     outputs 1 iff sum(w_i * v_i) >= bias
    EXACT  outputs 1 iff sum(w_i * v_i) == bias
    SUM    outputs the integer sum(w_i * v_i) + bias
    INPUT  carries one assignment bit, empty fan-in

Biases are gate fields, never dedicated input wires.  Depth counts LT and
EXACT gates on the longest input-to-output path; SUM gates are wiring.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from .matrix import IntMatrix, checked
from .verify import CapExceededError, DEFAULT_STEP_CAP, is_eq_q, is_rmds

INPUT = "INPUT"
LT = "LT"
EXACT = "EXACT"
SUM = "SUM"
_KINDS = (INPUT, LT, EXACT, SUM)

_INT64_SAFE = 1 << 62


class CircuitFormatError(ValueError):
    """Circuit text does not conform to the file format."""


@dataclass(frozen=True)
class Gate:
    gid: int
    kind: str
    fan_in: tuple[tuple[int, int], ...] = ()
    bias: int = 0

    def __post_init__(self) -> None:
        if self.kind not in _KINDS:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        if self.kind == INPUT and self.fan_in:
            raise ValueError("INPUT gates take no fan-in")
        object.__setattr__(
            self, "fan_in", tuple((int(s), checked(int(w))) for s, w in self.fan_in)
        )
        object.__setattr__(self, "bias", checked(int(self.bias)))


class ThresholdCircuit:
    """Immutable DAG of gates with one designated output."""

    def __init__(self, gates: Iterable[Gate], inputs: Sequence[int], output: int):
        gate_map: dict[int, Gate] = {}
        for g in gates:
            if g.gid in gate_map:
                raise ValueError(f"duplicate gate id {g.gid}")
            gate_map[g.gid] = g
        for gid in inputs:
            if gid not in gate_map or gate_map[gid].kind != INPUT:
                raise ValueError(f"input id {gid} is not an INPUT gate")
        if output not in gate_map:
            raise ValueError(f"output id {output} does not exist")
        for g in gate_map.values():
            for src, _ in g.fan_in:
                if src not in gate_map:
                    raise ValueError(f"gate {g.gid} references missing source {src}")
        self._gates = gate_map
        self._inputs = tuple(inputs)
        self._output = output
        self._order = self._topological_order()
        self._depth = self._compute_depth()

    def _topological_order(self) -> tuple[int, ...]:
        indegree = {gid: len(g.fan_in) for gid, g in self._gates.items()}
        consumers: dict[int, list[int]] = {gid: [] for gid in self._gates}
        for gid, g in self._gates.items():
            for src, _ in g.fan_in:
                consumers[src].append(gid)
        ready = sorted(gid for gid, d in indegree.items() if d == 0)
        order: list[int] = []
        while ready:
            gid = ready.pop(0)
            order.append(gid)
            inserted = []
            for nxt in consumers[gid]:
                indegree[nxt] -= 1
                if indegree[nxt] == 0:
                    inserted.append(nxt)
            for nxt in sorted(inserted):
                ready.append(nxt)
        if len(order) != len(self._gates):
            raise ValueError("circuit contains a cycle")
        return tuple(order)

    def _compute_depth(self) -> int:
        depth: dict[int, int] = {}
        for gid in self._order:
            g = self._gates[gid]
            below = max((depth[src] for src, _ in g.fan_in), default=0)
            depth[gid] = below + (1 if g.kind in (LT, EXACT) else 0)
        return depth[self._output]

    @property
    def gates(self) -> dict[int, Gate]:
        return dict(self._gates)

    @property
    def inputs(self) -> tuple[int, ...]:
        return self._inputs

    @property
    def output(self) -> int:
        return self._output

    @property
    def topo_order(self) -> tuple[int, ...]:
        return self._order

    @property
    def depth(self) -> int:
        return self._depth

    @property
    def gate_count(self) -> int:
        """Number of non-input gates."""
        return sum(1 for g in self._gates.values() if g.kind != INPUT)

    @property
    def max_weight(self) -> int:
        return max(
            (abs(w) for g in self._gates.values() for _, w in g.fan_in), default=0
        )

    @property
    def max_bias(self) -> int:
        return max(abs(g.bias) for g in self._gates.values())


def eval_circuit(
    c: ThresholdCircuit, assignment: Sequence[int], want_trace: bool = False
) -> Union[int, tuple[int, dict[int, int]]]:
    """Topological evaluation on one bit assignment; optionally the per-gate trace."""
    if len(assignment) != len(c.inputs):
        raise ValueError(
            f"assignment length {len(assignment)} != input count {len(c.inputs)}"
        )
    if any(b not in (0, 1) for b in assignment):
        raise ValueError("assignment entries must be bits")
    values: dict[int, int] = dict(zip(c.inputs, (int(b) for b in assignment)))
    for gid in c.topo_order:
        g = c.gates[gid]
        if g.kind == INPUT:
            continue
        acc = 0
        for src, w in g.fan_in:
            acc = checked(acc + checked(w * values[src]))
        if g.kind == LT:
            values[gid] = 1 if acc >= g.bias else 0
        elif g.kind == EXACT:
            values[gid] = 1 if acc == g.bias else 0
        else:
            values[gid] = checked(acc + g.bias)
    result = values[c.output]
    return (result, values) if want_trace else result


def _assignment_bits(n_inputs: int) -> np.ndarray:
    """All 2**n assignments in lexicographic order (input 0 most significant)."""
    total = 1 << n_inputs
    shifts = np.arange(n_inputs - 1, -1, -1, dtype=np.int64)
    return ((np.arange(total, dtype=np.int64)[:, None] >> shifts) & 1).astype(np.int64)


def _fits_int64(c: ThresholdCircuit) -> bool:
    """Whether every reachable gate value stays within the vectorized budget."""
    reach: dict[int, int] = {}
    for gid in c.topo_order:
        g = c.gates[gid]
        if g.kind == INPUT:
            reach[gid] = 1
            continue
        magnitude = sum(abs(w) * reach[src] for src, w in g.fan_in) + abs(g.bias)
        if magnitude >= _INT64_SAFE:
            return False
        reach[gid] = magnitude if g.kind == SUM else 1
    return True


def _eval_all(c: ThresholdCircuit, bits: np.ndarray) -> dict[int, np.ndarray]:
    """Vectorized evaluation over every assignment row of ``bits``."""
    values: dict[int, np.ndarray] = {}
    for pos, gid in enumerate(c.inputs):
        values[gid] = bits[:, pos]
    for gid in c.topo_order:
        g = c.gates[gid]
        if g.kind == INPUT:
            continue
        acc = np.zeros(bits.shape[0], dtype=np.int64)
        for src, w in g.fan_in:
            acc += w * values[src]
        if g.kind == LT:
            values[gid] = (acc >= g.bias).astype(np.int64)
        elif g.kind == EXACT:
            values[gid] = (acc == g.bias).astype(np.int64)
        else:
            values[gid] = acc + g.bias
    return values


def reference_eq(n: int, bits: np.ndarray) -> np.ndarray:
    x = bits[:, :n] @ (1 << np.arange(n, dtype=np.int64))
    y = bits[:, n:] @ (1 << np.arange(n, dtype=np.int64))
    return (x == y).astype(np.int64)


def reference_comp(n: int, bits: np.ndarray) -> np.ndarray:
    x = bits[:, :n] @ (1 << np.arange(n, dtype=np.int64))
    y = bits[:, n:] @ (1 << np.arange(n, dtype=np.int64))
    return (x >= y).astype(np.int64)


def reference_parity(n: int, bits: np.ndarray) -> np.ndarray:
    return bits.sum(axis=1) % 2


def reference_value_set(
    weights: Sequence[int], values: Iterable[int], bits: np.ndarray
) -> np.ndarray:
    sums = bits @ np.array(weights, dtype=np.int64)
    return np.isin(sums, np.array(sorted(set(values)), dtype=np.int64)).astype(
        np.int64
    )


def exhaustive_check(
    c: ThresholdCircuit,
    reference: str,
    n: Optional[int] = None,
    weights: Optional[Sequence[int]] = None,
    values: Optional[Iterable[int]] = None,
    cap: Optional[int] = None,
) -> Optional[tuple[int, ...]]:
    """Compare the circuit to a named reference on every assignment.

    reference is one of "eq", "comp" (2n inputs, x then y, bit i weighing
    2**i), "parity" (n inputs), or "valueset" (weights/values).  Returns
    None on agreement, else the first mismatching assignment.
    """
    n_inputs = len(c.inputs)
    allowed = DEFAULT_STEP_CAP if cap is None else cap
    if 1 << n_inputs > allowed:
        raise CapExceededError(1 << n_inputs, allowed)
    if reference in ("eq", "comp"):
        if n is None or n_inputs != 2 * n:
            raise ValueError(f"{reference} reference needs 2n inputs")
    elif reference == "parity":
        if n is not None and n != n_inputs:
            raise ValueError("parity reference needs n inputs")
    elif reference == "valueset":
        if weights is None or values is None:
            raise ValueError("valueset reference needs weights and values")
        if len(weights) != n_inputs:
            raise ValueError("valueset weights must match the input count")
    else:
        raise ValueError(f"unknown reference {reference!r}")
    if not _fits_int64(c):
        return _exhaustive_check_py(c, reference, n, weights, values)
    bits = _assignment_bits(n_inputs)
    got = _eval_all(c, bits)[c.output]
    if reference == "eq":
        want = reference_eq(n, bits)
    elif reference == "comp":
        want = reference_comp(n, bits)
    elif reference == "parity":
        want = reference_parity(n_inputs, bits)
    else:
        want = reference_value_set(weights, values, bits)
    bad = np.flatnonzero(got != want)
    if bad.size == 0:
        return None
    return tuple(int(b) for b in bits[bad[0]])


def _exhaustive_check_py(c, reference, n, weights, values):
    """Exact-arithmetic path for circuits whose values outgrow int64."""
    n_inputs = len(c.inputs)
    accepted = set(values) if values is not None else None
    for counter in range(1 << n_inputs):
        bits = tuple((counter >> (n_inputs - 1 - t)) & 1 for t in range(n_inputs))
        if reference == "eq" or reference == "comp":
            x = sum(b << i for i, b in enumerate(bits[:n]))
            y = sum(b << i for i, b in enumerate(bits[n:]))
            want = 1 if (x == y if reference == "eq" else x >= y) else 0
        elif reference == "parity":
            want = sum(bits) % 2
        else:
            want = 1 if sum(w * b for w, b in zip(weights, bits)) in accepted else 0
        if eval_circuit(c, bits) != want:
            return bits
    return None


def compile_eq_circuit(
    a: IntMatrix, verify: bool = True, cap: Optional[int] = None
) -> ThresholdCircuit:
    """Depth-2 equality circuit over 2n inputs (x_1..x_n, y_1..y_n).

    Layer 1 holds one EXACT gate per matrix row with weights (row, -row) and
    bias 0; the top EXACT gate ANDs the layer together (all-ones weights,
    bias m).  Total m + 1 gates beyond the inputs.
    """
    if verify:
        witness = is_eq_q(a, 2, mode="injectivity", cap=cap)
        if witness is not None:
            raise ValueError(
                f"matrix failed the EQ check (kernel vector {witness.x}); "
                "pass verify=False to compile anyway"
            )
    n, m = a.n, a.m
    gates = [Gate(i + 1, INPUT) for i in range(2 * n)]
    layer = []
    for i in range(m):
        fan = [(j + 1, a[i, j]) for j in range(n) if a[i, j]]
        fan += [(n + j + 1, -a[i, j]) for j in range(n) if a[i, j]]
        gid = 2 * n + 1 + i
        gates.append(Gate(gid, EXACT, tuple(fan), 0))
        layer.append(gid)
    top = 2 * n + m + 1
    gates.append(Gate(top, EXACT, tuple((gid, 1) for gid in layer), m))
    return ThresholdCircuit(gates, tuple(range(1, 2 * n + 1)), top)


def compile_value_set(
    weights: Sequence[int], values: Iterable[int]
) -> ThresholdCircuit:
    """Depth-2 circuit for 1{weights . x in values}: one EXACT gate per value, OR on top."""
    weights = [int(w) for w in weights]
    accepted = sorted(set(int(s) for s in values))
    n = len(weights)
    if n < 1:
        raise ValueError("at least one weight is required")
    if not accepted:
        warnings.warn("empty accepted set; emitting a constant-0 circuit")
    gates = [Gate(i + 1, INPUT) for i in range(n)]
    layer = []
    for offset, s in enumerate(accepted):
        gid = n + 1 + offset
        fan = tuple((j + 1, w) for j, w in enumerate(weights) if w)
        gates.append(Gate(gid, EXACT, fan, s))
        layer.append(gid)
    top = n + len(accepted) + 1
    gates.append(Gate(top, LT, tuple((gid, 1) for gid in layer), 1))
    return ThresholdCircuit(gates, tuple(range(1, n + 1)), top)


def compile_comp_circuit(
    a: IntMatrix,
    n: int,
    m: int,
    r: int,
    verify: bool = True,
    cap: Optional[int] = None,
) -> ThresholdCircuit:
    """Depth-2 comparison circuit (output 1 iff X >= Y) from an rm x n RMDS_3 matrix.

    Coordinate j (weight 2**(j-1)) is matched to column j.  Level l of the
    first layer restricts the matrix to columns l+1..n and tests, row-wise,
    whether the difference window equals minus the column matched to
    coordinate l+1 - i.e. whether the leading difference bit at level l is
    -1.  The top gate fires unless some level lights up a full row block:
    all weights -1, bias -n(m-1)+1.
    """
    if a.m != r * m or a.n != n:
        raise ValueError(f"matrix must be {r * m}x{n} for these parameters")
    if r * m <= n * (m - 1):
        raise ValueError(
            f"separation requires r*m > n*(m-1); got {r * m} <= {n * (m - 1)}"
        )
    if verify:
        witness = is_rmds(a, m, 3, cap=cap)
        if witness is not None:
            raise ValueError(
                f"matrix failed the RMDS_3 check (rows {witness.rows}, kernel "
                f"{witness.kernel.x}); pass verify=False to compile anyway"
            )
    rm = r * m
    gates = [Gate(i + 1, INPUT) for i in range(2 * n)]
    layer = []
    gid = 2 * n
    for level in range(n):
        for i in range(rm):
            gid += 1
            fan = [(j + 1, a[i, j]) for j in range(level, n) if a[i, j]]
            fan += [(n + j + 1, -a[i, j]) for j in range(level, n) if a[i, j]]
            gates.append(Gate(gid, EXACT, tuple(fan), -a[i, level]))
            layer.append(gid)
    top = gid + 1
    gates.append(Gate(top, LT, tuple((g, -1) for g in layer), -n * (m - 1) + 1))
    return ThresholdCircuit(gates, tuple(range(1, 2 * n + 1)), top)


def exactify_to_lt(c: ThresholdCircuit) -> ThresholdCircuit:
    """Rewrite every EXACT gate into a complementary LT pair.

    1{F = b} = 1{F >= b} + 1{-F >= -b} - 1: consumers take both halves with
    the original weight and absorb the constant -1 into their bias (raising
    an LT/EXACT threshold by the weight, lowering a SUM offset by it).  An
    EXACT output gate gains one SUM gate to realize the -1.
    """
    next_id = max(c.gates) + 1
    split: dict[int, tuple[int, int]] = {}
    gates: list[Gate] = []
    for gid in c.topo_order:
        g = c.gates[gid]
        if g.kind == INPUT:
            gates.append(g)
            continue
        fan: list[tuple[int, int]] = []
        bias = g.bias
        for src, w in g.fan_in:
            if src in split:
                plus, minus = split[src]
                fan.append((plus, w))
                fan.append((minus, w))
                bias = bias - w if g.kind == SUM else bias + w
            else:
                fan.append((src, w))
        if g.kind == EXACT:
            gates.append(Gate(gid, LT, tuple(fan), bias))
            minus_gate = Gate(
                next_id, LT, tuple((s, -w) for s, w in fan), -bias
            )
            next_id += 1
            gates.append(minus_gate)
            split[gid] = (gid, minus_gate.gid)
        else:
            gates.append(Gate(gid, g.kind, tuple(fan), bias))
    output = c.output
    if output in split:
        plus, minus = split[output]
        gates.append(Gate(next_id, SUM, ((plus, 1), (minus, 1)), -1))
        output = next_id
    return ThresholdCircuit(gates, c.inputs, output)


def write_circuit(c: ThresholdCircuit) -> str:
    """Line-based text form: inputs/output headers, then one gate per line."""
    lines = [
        "inputs " + " ".join(str(i) for i in c.inputs),
        f"output {c.output}",
    ]
    for gid in sorted(c.gates):
        g = c.gates[gid]
        parts = [str(gid), g.kind, str(g.bias)]
        parts.extend(f"{src}:{w}" for src, w in g.fan_in)
        lines.append(" ".join(parts))
    return "\n".join(lines) + "\n"


def read_circuit(text: str) -> ThresholdCircuit:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if len(lines) < 3 or not lines[0].startswith("inputs ") or not lines[1].startswith(
        "output "
    ):
        raise CircuitFormatError("expected 'inputs ...' and 'output ...' headers")
    try:
        inputs = tuple(int(t) for t in lines[0].split()[1:])
        output = int(lines[1].split()[1])
    except (ValueError, IndexError):
        raise CircuitFormatError("malformed header") from None
    gates = []
    for line in lines[2:]:
        tokens = line.split()
        if len(tokens) < 3:
            raise CircuitFormatError(f"malformed gate line {line!r}")
        try:
            gid = int(tokens[0])
            kind = tokens[1]
            bias = int(tokens[2])
            fan = []
            for tok in tokens[3:]:
                src, _, w = tok.partition(":")
                fan.append((int(src), int(w)))
        except ValueError:
            raise CircuitFormatError(f"malformed gate line {line!r}") from None
        gates.append(Gate(gid, kind, tuple(fan), bias))
    return ThresholdCircuit(gates, inputs, output)


def format_trace(values: dict[int, int]) -> str:
    return "\n".join(f"gate {gid} = {values[gid]}" for gid in sorted(values)) + "\n"
