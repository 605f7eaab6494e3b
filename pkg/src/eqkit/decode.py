"""Linear-time recursive decoding of binary vectors from their matrix image.

For a matrix grown by the binary block recursion from the 1x1 base [1],
z = A*x splits as z = (z1, z2) and the preimage parts follow from

    x3 = (z1 + z2) mod 2        (entrywise)
    A' * x1 = (z1 + z2 - x3) / 2
    A' * x2 = (z1 - z2 - x3) / 2

with x = (x1, x2, x3).  Both divisions are exact by construction of x3, so
membership in the image is decided entirely by the base case: a leaf value
outside {0,1} proves z is not an image point.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .matrix import ConstructionTrace, IntMatrix, matvec


class NotInImageError(ValueError):
    """The target vector is not A*x for any binary x."""


@dataclass
class OpCounter:
    """Counts the arithmetic operations a decode performs."""

    ops: int = 0


def encode(a: IntMatrix, x: Sequence[int]) -> tuple[int, ...]:
    """A*x restricted to binary input vectors."""
    if any(v not in (0, 1) for v in x):
        raise ValueError("encode requires a binary vector")
    return matvec(a, x)


def decode(
    trace: ConstructionTrace, z: Sequence[int], counter: Optional[OpCounter] = None
) -> tuple[int, ...]:
    """Unique binary preimage of z under the traced construction.

    Only binary (q=2) traces over the 1x1 base are decodable; raises
    NotInImageError when no binary preimage exists.
    """
    if trace.q != 2 or (trace.m0, trace.n0) != (1, 1):
        raise ValueError("decoding requires a q=2 trace over the 1x1 base [1]")
    if len(z) != trace.rows:
        raise ValueError(
            f"target length {len(z)} does not match trace rows {trace.rows}"
        )
    return tuple(_decode(trace.k, tuple(int(v) for v in z), counter))


def _decode(k: int, z: tuple[int, ...], counter: Optional[OpCounter]) -> list[int]:
    if k == 0:
        if z[0] not in (0, 1):
            raise NotInImageError("z not in image")
        return [z[0]]
    half = len(z) // 2
    z1, z2 = z[:half], z[half:]
    bits = []
    left = []
    right = []
    for u, v in zip(z1, z2):
        s = u + v
        bit = s % 2
        bits.append(bit)
        left.append((s - bit) // 2)
        right.append((u - v - bit) // 2)
    if counter is not None:
        counter.ops += 7 * half
    x1 = _decode(k - 1, tuple(left), counter)
    x2 = _decode(k - 1, tuple(right), counter)
    return x1 + x2 + bits
