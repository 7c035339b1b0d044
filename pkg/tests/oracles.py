"""Independent reference implementations used to pin expected test values.

Nothing here imports the engine's internals beyond plain data. The symbol
oracle expands tame symbols from explicit exponent-vector pairs, the toric
oracle computes discrepancies straight from valuation vectors, and the
determinant is exact over Fractions. Tests compare the package against
these; the two sides share no code paths.
"""

from __future__ import annotations

from fractions import Fraction
from typing import List, Sequence, Tuple

Vec = Tuple[int, ...]
Symbol = Tuple[Vec, Vec, int]


def naive_matrix(dim: int, r: int, symbols: Sequence[Symbol]) -> List[List[int]]:
    """Matrix of a symbol list: sum of m * (u (x) v - v (x) u), mod r."""
    out = [[0] * dim for _ in range(dim)]
    for u, v, m in symbols:
        for i in range(dim):
            for j in range(dim):
                out[i][j] = (out[i][j] + m * (u[i] * v[j] - v[i] * u[j])) % r
    return out


def naive_residue(dim: int, r: int, symbols: Sequence[Symbol],
                  slot: int) -> Tuple[int, ...]:
    """Residue along a coordinate divisor, expanded symbol by symbol.

    The residue of m copies of (x^u, x^v) along slot i is the class of
    x^(m * (u_i v - v_i u)) with slot i removed.
    """
    acc = [0] * dim
    for u, v, m in symbols:
        for j in range(dim):
            acc[j] = (acc[j] + m * (u[slot] * v[j] - v[slot] * u[j])) % r
    return tuple(value for j, value in enumerate(acc) if j != slot)


def substitute_symbols(symbols: Sequence[Symbol],
                       matrix: Sequence[Sequence[int]]) -> List[Symbol]:
    """Pull every symbol argument through an exponent substitution."""

    def image(vec: Vec) -> Vec:
        return tuple(
            sum(row[k] * vec[k] for k in range(len(vec))) for row in matrix
        )

    return [(image(u), image(v), m) for u, v, m in symbols]


def toric_discrepancy(valuation: Sequence[int],
                      boundary: Sequence[Fraction]) -> Fraction:
    """Discrepancy of the monomial valuation v against a coordinate boundary.

    For the pair (affine space, sum of d_k D_k) this is
    sum_k v_k (1 - d_k) - 1.
    """
    total = sum(
        (Fraction(v) * (1 - Fraction(d)) for v, d in zip(valuation, boundary)),
        Fraction(0),
    )
    return total - 1


def determinant(matrix: Sequence[Sequence[int]]) -> Fraction:
    """Exact determinant by Laplace expansion; fine for the small dims here."""
    n = len(matrix)
    if n == 0:
        return Fraction(1)
    if n == 1:
        return Fraction(matrix[0][0])
    total = Fraction(0)
    for j in range(n):
        if matrix[0][j] == 0:
            continue
        minor = [
            [row[k] for k in range(n) if k != j] for row in matrix[1:]
        ]
        sign = -1 if j % 2 else 1
        total += sign * Fraction(matrix[0][j]) * determinant(minor)
    return total
