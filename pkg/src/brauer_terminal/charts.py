"""Etale-local SNC coordinate charts and their combinatorial blow-ups.

A chart models spec k{x1,...,xn}: n coordinate slots, each bound to the
prime divisor cut out by that coordinate. Blowing up a coordinate stratum
returns the standard affine charts of the blow-up; everything is tracked on
exponent lattices through integer substitution matrices, so the whole module
is exact combinatorics with no geometry left implicit.

Substitution convention: column k of a substitution matrix is the exponent
vector, in child coordinates, of the monomial that parent coordinate k pulls
back to. Exponent vectors of monomials therefore transform as v -> A @ v,
and the substitution from the root chart to any descendant is the product of
the per-step matrices along its ancestry.

Exceptional divisors receive ids derived from their monomial valuation on
the root coordinates. The id is a pure function of the geometry, so the same
divisor reached through different blow-up routes gets the same id without
any shared counter, and id generation is trivially race-free.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Optional, Sequence, Tuple

ExponentMatrix = Tuple[Tuple[int, ...], ...]

_LABEL_RE = re.compile(r"[A-Za-z_]\w*")


def identity_substitution(dim: int) -> ExponentMatrix:
    """Identity matrix on the rank-`dim` exponent lattice."""
    return tuple(
        tuple(1 if i == j else 0 for j in range(dim)) for i in range(dim)
    )


def compose_substitutions(outer: Sequence[Sequence[int]],
                          inner: Sequence[Sequence[int]]) -> ExponentMatrix:
    """Matrix product outer @ inner over the integers."""
    n = len(outer)
    if any(len(row) != len(inner) for row in outer):
        raise ValueError("substitution shapes do not compose")
    cols = range(len(inner[0]) if inner else 0)
    return tuple(
        tuple(sum(outer[i][k] * inner[k][j] for k in range(len(inner))) for j in cols)
        for i in range(n)
    )


def apply_substitution(matrix: Sequence[Sequence[int]],
                       vector: Sequence[int]) -> Tuple[int, ...]:
    """Image A @ v of an exponent vector under a substitution."""
    if any(len(row) != len(vector) for row in matrix):
        raise ValueError("substitution does not match vector length")
    return tuple(sum(row[k] * vector[k] for k in range(len(vector))) for row in matrix)


def transpose(matrix: Sequence[Sequence[int]]) -> ExponentMatrix:
    return tuple(zip(*[tuple(row) for row in matrix])) if matrix else ()


@dataclass(frozen=True)
class Monomial:
    """A monomial x^u in chart coordinates, stored as its exponent vector."""

    exponents: Tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "exponents", tuple(int(e) for e in self.exponents))
        if not self.exponents:
            raise ValueError("monomial needs at least one coordinate")

    @property
    def dim(self) -> int:
        return len(self.exponents)

    def pullback(self, substitution: Sequence[Sequence[int]]) -> "Monomial":
        """Rewrite the monomial in child coordinates."""
        return Monomial(apply_substitution(substitution, self.exponents))

    def __mul__(self, other: "Monomial") -> "Monomial":
        if other.dim != self.dim:
            raise ValueError("monomials live in different charts")
        return Monomial(tuple(a + b for a, b in zip(self.exponents, other.exponents)))


@dataclass(frozen=True, eq=False)
class Chart:
    """One affine chart of an iterated coordinate blow-up.

    Charts are immutable; blow-ups return fresh children. ``substitution``
    maps parent-chart exponent vectors into this chart, ``total_substitution``
    maps root-chart exponent vectors into this chart, and both are unimodular
    by construction.
    """

    dim: int
    divisor_ids: Tuple[str, ...]
    substitution: ExponentMatrix
    total_substitution: ExponentMatrix
    parent: Optional["Chart"] = None
    parent_center: Optional[Tuple[int, ...]] = None
    pivot: Optional[int] = None

    def __post_init__(self) -> None:
        if self.dim < 1:
            raise ValueError("chart dimension must be at least 1")
        if len(self.divisor_ids) != self.dim:
            raise ValueError("one divisor id per coordinate slot required")
        if len(set(self.divisor_ids)) != self.dim:
            raise ValueError("divisor ids bound to a chart must be distinct")
        for matrix in (self.substitution, self.total_substitution):
            if len(matrix) != self.dim or any(len(row) != self.dim for row in matrix):
                raise ValueError("substitution must be a dim x dim matrix")
        if (self.parent is None) != (self.parent_center is None):
            raise ValueError("parent and parent_center must come together")

    @cached_property
    def chart_id(self) -> str:
        """Structural id encoding the blow-up ancestry (root is ``r``)."""
        if self.parent is None:
            return "r"
        center = "-".join(str(i + 1) for i in self.parent_center)
        return f"{self.parent.chart_id}.{center}p{self.pivot + 1}"

    @property
    def depth(self) -> int:
        return 0 if self.parent is None else self.parent.depth + 1

    def slot_of(self, divisor_id: str) -> int:
        """Coordinate slot a divisor is bound to.

        Raises:
            KeyError: if the divisor does not meet this chart.
        """
        try:
            return self.divisor_ids.index(divisor_id)
        except ValueError:
            raise KeyError(
                f"divisor {divisor_id!r} is not bound in chart {self.chart_id}"
            ) from None

    def valuation(self, slot: int) -> Tuple[int, ...]:
        """Monomial valuation of the slot's divisor on the root coordinates."""
        return self.total_substitution[slot]


@dataclass(frozen=True)
class Stratum:
    """A coordinate stratum V(x_{i_1}, ..., x_{i_c}) of a chart."""

    chart: Chart
    indices: Tuple[int, ...]

    def __post_init__(self) -> None:
        idx = tuple(sorted(int(i) for i in self.indices))
        if not idx:
            raise ValueError("a stratum needs at least one coordinate")
        if len(set(idx)) != len(idx):
            raise ValueError("stratum indices must be distinct")
        if idx[0] < 0 or idx[-1] >= self.chart.dim:
            raise ValueError("stratum indices out of range for the chart")
        object.__setattr__(self, "indices", idx)

    @property
    def codim(self) -> int:
        return len(self.indices)

    @property
    def chart_id(self) -> str:
        return self.chart.chart_id

    @property
    def divisor_ids(self) -> Tuple[str, ...]:
        return tuple(self.chart.divisor_ids[i] for i in self.indices)


def new_affine_model(dim: int, divisor_labels: Sequence[str]) -> Chart:
    """Create the root chart of spec k{x1,...,xn}.

    Args:
        dim: number of coordinates, at least 1.
        divisor_labels: distinct identifier-style labels, one per coordinate;
            each becomes the id of the corresponding original divisor.

    Returns:
        A root chart with identity substitution.

    Raises:
        ValueError: on a dimension/label mismatch, duplicate labels, or a
            label that could collide with generated exceptional ids.
    """
    labels = tuple(divisor_labels)
    if dim < 1:
        raise ValueError("dimension must be at least 1")
    if len(labels) != dim:
        raise ValueError(f"expected {dim} labels, got {len(labels)}")
    for label in labels:
        if not _LABEL_RE.fullmatch(label):
            raise ValueError(f"divisor label {label!r} is not an identifier")
    ident = identity_substitution(dim)
    return Chart(dim=dim, divisor_ids=labels, substitution=ident,
                 total_substitution=ident)


def exceptional_divisor_id(valuation: Sequence[int]) -> str:
    """Canonical divisor id for the given root-coordinate valuation."""
    return "E(" + ",".join(str(v) for v in valuation) + ")"


def blow_up(chart: Chart, center: Stratum) -> list[Chart]:
    """Blow up a chart along a coordinate stratum.

    In the chart with pivot i_j, coordinate i_j becomes the exceptional
    coordinate t and every other center coordinate i_l turns into its strict
    coordinate via x_{i_l} = t * y_{i_l}; coordinates outside the center are
    untouched and keep their divisor ids. All returned charts share one fresh
    exceptional divisor id.

    Args:
        chart: the chart to modify (unchanged; children are returned).
        center: a stratum of ``chart`` with codim >= 2.

    Returns:
        One child chart per center coordinate, in ascending pivot order.

    Raises:
        ValueError: if the center belongs to another chart or has codim < 2.
    """
    if center.chart is not chart:
        raise ValueError("center does not belong to the chart being blown up")
    if center.codim < 2:
        raise ValueError("blow-up centers must have codimension at least 2")
    n = chart.dim
    selected = set(center.indices)
    exc_valuation = tuple(
        sum(chart.total_substitution[i][k] for i in center.indices) for k in range(n)
    )
    exc_id = exceptional_divisor_id(exc_valuation)
    children = []
    for pivot in center.indices:
        step = tuple(
            tuple(
                1 if i == k else (1 if i == pivot and k in selected else 0)
                for k in range(n)
            )
            for i in range(n)
        )
        ids = tuple(
            exc_id if i == pivot else chart.divisor_ids[i] for i in range(n)
        )
        children.append(
            Chart(
                dim=n,
                divisor_ids=ids,
                substitution=step,
                total_substitution=compose_substitutions(step, chart.total_substitution),
                parent=chart,
                parent_center=center.indices,
                pivot=pivot,
            )
        )
    return children


def strata(chart: Chart, codim: int) -> list[Stratum]:
    """All coordinate strata of the given codimension, in lexicographic order.

    Raises:
        ValueError: unless 2 <= codim <= chart.dim.
    """
    if codim < 2 or codim > chart.dim:
        raise ValueError("stratum codimension must satisfy 2 <= codim <= dim")
    return [Stratum(chart, idx) for idx in combinations(range(chart.dim), codim)]


def multiplicity(center: Stratum, divisor_id: str) -> int:
    """Multiplicity of a coordinate divisor along a stratum (0 or 1).

    Raises:
        KeyError: if the divisor is not bound in the stratum's chart.
    """
    slot = center.chart.slot_of(divisor_id)
    return 1 if slot in center.indices else 0
