"""Brauer pairs on SNC charts: the symbol class plus divisor bookkeeping.

A ``Model`` couples a chart with the symbol matrix of the class restricted
to that chart, a registry of every divisor met so far, and the transported
data of any extra cyclic covers attached to original divisors. Blowing up a
model blows up the chart, pushes the matrix through the substitution, and
transports the extra covers; the registry is shared across all models of
one lineage so a divisor keeps one record no matter which chart sees it.

Cover degrees along divisors are where indeterminacy enters. An extra cover
restricts exactly to the divisor it was declared on and, by direct exposure,
to exceptional divisors extracted straight out of it; once its exposure has
travelled through an intermediate exceptional divisor, only the possible
degrees can be listed, not the degree itself.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from typing import Dict, Iterable, Mapping, Optional, Sequence, Tuple, Union

from .charts import Chart, Stratum, apply_substitution, blow_up as blow_up_chart, \
    new_affine_model
from .symbols import DivisorRecord, KummerClass, SymbolMatrix, residue, transform


class IndeterminateDegreeError(ValueError):
    """A computation needed a cover degree that is only known up to a list."""

    def __init__(self, divisor_ids: Sequence[str], message: str = ""):
        self.divisor_ids = tuple(divisor_ids)
        if not message:
            message = "indeterminate cover degree on " + ", ".join(self.divisor_ids)
        super().__init__(message)


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    p = 2
    while p * p <= n:
        if n % p == 0:
            return False
        p += 1
    return True


def candidate_orders(monomial_order: int, loose_order: int) -> Tuple[int, ...]:
    """Possible cover degrees when contributions of total order g float freely.

    A candidate e must divide lcm(m, g) and must still explain the monomial
    part: m | lcm(e, g).
    """
    top = lcm(monomial_order, loose_order)
    return tuple(
        e for e in range(1, top + 1)
        if top % e == 0 and lcm(e, loose_order) % monomial_order == 0
    )


@dataclass(frozen=True)
class CoverDegree:
    """Degree of the cyclic cover over one divisor, possibly indeterminate.

    ``candidates`` is the sorted tuple of degrees compatible with the data;
    a single candidate means the degree is determined. ``sources`` names the
    origin divisors whose transported covers caused any indeterminacy.
    """

    monomial_order: int
    candidates: Tuple[int, ...]
    sources: Tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if not self.candidates:
            raise ValueError("a cover degree needs at least one candidate")
        object.__setattr__(self, "candidates", tuple(sorted(set(self.candidates))))

    @property
    def determinate(self) -> bool:
        return len(self.candidates) == 1

    @property
    def value(self) -> int:
        if not self.determinate:
            raise IndeterminateDegreeError(
                self.sources,
                f"cover degree undetermined, candidates {list(self.candidates)}",
            )
        return self.candidates[0]


@dataclass(frozen=True)
class ExtraComponent:
    """Transported state of one extra cyclic cover.

    ``vector`` holds, mod ``modulus``, the multiplicity of each chart
    coordinate in the pullback of the origin divisor's equation. ``exact_on``
    is the set of divisors on which the restricted cover degree is exact
    rather than merely bounded.
    """

    origin_id: str
    degree: int
    modulus: int
    vector: Tuple[int, ...]
    exact_on: frozenset

    def __post_init__(self) -> None:
        if self.degree < 2:
            raise ValueError("extra covers of degree < 2 carry no information")
        if self.modulus % self.degree != 0:
            raise ValueError("component modulus must be a multiple of its degree")
        object.__setattr__(
            self, "vector", tuple(int(v) % self.modulus for v in self.vector)
        )

    @classmethod
    def at_origin(cls, origin_id: str, degree: int, slot: int, dim: int,
                  torsion: int) -> "ExtraComponent":
        vec = tuple(1 if k == slot else 0 for k in range(dim))
        return cls(origin_id, degree, lcm(torsion, degree), vec,
                   frozenset({origin_id}))

    def transported(self, step: Sequence[Sequence[int]],
                    center_indices: Sequence[int],
                    parent_divisor_ids: Sequence[str],
                    exceptional_id: str) -> "ExtraComponent":
        """Push the component through one blow-up step.

        The new exceptional divisor becomes exact exactly when its exposure
        is nonzero and every slot feeding that exposure is the origin divisor
        itself (direct exposure).
        """
        new_vector = tuple(
            v % self.modulus for v in apply_substitution(step, self.vector)
        )
        exposure = sum(self.vector[l] for l in center_indices) % self.degree
        feeders = [l for l in center_indices if self.vector[l] % self.degree != 0]
        exact = self.exact_on
        if exposure != 0 and feeders and all(
            parent_divisor_ids[l] == self.origin_id for l in feeders
        ):
            exact = exact | {exceptional_id}
        return ExtraComponent(self.origin_id, self.degree, self.modulus,
                              new_vector, exact)

    def effective_order(self, slot: int) -> int:
        """Degree of this cover's restriction over the slot's divisor."""
        return self.degree // gcd(self.degree, self.vector[slot])


class DivisorRegistry:
    """Shared, thread-safe store of divisor records, keyed by divisor id.

    Exceptional ids are valuation-derived, so two routes reaching the same
    divisor register the same id; the first registration wins and later ones
    are no-ops returning the existing record.
    """

    def __init__(self) -> None:
        self._records: Dict[str, DivisorRecord] = {}
        self._lock = threading.Lock()

    def record(self, divisor_id: str) -> DivisorRecord:
        with self._lock:
            try:
                return self._records[divisor_id]
            except KeyError:
                raise KeyError(f"unknown divisor {divisor_id!r}") from None

    def register_original(self, label: str, extra_degree: int = 1) -> DivisorRecord:
        with self._lock:
            if label in self._records:
                raise ValueError(f"divisor {label!r} registered twice")
            rec = DivisorRecord(label, "original", 0, extra_degree, label)
            self._records[label] = rec
            return rec

    def ensure_exceptional(self, divisor_id: str, level: int) -> DivisorRecord:
        with self._lock:
            existing = self._records.get(divisor_id)
            if existing is not None:
                return existing
            rec = DivisorRecord(divisor_id, "exceptional", level)
            self._records[divisor_id] = rec
            return rec

    def known_ids(self) -> Tuple[str, ...]:
        with self._lock:
            return tuple(sorted(self._records))


@dataclass(frozen=True)
class BlowUp:
    """Result of blowing up a model: all charts of the modification."""

    parent: "Model"
    center: Stratum
    children: Tuple["Model", ...]
    exceptional_id: str


CenterLike = Union[Stratum, Sequence[int]]


@dataclass(frozen=True, eq=False)
class Model:
    """A Brauer pair restricted to one chart of an iterated blow-up."""

    chart: Chart
    matrix: SymbolMatrix
    registry: DivisorRegistry = field(repr=False)
    extras: Tuple[ExtraComponent, ...] = ()

    def __post_init__(self) -> None:
        if self.matrix.dim != self.chart.dim:
            raise ValueError("symbol matrix does not match chart dimension")
        for comp in self.extras:
            if len(comp.vector) != self.chart.dim:
                raise ValueError("extra component does not match chart dimension")

    @classmethod
    def affine(cls, torsion: int, labels: Sequence[str],
               symbols: Iterable[Tuple[int, int, int]] = (),
               extra_degrees: Optional[Mapping[str, int]] = None) -> "Model":
        """Root model on spec k{x...} with the given symbols and extra covers.

        Args:
            torsion: order r of the class, at least 2.
            labels: coordinate divisor labels.
            symbols: (i, j, m) triples accumulated into the symbol matrix.
            extra_degrees: optional label -> degree map of extra cyclic
                covers; degree 1 entries are ignored.

        Raises:
            ValueError: on bad labels, slots, degrees, or unknown extra keys.
        """
        chart = new_affine_model(len(tuple(labels)), labels)
        matrix = SymbolMatrix.from_symbols(torsion, chart.dim, symbols)
        registry = DivisorRegistry()
        extra_degrees = dict(extra_degrees or {})
        for label in extra_degrees:
            if label not in chart.divisor_ids:
                raise ValueError(f"extra cover on unknown divisor {label!r}")
        components = []
        for slot, label in enumerate(chart.divisor_ids):
            degree = int(extra_degrees.get(label, 1))
            if degree < 1:
                raise ValueError(f"extra cover degree on {label!r} must be >= 1")
            registry.register_original(label, degree)
            if degree > 1:
                components.append(
                    ExtraComponent.at_origin(label, degree, slot, chart.dim, torsion)
                )
        return cls(chart=chart, matrix=matrix, registry=registry,
                   extras=tuple(components))

    @property
    def torsion(self) -> int:
        return self.matrix.r

    @property
    def dim(self) -> int:
        return self.chart.dim

    def record(self, divisor_id: str) -> DivisorRecord:
        return self.registry.record(divisor_id)

    def stratum(self, indices: Sequence[int]) -> Stratum:
        return Stratum(self.chart, tuple(indices))

    def residue_on(self, slot: int) -> KummerClass:
        """Residue class of the symbol part along the slot's divisor."""
        return residue(self.matrix, slot)

    def cover_on(self, slot: int) -> CoverDegree:
        """Full cover degree over the slot's divisor.

        The monomial residue contributes its exact order m. Each extra
        component live on the slot contributes its effective order; a single
        exact contribution combines to lcm when the combination is forced
        (prime torsion, trivial monomial part, or coprime orders). Anything
        else leaves a candidate list.
        """
        monomial = self.residue_on(slot).order
        divisor_id = self.chart.divisor_ids[slot]
        exact = []
        contributions = []
        for comp in self.extras:
            eff = comp.effective_order(slot)
            if eff == 1:
                continue
            is_exact = divisor_id in comp.exact_on
            contributions.append((comp.origin_id, eff, is_exact))
            if is_exact:
                exact.append(eff)
        if not contributions:
            return CoverDegree(monomial, (monomial,))
        if len(contributions) == 1 and exact:
            eff = exact[0]
            if _is_prime(self.torsion) or monomial == 1 or gcd(monomial, eff) == 1:
                return CoverDegree(monomial, (lcm(monomial, eff),))
        loose = lcm(*[eff for _, eff, _ in contributions])
        return CoverDegree(
            monomial,
            candidate_orders(monomial, loose),
            tuple(sorted({origin for origin, _, _ in contributions})),
        )

    def boundary_coefficient(self, slot: int) -> Fraction:
        """Coefficient 1 - 1/e of the slot's divisor in the boundary.

        Raises:
            IndeterminateDegreeError: if e is not determined on this divisor.
        """
        degree = self.cover_on(slot)
        if not degree.determinate:
            raise IndeterminateDegreeError(
                (self.chart.divisor_ids[slot],),
                f"boundary coefficient of {self.chart.divisor_ids[slot]} "
                f"undetermined, degree candidates {list(degree.candidates)}",
            )
        e = degree.value
        return Fraction(e - 1, e)

    def _as_stratum(self, center: CenterLike) -> Stratum:
        if isinstance(center, Stratum):
            if center.chart is not self.chart:
                raise ValueError("center belongs to a different chart")
            return center
        return Stratum(self.chart, tuple(center))

    def blow_up(self, center: CenterLike) -> BlowUp:
        """Blow up the underlying chart and transport the class to each child."""
        stratum = self._as_stratum(center)
        charts = blow_up_chart(self.chart, stratum)
        exceptional_id = charts[0].divisor_ids[charts[0].pivot]
        self.registry.ensure_exceptional(exceptional_id, self.chart.depth + 1)
        children = []
        for child in charts:
            moved = transform(self.matrix, child.substitution)
            comps = tuple(
                comp.transported(child.substitution, stratum.indices,
                                 self.chart.divisor_ids, exceptional_id)
                for comp in self.extras
            )
            children.append(
                Model(chart=child, matrix=moved, registry=self.registry,
                      extras=comps)
            )
        return BlowUp(parent=self, center=stratum, children=tuple(children),
                      exceptional_id=exceptional_id)
