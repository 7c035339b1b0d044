"""Terminality analysis: bad strata, fixups, enumeration, certification.

For 2-torsion classes the only way a weighted discrepancy can vanish is the
level-one degenerate case: a codimension-2 stratum whose two divisors both
carry degree-2 covers that the symbol does not pair, and whose blow-up
extracts a divisor with trivial cover. Blowing those strata up is the fixup;
afterwards every exceptional divisor of every further coordinate blow-up has
positive weighted discrepancy, which ``certify`` verifies by exhausting all
blow-up routes to a chosen depth.

Discrepancies against the base pair telescope through a running coefficient
table: each divisor carries the coefficient its pullback contributes, which
is 1 - 1/e for a base divisor and minus its own discrepancy for an
exceptional one. Degrees, and only degrees, can be indeterminate; the
telescoped discrepancies stay exact, so indeterminacy surfaces purely as
candidate lists on the affected divisors.

Set BRAUER_TERMINAL_THREADS to parallelize probe expansion; results are
identical with and without threads.
"""

from __future__ import annotations

import os
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

from .charts import Stratum, strata
from .discrepancy import DiscrepancyReport, WitnessStep, boundary_divisor
from .model import CoverDegree, IndeterminateDegreeError, Model


class UnsupportedTorsionError(ValueError):
    """Raised when a 2-torsion-only analysis is asked about other torsion."""


class NonterminationError(RuntimeError):
    """The fixup loop exceeded its round budget. Carries the partial tree."""

    def __init__(self, message: str, tree: "ResolutionTree"):
        super().__init__(message)
        self.tree = tree


def _thread_cap() -> int:
    raw = os.environ.get("BRAUER_TERMINAL_THREADS", "")
    try:
        cap = int(raw)
    except ValueError:
        cap = 1
    return max(1, cap)


def _map(fn: Callable, items: Sequence) -> List:
    """Order-preserving map, threaded when BRAUER_TERMINAL_THREADS > 1."""
    cap = _thread_cap()
    if cap <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=cap) as pool:
        return list(pool.map(fn, items))


@dataclass(frozen=True)
class TreeNode:
    chart_id: str
    depth: int
    divisor_ids: Tuple[str, ...]


@dataclass(frozen=True)
class TreeEdge:
    parent: str
    child: str
    center: Tuple[str, ...]
    exceptional: str
    kind: str = "fixup"


@dataclass(frozen=True)
class ResolutionTree:
    """Chart tree of a modification, nodes and edges keyed by chart id."""

    root: str
    nodes: Tuple[TreeNode, ...]
    edges: Tuple[TreeEdge, ...]
    leaves: Tuple[str, ...]
    rounds: int


@dataclass(frozen=True)
class FixupResult:
    tree: ResolutionTree
    models: Tuple[Model, ...]
    rounds: int


def find_bad_strata(model: Model) -> Tuple[Stratum, ...]:
    """Codimension-2 strata witnessing the level-one degenerate case.

    A stratum {i, j} qualifies when both divisors carry covers of degree
    exactly 2, the symbol matrix does not pair them, and the blow-up of the
    stratum constructively extracts a divisor with trivial cover.

    Raises:
        UnsupportedTorsionError: unless the class has torsion 2.
        IndeterminateDegreeError: if any degree needed here is undetermined.
    """
    if model.torsion != 2:
        raise UnsupportedTorsionError(
            f"bad-stratum detection is specific to torsion 2, got {model.torsion}"
        )
    bad = []
    for stratum in strata(model.chart, 2):
        i, j = stratum.indices
        if model.matrix.entry(i, j) != 0:
            continue
        e_i = model.cover_on(i)
        e_j = model.cover_on(j)
        for degree, slot in ((e_i, i), (e_j, j)):
            if not degree.determinate:
                raise IndeterminateDegreeError(
                    (model.chart.divisor_ids[slot],),
                    "bad-stratum detection needs determinate degrees, "
                    f"{model.chart.divisor_ids[slot]} has candidates "
                    f"{list(degree.candidates)}",
                )
        if e_i.value != 2 or e_j.value != 2:
            continue
        probe = model.blow_up(stratum)
        child = probe.children[0]
        e_exc = child.cover_on(child.chart.pivot)
        if not e_exc.determinate:
            raise IndeterminateDegreeError(
                (probe.exceptional_id,),
                f"degree on {probe.exceptional_id} is undetermined, candidates "
                f"{list(e_exc.candidates)}",
            )
        if e_exc.value == 1:
            bad.append(stratum)
    return tuple(bad)


def _node(model: Model) -> TreeNode:
    return TreeNode(model.chart.chart_id, model.chart.depth,
                    model.chart.divisor_ids)


def _tree(root_id: str, nodes: Dict[str, TreeNode], edges: List[TreeEdge],
          leaves: List[str], rounds: int) -> ResolutionTree:
    return ResolutionTree(
        root=root_id,
        nodes=tuple(nodes[key] for key in sorted(nodes)),
        edges=tuple(edges),
        leaves=tuple(leaves),
        rounds=rounds,
    )


def level_one_fixup(model: Model, max_rounds: int = 64) -> FixupResult:
    """Blow up bad strata, chart by chart, until none are left.

    One round is one blow-up, applied to the oldest unfinished chart at its
    lexicographically smallest bad stratum. Every chart of a blow-up carries
    strictly fewer bad strata than its parent, so the loop terminates well
    inside the default budget for any supported dimension.

    Raises:
        UnsupportedTorsionError: unless the class has torsion 2.
        NonterminationError: if the round budget is exhausted.
    """
    pending = deque([model])
    nodes = {model.chart.chart_id: _node(model)}
    edges: List[TreeEdge] = []
    clean: List[Model] = []
    leaves: List[str] = []
    rounds = 0
    while pending:
        current = pending.popleft()
        bad = find_bad_strata(current)
        if not bad:
            clean.append(current)
            leaves.append(current.chart.chart_id)
            continue
        if rounds >= max_rounds:
            partial = _tree(model.chart.chart_id, nodes, edges, leaves, rounds)
            raise NonterminationError(
                f"fixup did not finish within {max_rounds} rounds", partial
            )
        stratum = bad[0]
        result = current.blow_up(stratum)
        rounds += 1
        for child in result.children:
            nodes[child.chart.chart_id] = _node(child)
            edges.append(
                TreeEdge(
                    parent=current.chart.chart_id,
                    child=child.chart.chart_id,
                    center=stratum.divisor_ids,
                    exceptional=result.exceptional_id,
                )
            )
            pending.append(child)
    tree = _tree(model.chart.chart_id, nodes, edges, leaves, rounds)
    return FixupResult(tree=tree, models=tuple(clean), rounds=rounds)


@dataclass(frozen=True)
class SideCheck:
    """One-step discrepancy of a probe center against its own chart's boundary.

    ``value`` is None when an undetermined degree blocks the computation.
    """

    divisor_id: str
    chart_id: str
    center: Tuple[str, ...]
    value: Optional[Fraction]

    @property
    def ok(self) -> Optional[bool]:
        return None if self.value is None else self.value >= 0


@dataclass(frozen=True)
class EnumerationResult:
    """All divisors extracted by coordinate blow-up routes up to a depth."""

    reports: Tuple[DiscrepancyReport, ...]
    side_checks: Tuple[SideCheck, ...]
    indeterminate_divisors: Tuple[str, ...]
    complete: bool
    probes: int


@dataclass(frozen=True)
class _Probe:
    model: Model
    abar: Dict[str, Fraction]
    witness: Tuple[WitnessStep, ...]


def _base_abar(model: Model) -> Dict[str, Fraction]:
    boundary = boundary_divisor(model)
    return dict(boundary.coefficients)


def _expand(probe: _Probe, max_codim: Optional[int] = None):
    """All blow-ups of one probe: per center, the new report data and children."""
    chart = probe.model.chart
    top = chart.dim if max_codim is None else min(max_codim, chart.dim)
    out = []
    for codim in range(2, top + 1):
        for stratum in strata(chart, codim):
            center_ids = stratum.divisor_ids
            a = codim - 1 - sum(probe.abar[d] for d in center_ids)
            try:
                one_step = Fraction(codim - 1) - sum(
                    (probe.model.boundary_coefficient(i) for i in stratum.indices),
                    Fraction(0),
                )
            except IndeterminateDegreeError:
                one_step = None
            result = probe.model.blow_up(stratum)
            first = result.children[0]
            degree = first.cover_on(first.chart.pivot)
            step = WitnessStep(chart_id=chart.chart_id, indices=stratum.indices,
                               center=center_ids)
            witness = probe.witness + (step,)
            report = DiscrepancyReport.from_degree(
                divisor_id=result.exceptional_id,
                level=len(witness),
                witness=witness,
                a=a,
                degree=degree,
            )
            check = SideCheck(
                divisor_id=result.exceptional_id,
                chart_id=chart.chart_id,
                center=center_ids,
                value=one_step,
            )
            abar = dict(probe.abar)
            abar[result.exceptional_id] = -a
            children = tuple(
                _Probe(model=child, abar=abar, witness=witness)
                for child in result.children
            )
            out.append((report, check, children))
    return out


def _merge_reports(seen: DiscrepancyReport,
                   other: DiscrepancyReport) -> DiscrepancyReport:
    """Combine two routes to one divisor.

    The discrepancy and the monomial residue order are genuine invariants of
    the divisor and must agree. Candidate degree lists are knowledge, not
    invariants: a route with direct exposure can pin a degree that another
    route only bounds, so the lists are intersected. The first witness is
    kept.
    """
    if seen.a != other.a:
        raise RuntimeError(
            f"divisor {seen.divisor_id} recomputed inconsistently: "
            f"a {seen.a} vs {other.a}"
        )
    if seen.degree.monomial_order != other.degree.monomial_order:
        raise RuntimeError(
            f"divisor {seen.divisor_id} recomputed inconsistently: "
            f"monomial orders {seen.degree.monomial_order} vs "
            f"{other.degree.monomial_order}"
        )
    merged = tuple(sorted(
        set(seen.degree.candidates) & set(other.degree.candidates)
    ))
    if not merged:
        raise RuntimeError(
            f"divisor {seen.divisor_id} recomputed inconsistently: degree "
            f"candidates {seen.degree.candidates} and "
            f"{other.degree.candidates} are disjoint"
        )
    if merged == seen.degree.candidates:
        return seen
    sources = () if len(merged) == 1 else tuple(sorted(
        set(seen.degree.sources) | set(other.degree.sources)
    ))
    degree = CoverDegree(seen.degree.monomial_order, merged, sources)
    return DiscrepancyReport.from_degree(
        divisor_id=seen.divisor_id, level=seen.level, witness=seen.witness,
        a=seen.a, degree=degree,
    )


def _witness_key(report: DiscrepancyReport):
    return (
        len(report.witness),
        tuple((step.chart_id, step.indices) for step in report.witness),
        report.divisor_id,
    )


def enumerate_divisors(base: Union[Model, Sequence[Model]], depth: int,
                       max_probes: int = 200000) -> EnumerationResult:
    """Enumerate every divisor extracted by blow-up routes of bounded length.

    Runs breadth-first over all charts: every coordinate stratum of every
    chart reached within ``depth`` blow-ups of a base model is blown up, the
    new divisor's discrepancy is telescoped against the base boundary, and
    its cover degree is read off in a chart of the blow-up. The same divisor
    reached along several routes is reported once, with the first witness in
    breadth-first order; agreement of the duplicate computations is enforced.

    Args:
        base: one model or several charts of one lineage (shared registry).
        depth: maximum number of blow-ups per route, at least 0.
        max_probes: budget of blow-ups; when exhausted the result is marked
            incomplete instead of raising.

    Raises:
        IndeterminateDegreeError: if a base boundary degree is undetermined.
    """
    bases = [base] if isinstance(base, Model) else list(base)
    if not bases:
        raise ValueError("enumeration needs at least one base model")
    registry = bases[0].registry
    if any(m.registry is not registry for m in bases):
        raise ValueError("base models must share one divisor registry")
    if depth < 0:
        raise ValueError("depth cannot be negative")
    frontier = [
        _Probe(model=m, abar=_base_abar(m), witness=()) for m in bases
    ]
    reports: Dict[str, DiscrepancyReport] = {}
    order: List[str] = []
    side_checks: List[SideCheck] = []
    probes = 0
    complete = True
    for _ in range(depth):
        if not frontier:
            break
        budget = max_probes - probes
        if budget <= 0:
            complete = False
            break
        expansions = _map(_expand, frontier)
        next_frontier: List[_Probe] = []
        for expansion in expansions:
            for report, check, children in expansion:
                if probes >= max_probes:
                    complete = False
                    break
                probes += 1
                side_checks.append(check)
                seen = reports.get(report.divisor_id)
                if seen is None:
                    reports[report.divisor_id] = report
                    order.append(report.divisor_id)
                else:
                    reports[report.divisor_id] = _merge_reports(seen, report)
                next_frontier.extend(children)
            if not complete:
                break
        frontier = next_frontier
        if not complete:
            break
    ordered = sorted((reports[d] for d in order), key=_witness_key)
    offenders = tuple(sorted(
        r.divisor_id for r in ordered if not r.degree.determinate
    ))
    return EnumerationResult(
        reports=tuple(ordered),
        side_checks=tuple(side_checks),
        indeterminate_divisors=offenders,
        complete=complete,
        probes=probes,
    )


@dataclass(frozen=True)
class Condition:
    """A named inequality with its witness value; value None means blocked."""

    name: str
    value: Optional[Fraction]
    ok: Optional[bool]


@dataclass(frozen=True)
class CandidateConclusion:
    e: int
    b_on_base: Fraction
    weighted: Fraction
    ok: bool


@dataclass(frozen=True)
class CompositionCheck:
    """Outcome of pushing a discrepancy bound through a blow-up sequence.

    ``passed`` reflects the conclusion alone: every candidate degree of the
    final divisor satisfies b >= lam against the base. Premises and side
    conditions are reported as named findings and do not gate ``passed``.
    """

    divisor_id: str
    lam: Fraction
    premises: Tuple[Condition, ...]
    side_conditions: Tuple[Condition, ...]
    candidates: Tuple[CandidateConclusion, ...]
    passed: bool


def check_composition(model: Model,
                      sequence: Sequence[Tuple[Sequence[int], int]],
                      lam: Fraction = Fraction(0)) -> CompositionCheck:
    """Follow one blow-up route and audit the composed discrepancy bound.

    Args:
        model: base model X.
        sequence: (center slots, child index) per blow-up; the last step
            extracts the divisor under scrutiny.
        lam: the bound to verify.

    The composition argument needs b >= lam on the exceptional divisors
    appearing in the final center (premises), nonnegative b against the base
    for the other intermediate divisors, and a nonnegative one-step
    discrepancy of the final center against its own chart's boundary (side
    conditions). Each is reported with its value; ``passed`` only states
    whether every candidate degree of the final divisor yields b >= lam.
    """
    steps = list(sequence)
    if not steps:
        raise ValueError("a composition needs at least one blow-up")
    lam = Fraction(lam)
    abar = _base_abar(model)
    current = model
    created: Dict[str, DiscrepancyReport] = {}
    created_order: List[str] = []
    witness: Tuple[WitnessStep, ...] = ()
    final_center_ids: Tuple[str, ...] = ()
    one_step: Optional[Fraction] = None
    for step_no, (indices, pick) in enumerate(steps):
        stratum = current.stratum(indices)
        center_ids = stratum.divisor_ids
        codim = stratum.codim
        a = Fraction(codim - 1) - sum(
            (abar[d] for d in center_ids), Fraction(0)
        )
        if step_no == len(steps) - 1:
            final_center_ids = center_ids
            try:
                one_step = Fraction(codim - 1) - sum(
                    (current.boundary_coefficient(i) for i in stratum.indices),
                    Fraction(0),
                )
            except IndeterminateDegreeError:
                one_step = None
        result = current.blow_up(stratum)
        first = result.children[0]
        degree = first.cover_on(first.chart.pivot)
        witness = witness + (WitnessStep(chart_id=current.chart.chart_id,
                                         indices=stratum.indices,
                                         center=center_ids),)
        report = DiscrepancyReport.from_degree(
            divisor_id=result.exceptional_id,
            level=len(witness),
            witness=witness,
            a=a,
            degree=degree,
        )
        created[result.exceptional_id] = report
        if result.exceptional_id not in created_order:
            created_order.append(result.exceptional_id)
        abar = dict(abar)
        abar[result.exceptional_id] = -a
        if not 0 <= pick < len(result.children):
            raise ValueError(f"child index {pick} out of range at step {step_no}")
        current = result.children[pick]
    final_id = created_order[-1]
    final_report = created[final_id]
    premises = []
    for divisor_id in final_center_ids:
        if divisor_id == final_id or divisor_id not in created:
            continue
        worst = min(entry.b for entry in created[divisor_id].entries)
        premises.append(
            Condition(name=f"b({divisor_id},X) >= {lam}", value=worst,
                      ok=worst >= lam)
        )
    side = []
    for divisor_id in created_order[:-1]:
        worst = min(entry.b for entry in created[divisor_id].entries)
        side.append(
            Condition(name=f"b({divisor_id},X) >= 0", value=worst,
                      ok=worst >= 0)
        )
    side.append(
        Condition(
            name=f"a({final_id},Y,Delta_Y) >= 0",
            value=one_step,
            ok=None if one_step is None else one_step >= 0,
        )
    )
    candidates = tuple(
        CandidateConclusion(e=entry.e, b_on_base=entry.b,
                            weighted=entry.weighted, ok=entry.b >= lam)
        for entry in final_report.entries
    )
    return CompositionCheck(
        divisor_id=final_id,
        lam=lam,
        premises=tuple(premises),
        side_conditions=tuple(side),
        candidates=candidates,
        passed=all(c.ok for c in candidates),
    )


@dataclass(frozen=True)
class SideConditionSummary:
    level1_b_nonnegative: bool
    exceptional_b_nonnegative: bool
    one_step_a_nonnegative: bool
    failures: Tuple[str, ...]


@dataclass(frozen=True)
class TerminalityCertificate:
    """Verdict of a bounded-depth terminality audit.

    ``terminal-certified`` asserts that every divisor extracted by any
    coordinate blow-up route within ``level_checked`` blow-ups has strictly
    positive weighted discrepancy for every candidate degree, with the
    enumeration complete. ``bad-stratum-found`` reports a determinate
    nonpositive weighted discrepancy (or an unfixed bad stratum);
    ``indeterminate`` means the verdict hangs on an undetermined degree or an
    exhausted probe budget.
    """

    level_checked: int
    verdict: str
    min_weighted: Optional[Fraction]
    min_witness: Optional[str]
    level1_terminal: bool
    side_conditions: SideConditionSummary
    bad_strata: Tuple[Tuple[str, ...], ...]
    indeterminate_divisors: Tuple[str, ...]
    reports: Tuple[DiscrepancyReport, ...]
    complete: bool
    fixup_rounds: int
    tree: Optional[ResolutionTree] = field(compare=False, default=None)

    def __post_init__(self) -> None:
        if self.verdict not in ("terminal-certified", "bad-stratum-found",
                                "indeterminate"):
            raise ValueError(f"unknown verdict {self.verdict!r}")
        if self.verdict == "terminal-certified":
            if not self.complete:
                raise ValueError("cannot certify from an incomplete enumeration")
            if self.min_weighted is None or self.min_weighted <= 0:
                raise ValueError(
                    "terminal-certified requires strictly positive weighted "
                    f"discrepancies, got minimum {self.min_weighted}"
                )


def certify(model: Model, depth: int = 3, *, fixup: bool = True,
            max_rounds: int = 64, max_probes: int = 200000) -> TerminalityCertificate:
    """Audit terminality of a pair up to a blow-up depth.

    For torsion 2 the level-one fixup is applied first (unless disabled), and
    the enumeration runs from the fixed-up charts; for other torsion the
    model is enumerated as-is. The verdict is ``bad-stratum-found`` as soon
    as a determinate nonpositive weighted discrepancy exists (or a bad
    stratum is left unfixed on purpose), ``indeterminate`` when only an
    undetermined degree or an exhausted budget blocks the call, and
    ``terminal-certified`` otherwise.
    """
    if depth < 1:
        raise ValueError("certification depth must be at least 1")
    bad_strata: Tuple[Tuple[str, ...], ...] = ()
    tree = None
    rounds = 0
    bases: Sequence[Model] = (model,)
    fixup_applied = False
    if model.torsion == 2:
        bad = find_bad_strata(model)
        bad_strata = tuple(s.divisor_ids for s in bad)
        if fixup and bad:
            fixed = level_one_fixup(model, max_rounds=max_rounds)
            bases = fixed.models
            tree = fixed.tree
            rounds = fixed.rounds
            fixup_applied = True
    enumeration = enumerate_divisors(bases, depth, max_probes=max_probes)
    reports = enumeration.reports
    entries = [(entry, report) for report in reports for entry in report.entries]
    min_weighted = min((e.weighted for e, _ in entries), default=None)
    min_witness = None
    if min_weighted is not None:
        for entry, report in entries:
            if entry.weighted == min_weighted:
                min_witness = report.divisor_id
                break
    level1 = [r for r in reports if len(r.witness) == 1]
    level1_positive = all(
        entry.weighted > 0 for r in level1 for entry in r.entries
    )
    failures: List[str] = []
    level1_b = all(entry.b >= 0 for r in level1 for entry in r.entries)
    if not level1_b:
        failures.append("level-1 b < 0")
    exc_b = all(entry.b >= 0 for r in reports for entry in r.entries)
    for report in reports:
        worst = min(entry.b for entry in report.entries)
        if worst < 0:
            failures.append(f"b({report.divisor_id},X) = {worst}")
    one_step_ok = True
    for check in enumeration.side_checks:
        if check.ok is False:
            one_step_ok = False
            failures.append(
                f"a({check.divisor_id},{check.chart_id},Delta) = {check.value}"
            )
    summary = SideConditionSummary(
        level1_b_nonnegative=level1_b,
        exceptional_b_nonnegative=exc_b,
        one_step_a_nonnegative=one_step_ok,
        failures=tuple(failures),
    )
    determinate_bad = any(
        report.degree.determinate and entry.weighted <= 0
        for report in reports for entry in report.entries
    )
    unfixed_bad = bool(bad_strata) and not fixup_applied and model.torsion == 2 \
        and not fixup
    if determinate_bad or unfixed_bad:
        verdict = "bad-stratum-found"
    elif not enumeration.complete or min_weighted is None or min_weighted <= 0:
        verdict = "indeterminate"
    else:
        verdict = "terminal-certified"
    return TerminalityCertificate(
        level_checked=depth,
        verdict=verdict,
        min_weighted=min_weighted,
        min_witness=min_witness,
        level1_terminal=level1_positive,
        side_conditions=summary,
        bad_strata=bad_strata,
        indeterminate_divisors=enumeration.indeterminate_divisors,
        reports=reports,
        complete=enumeration.complete,
        fixup_rounds=rounds,
        tree=tree,
    )


@dataclass(frozen=True)
class RemarkCandidate:
    e_f: int
    b_f_on_y: Optional[Fraction]
    b_f_on_x: Fraction
    weighted: Fraction
    additivity_ok: bool
    obstruction: Optional[str]


@dataclass(frozen=True)
class RemarkReport:
    """The two-blow-up family where the second cover degree stays open.

    On torsion 3 with one symbol pairing the first two coordinates and an
    extra degree-3 cover on the third, the first blow-up extracts E with
    b(E, X) = 1/3 and an exact degree-3 cover. Blowing the strict transform
    of the first coordinate against E extracts F whose cover pulls the extra
    component through E: the degree e_F is only known to lie in {1, 3}, and
    b(F, X) = 1 - 1/e_F. With e_F = 1 the weighted discrepancy drops to 0,
    so terminality of the family cannot be decided from this data.
    """

    boundary: Tuple[Tuple[str, Fraction], ...]
    first_report: DiscrepancyReport
    b_e: Fraction
    a_f_on_y: Optional[Fraction]
    e_f: CoverDegree
    monomial_e_f: int
    a_f_on_x: Fraction
    candidates: Tuple[RemarkCandidate, ...]
    composition: CompositionCheck
    verdict: str


def remark_model() -> Model:
    """Base model of the undetermined-degree family."""
    return Model.affine(
        torsion=3,
        labels=("x1", "x2", "x3"),
        symbols=((0, 1, 1),),
        extra_degrees={"x3": 3},
    )


def run_remark() -> RemarkReport:
    """Reproduce the undetermined-degree family end to end."""
    model = remark_model()
    boundary = boundary_divisor(model).coefficients
    abar = _base_abar(model)

    first_center = model.stratum((0, 2))
    first = model.blow_up(first_center)
    a_e = Fraction(1) - sum(abar[d] for d in first_center.divisor_ids)
    picked = next(
        child for child in first.children if "x1" in child.chart.divisor_ids
    )
    e_slot = picked.chart.slot_of(first.exceptional_id)
    degree_e = picked.cover_on(e_slot)
    first_witness = (WitnessStep(chart_id=model.chart.chart_id,
                                 indices=first_center.indices,
                                 center=first_center.divisor_ids),)
    first_report = DiscrepancyReport.from_degree(
        divisor_id=first.exceptional_id,
        level=1,
        witness=first_witness,
        a=a_e,
        degree=degree_e,
    )
    b_e = first_report.entries[0].b
    abar = dict(abar)
    abar[first.exceptional_id] = -a_e

    second_center = picked.stratum((picked.chart.slot_of("x1"), e_slot))
    a_f_on_x = Fraction(1) - sum(abar[d] for d in second_center.divisor_ids)
    a_f_on_y: Optional[Fraction]
    try:
        a_f_on_y = Fraction(1) - sum(
            (picked.boundary_coefficient(i) for i in second_center.indices),
            Fraction(0),
        )
    except IndeterminateDegreeError:
        a_f_on_y = None
    second = picked.blow_up(second_center)
    f_child = second.children[0]
    degree_f = f_child.cover_on(f_child.chart.pivot)
    monomial_e_f = degree_f.monomial_order

    candidates = []
    for e in degree_f.candidates:
        b_on_x = a_f_on_x + 1 - Fraction(1, e)
        b_on_y = None if a_f_on_y is None else a_f_on_y + 1 - Fraction(1, e)
        additive = b_on_y is not None and b_on_x == b_on_y + b_e
        weighted = e * b_on_x
        obstruction = None
        if weighted <= 0:
            obstruction = (
                f"degree {e} gives weighted discrepancy {weighted}, "
                "terminality fails"
            )
        candidates.append(
            RemarkCandidate(e_f=e, b_f_on_y=b_on_y, b_f_on_x=b_on_x,
                            weighted=weighted, additivity_ok=additive,
                            obstruction=obstruction)
        )

    pick_index = first.children.index(picked)
    composition = check_composition(
        remark_model(),
        [(first_center.indices, pick_index), (second_center.indices, 0)],
        lam=Fraction(0),
    )
    verdict = "indeterminate" if not degree_f.determinate else (
        "terminal-certified" if all(c.weighted > 0 for c in candidates)
        else "bad-stratum-found"
    )
    return RemarkReport(
        boundary=boundary,
        first_report=first_report,
        b_e=b_e,
        a_f_on_y=a_f_on_y,
        e_f=degree_f,
        monomial_e_f=monomial_e_f,
        a_f_on_x=a_f_on_x,
        candidates=tuple(candidates),
        composition=composition,
        verdict=verdict,
    )
