"""Brute-force semantic verification on small finite universes.

Everything here reduces a claim about the transformation to a finite sweep:
enumerate (or sample) basic states over a small universe, evaluate the
programs involved, and compare against an independent oracle computed by
the staged evaluator.  Checks:

  theorem1     the generated stage relations, evaluated as axioms, match
               the relations read off the staged oracle exactly
  theorem2     P_i(a) holds iff nleq_ii(a, a) does not
  equivalence  original, transformed, and merged programs agree on the
               original signature
  aux          the shared-conjunct optimization does not change any stage
               relation
  order        chaotic evaluation orders all reach the staged fixpoint
  polarity     the transformed program has no negative derived occurrence
               and both it and its merged form are well stratified

Sweeps honor AXF_THREADS (default: machine CPU count) with a process pool;
every counterexample is aggregated and the lexicographically smallest state
is reported, so results do not depend on worker count or chunk order.
"""

from __future__ import annotations

import os
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import product
from math import log
from typing import Iterable, Iterator, Mapping, Optional, Sequence

from .evaluator import (
    Engine,
    GroundAtom,
    RELATION_NAMES,
    StageTable,
    Universe,
    stage_relations,
)
from .logic import (
    And,
    Atom,
    Axiom,
    AxiomProgram,
    Bottom,
    Const,
    Exists,
    Forall,
    LogicError,
    Not,
    Or,
    Predicate,
    Term,
    Top,
    Var,
    check_stratified,
    iter_atoms,
    negative_occurrences,
)
from .transformer import (
    eliminate_negative_occurrences,
    generate_stage_axioms,
    merge_to_single_stratum,
)


class VerifyError(LogicError):
    """The verification request itself is malformed or unsupported."""


class BudgetError(VerifyError):
    """An exhaustive sweep would exceed the state budget."""


_MAX_EXHAUSTIVE_BITS = 24
_ALL_CHECKS = ("polarity", "theorem1", "theorem2", "equivalence", "aux", "order")


@dataclass(frozen=True)
class VerificationPlan:
    """What to sweep: universe sizes, state source, and which checks."""

    universe_sizes: tuple[int, ...] = (2, 3)
    mode: str = "exhaustive"  # or "sampled"
    samples: int = 100
    seed: int | str = 0
    checks: tuple[str, ...] = _ALL_CHECKS

    def __post_init__(self) -> None:
        if self.mode not in ("exhaustive", "sampled"):
            raise VerifyError(f"unknown mode {self.mode!r}")
        if self.samples < 1:
            raise VerifyError("samples must be positive")
        for c in self.checks:
            if c not in _ALL_CHECKS:
                raise VerifyError(f"unknown check {c!r}")
        if not self.universe_sizes:
            raise VerifyError("at least one universe size is required")
        if any(n < 1 for n in self.universe_sizes):
            raise VerifyError("universe sizes must be positive")


@dataclass(frozen=True)
class Counterexample:
    check: str
    universe: tuple[str, ...]
    state_atoms: tuple[GroundAtom, ...]
    detail: str

    def state_text(self) -> str:
        parts = []
        for name, args in self.state_atoms:
            parts.append("(" + " ".join((name,) + args) + ")")
        return "(state" + ("" if not parts else " " + " ".join(parts)) + ")"

    def to_json(self) -> dict:
        return {
            "check": self.check,
            "universe": list(self.universe),
            "state": self.state_text(),
            "detail": self.detail,
        }


@dataclass(frozen=True)
class CheckResult:
    name: str
    states_checked: int
    failures: int
    counterexample: Optional[Counterexample]
    notes: tuple[str, ...] = ()

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "states_checked": self.states_checked,
            "failures": self.failures,
            "passed": self.passed,
            "counterexample": (
                None if self.counterexample is None else self.counterexample.to_json()
            ),
            "notes": list(self.notes),
        }


@dataclass(frozen=True)
class VerificationResult:
    checks: tuple[CheckResult, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_json(self) -> dict:
        return {"passed": self.passed, "checks": [c.to_json() for c in self.checks]}


# ---------------------------------------------------------------------------
# State generation

def basic_cells(program: AxiomProgram, universe: Universe) -> tuple[GroundAtom, ...]:
    """All ground basic atoms, sorted; the sweep's bit positions."""
    cells = []
    for pred in program.basic_predicates:
        for combo in product(universe.objects, repeat=pred.arity):
            cells.append((pred.name, combo))
    return tuple(sorted(cells))


def enumerate_basic_states(
    cells: Sequence[GroundAtom], start: int = 0, stop: Optional[int] = None
) -> Iterator[frozenset[GroundAtom]]:
    total = 1 << len(cells)
    stop = total if stop is None else stop
    for index in range(start, stop):
        yield frozenset(cells[k] for k in range(len(cells)) if index >> k & 1)


def sample_basic_state(
    cells: Sequence[GroundAtom], seed: int | str, index: int
) -> frozenset[GroundAtom]:
    """Deterministic per-index sample; density varies state to state."""
    rng = random.Random(f"{seed}:{index}")
    density = rng.random()
    return frozenset(c for c in cells if rng.random() < density)


def _spec_states(spec: tuple) -> Iterator[frozenset[GroundAtom]]:
    kind = spec[0]
    if kind == "exhaustive":
        _, cells, start, stop = spec
        yield from enumerate_basic_states(cells, start, stop)
    elif kind == "sampled":
        _, cells, seed, start, stop = spec
        for index in range(start, stop):
            yield sample_basic_state(cells, seed, index)
    elif kind == "explicit":
        yield from spec[1]
    else:
        raise VerifyError(f"unknown state spec {kind!r}")


def universe_for(program: AxiomProgram, size: int) -> Universe:
    """The declared objects, truncated or padded to the requested size.

    Padding uses fresh names; truncation refuses to drop an object the
    program mentions as a constant."""
    if size < 1:
        raise VerifyError("universe size must be positive")
    objects = list(program.universe_hint[:size])
    counter = 0
    while len(objects) < size:
        counter += 1
        candidate = f"u{counter}"
        if candidate not in objects:
            objects.append(candidate)
    constants = {
        term.name
        for stratum in program.strata
        for axiom in stratum
        for _, atom, _ in iter_atoms(axiom.body)
        for term in atom.args
        if isinstance(term, Const)
    }
    missing = constants - set(objects)
    if missing:
        raise VerifyError(
            f"universe of size {size} would drop constants: " + ", ".join(sorted(missing))
        )
    return Universe(tuple(objects))


# ---------------------------------------------------------------------------
# Chunk workers (top level so a process pool can pickle them)

def _ce_key(ce: Counterexample) -> tuple:
    return (ce.state_atoms, ce.detail)


def _merge_best(
    best: Optional[Counterexample], new: Optional[Counterexample]
) -> Optional[Counterexample]:
    if new is None:
        return best
    if best is None or _ce_key(new) < _ce_key(best):
        return new
    return best


def _atoms_by_pred(atoms: frozenset[GroundAtom]) -> dict[str, set[tuple[str, ...]]]:
    out: dict[str, set[tuple[str, ...]]] = {}
    for name, args in atoms:
        out.setdefault(name, set()).add(args)
    return out


def _fmt_atom(name: str, args: tuple[str, ...]) -> str:
    return "(" + " ".join((name,) + args) + ")"


def _theorem1_chunk(bundle, universe: Universe, spec) -> tuple[int, int, Optional[Counterexample]]:
    program, stratum_index, members, arities, names, fam_program = bundle
    oracle_engine = Engine(program, universe)
    fam_engine = Engine(fam_program, universe)
    member_preds = [program.predicate(m) for m in members]
    m = len(members)
    checked = failures = 0
    best: Optional[Counterexample] = None
    for atoms in _spec_states(spec):
        checked += 1
        _, tables = oracle_engine.run_with_stages(atoms, upto=stratum_index + 1)
        oracle = stage_relations(tables[stratum_index], member_preds)
        by_pred = _atoms_by_pred(fam_engine.run(atoms))
        detail = None
        for rel in RELATION_NAMES:
            for i in range(1, m + 1):
                for j in range(1, m + 1):
                    ai = arities[i - 1]
                    got = frozenset(
                        (args[:ai], args[ai:])
                        for args in by_pred.get(names[(rel, i, j)], ())
                    )
                    want = oracle.get(rel, i, j)
                    if got != want:
                        a, b = min(got.symmetric_difference(want))
                        side = "axioms" if (a, b) in got else "oracle"
                        detail = (
                            f"{rel}[{i},{j}] disagrees on ({','.join(a)} ; {','.join(b)}):"
                            f" only the {side} relate them"
                        )
                        break
                if detail:
                    break
            if detail:
                break
        if detail:
            failures += 1
            best = _merge_best(
                best,
                Counterexample("theorem1", universe.objects, tuple(sorted(atoms)), detail),
            )
    return checked, failures, best


def _theorem2_chunk(bundle, universe: Universe, spec) -> tuple[int, int, Optional[Counterexample]]:
    prefix_program, fam_program, members, arities, nleq_names = bundle
    prefix_engine = Engine(prefix_program, universe)
    fam_engine = Engine(fam_program, universe)
    combos = [
        tuple(product(universe.objects, repeat=arity)) for arity in arities
    ]
    checked = failures = 0
    best: Optional[Counterexample] = None
    for atoms in _spec_states(spec):
        checked += 1
        derived = prefix_engine.run(atoms)
        stage_ext = fam_engine.run(atoms)
        detail = None
        for k, member in enumerate(members):
            for combo in combos[k]:
                holds = (member, combo) in derived
                never = (nleq_names[k], combo + combo) in stage_ext
                if holds == never:
                    detail = (
                        f"{_fmt_atom(member, combo)} is {str(holds).lower()} but "
                        f"{_fmt_atom(nleq_names[k], combo + combo)} is {str(never).lower()}"
                    )
                    break
            if detail:
                break
        if detail:
            failures += 1
            best = _merge_best(
                best,
                Counterexample("theorem2", universe.objects, tuple(sorted(atoms)), detail),
            )
    return checked, failures, best


def _equivalence_chunk(bundle, universe: Universe, spec) -> tuple[int, int, Optional[Counterexample]]:
    original, transformed, merged, derived_names = bundle
    engines = [Engine(original, universe), Engine(transformed, universe)]
    labels = ["original", "transformed"]
    if merged is not None:
        engines.append(Engine(merged, universe))
        labels.append("merged")
    names = frozenset(derived_names)
    checked = failures = 0
    best: Optional[Counterexample] = None
    for atoms in _spec_states(spec):
        checked += 1
        views = [
            {k for k in engine.run(atoms) if k[0] in names} for engine in engines
        ]
        detail = None
        for other in range(1, len(views)):
            if views[other] != views[0]:
                name, args = min(views[0].symmetric_difference(views[other]))
                holds = (name, args) in views[0]
                detail = (
                    f"{_fmt_atom(name, args)} is {str(holds).lower()} in the original "
                    f"but {str(not holds).lower()} in the {labels[other]} program"
                )
                break
        if detail:
            failures += 1
            best = _merge_best(
                best,
                Counterexample(
                    "equivalence", universe.objects, tuple(sorted(atoms)), detail
                ),
            )
    return checked, failures, best


def _aux_chunk(bundle, universe: Universe, spec) -> tuple[int, int, Optional[Counterexample]]:
    plain, optimized, shared_names = bundle
    engines = [Engine(plain, universe), Engine(optimized, universe)]
    names = frozenset(shared_names)
    checked = failures = 0
    best: Optional[Counterexample] = None
    for atoms in _spec_states(spec):
        checked += 1
        a = {k for k in engines[0].run(atoms) if k[0] in names}
        b = {k for k in engines[1].run(atoms) if k[0] in names}
        if a != b:
            name, args = min(a.symmetric_difference(b))
            holds = (name, args) in a
            detail = (
                f"{_fmt_atom(name, args)} is {str(holds).lower()} without the shared "
                f"conjuncts but {str(not holds).lower()} with them"
            )
            failures += 1
            best = _merge_best(
                best,
                Counterexample("aux", universe.objects, tuple(sorted(atoms)), detail),
            )
    return checked, failures, best


def _order_chunk(bundle, universe: Universe, spec) -> tuple[int, int, Optional[Counterexample]]:
    program, order_seeds = bundle
    engine = Engine(program, universe)
    checked = failures = 0
    best: Optional[Counterexample] = None
    for atoms in _spec_states(spec):
        checked += 1
        baseline = engine.run(atoms)
        detail = None
        for seed in order_seeds:
            got = engine.run(atoms, rng=random.Random(f"order:{seed}"))
            if got != baseline:
                name, args = min(got.symmetric_difference(baseline))
                detail = (
                    f"evaluation order {seed} "
                    f"{'adds' if (name, args) in got else 'misses'} {_fmt_atom(name, args)}"
                )
                break
        if detail:
            failures += 1
            best = _merge_best(
                best,
                Counterexample("order", universe.objects, tuple(sorted(atoms)), detail),
            )
    return checked, failures, best


_CHUNK_FUNS = {
    "theorem1": _theorem1_chunk,
    "theorem2": _theorem2_chunk,
    "equivalence": _equivalence_chunk,
    "aux": _aux_chunk,
    "order": _order_chunk,
}


def _run_chunk(args):
    check, bundle, universe, spec = args
    return _CHUNK_FUNS[check](bundle, universe, spec)


def worker_count() -> int:
    raw = os.environ.get("AXF_THREADS", "").strip()
    if raw:
        try:
            n = int(raw)
        except ValueError:
            raise VerifyError("AXF_THREADS must be an integer") from None
        if n < 1:
            raise VerifyError("AXF_THREADS must be at least 1")
        return n
    return os.cpu_count() or 1


def _sweep(
    check: str,
    bundle,
    universe: Universe,
    cells: tuple[GroundAtom, ...],
    plan: VerificationPlan,
    states: Optional[Iterable[frozenset[GroundAtom]]],
) -> tuple[int, int, Optional[Counterexample]]:
    if states is not None:
        spec = ("explicit", tuple(frozenset(s) for s in states))
        return _CHUNK_FUNS[check](bundle, universe, spec)
    if plan.mode == "exhaustive":
        if len(cells) > _MAX_EXHAUSTIVE_BITS:
            raise BudgetError(
                f"2^{len(cells)} basic states exceed the exhaustive budget of "
                f"2^{_MAX_EXHAUSTIVE_BITS}; use sampled mode"
            )
        total = 1 << len(cells)

        def spec_for(start: int, stop: int) -> tuple:
            return ("exhaustive", cells, start, stop)

    else:
        total = plan.samples

        def spec_for(start: int, stop: int) -> tuple:
            return ("sampled", cells, plan.seed, start, stop)

    workers = worker_count()
    if workers == 1 or total < 64:
        return _CHUNK_FUNS[check](bundle, universe, spec_for(0, total))
    workers = min(workers, total)
    bounds = [total * k // workers for k in range(workers + 1)]
    jobs = [
        (check, bundle, universe, spec_for(bounds[k], bounds[k + 1]))
        for k in range(workers)
    ]
    checked = failures = 0
    best: Optional[Counterexample] = None
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for part_checked, part_failures, part_best in pool.map(_run_chunk, jobs):
            checked += part_checked
            failures += part_failures
            best = _merge_best(best, part_best)
    return checked, failures, best


# ---------------------------------------------------------------------------
# Public checks

def _family_program(
    program: AxiomProgram, stratum_index: int, family
) -> AxiomProgram:
    predicates = list(program.signature.values()) + list(family.predicates)
    strata = program.strata[:stratum_index] + (family.axioms,)
    return AxiomProgram(predicates, program.universe_hint, strata)


def verify_theorem1(
    program: AxiomProgram,
    stratum_index: int,
    universe: Universe,
    plan: Optional[VerificationPlan] = None,
    *,
    states: Optional[Iterable[frozenset[GroundAtom]]] = None,
    mutation: Optional[str] = None,
    optimize_aux: bool = False,
    label: Optional[str] = None,
) -> CheckResult:
    """Sweep: stage relations by axioms == stage relations by oracle."""
    plan = plan or VerificationPlan()
    family = generate_stage_axioms(
        program, stratum_index, optimize_aux=optimize_aux, mutation=mutation
    )
    bundle = (
        program,
        stratum_index,
        family.members,
        family.arities,
        dict(family.names),
        _family_program(program, stratum_index, family),
    )
    cells = basic_cells(program, universe)
    checked, failures, best = _sweep("theorem1", bundle, universe, cells, plan, states)
    return CheckResult(
        label or f"theorem1[stratum={stratum_index}]", checked, failures, best
    )


def verify_theorem2(
    program: AxiomProgram,
    stratum_index: int,
    universe: Universe,
    plan: Optional[VerificationPlan] = None,
    *,
    states: Optional[Iterable[frozenset[GroundAtom]]] = None,
    mutation: Optional[str] = None,
    optimize_aux: bool = False,
    label: Optional[str] = None,
) -> CheckResult:
    """Sweep: P_i(a) holds in the stratum's fixpoint iff nleq_ii(a,a) fails."""
    plan = plan or VerificationPlan()
    family = generate_stage_axioms(
        program, stratum_index, optimize_aux=optimize_aux, mutation=mutation
    )
    prefix = AxiomProgram(
        program.signature.values(),
        program.universe_hint,
        program.strata[: stratum_index + 1],
    )
    nleq_names = tuple(
        family.names[("nleq", k, k)] for k in range(1, len(family.members) + 1)
    )
    bundle = (
        prefix,
        _family_program(program, stratum_index, family),
        family.members,
        family.arities,
        nleq_names,
    )
    cells = basic_cells(program, universe)
    checked, failures, best = _sweep("theorem2", bundle, universe, cells, plan, states)
    return CheckResult(
        label or f"theorem2[stratum={stratum_index}]", checked, failures, best
    )


def verify_equivalence(
    original: AxiomProgram,
    universe: Universe,
    plan: Optional[VerificationPlan] = None,
    *,
    transformed: Optional[AxiomProgram] = None,
    include_merged: bool = True,
    states: Optional[Iterable[frozenset[GroundAtom]]] = None,
    mutation: Optional[str] = None,
    optimize_aux: bool = False,
    label: Optional[str] = None,
) -> CheckResult:
    """Sweep: the transformation preserves every original derived atom."""
    plan = plan or VerificationPlan()
    if transformed is None:
        transformed, _ = eliminate_negative_occurrences(
            original, optimize_aux=optimize_aux, mutation=mutation
        )
    merged = merge_to_single_stratum(transformed) if include_merged else None
    derived_names = tuple(p.name for p in original.derived_predicates)
    bundle = (original, transformed, merged, derived_names)
    cells = basic_cells(original, universe)
    checked, failures, best = _sweep("equivalence", bundle, universe, cells, plan, states)
    return CheckResult(label or "equivalence", checked, failures, best)


def verify_aux(
    program: AxiomProgram,
    universe: Universe,
    plan: Optional[VerificationPlan] = None,
    *,
    states: Optional[Iterable[frozenset[GroundAtom]]] = None,
    label: Optional[str] = None,
) -> CheckResult:
    """Sweep: the aux rewrite leaves every shared predicate's extension alone."""
    plan = plan or VerificationPlan()
    plain, _ = eliminate_negative_occurrences(program, optimize_aux=False)
    optimized, _ = eliminate_negative_occurrences(program, optimize_aux=True)
    shared = tuple(sorted(set(plain.signature) & set(optimized.signature)))
    bundle = (plain, optimized, shared)
    cells = basic_cells(program, universe)
    checked, failures, best = _sweep("aux", bundle, universe, cells, plan, states)
    return CheckResult(label or "aux", checked, failures, best)


def verify_order_independence(
    program: AxiomProgram,
    universe: Universe,
    plan: Optional[VerificationPlan] = None,
    *,
    orders: int = 8,
    states: Optional[Iterable[frozenset[GroundAtom]]] = None,
    label: Optional[str] = None,
) -> CheckResult:
    """Sweep: chaotic evaluation agrees with the staged fixpoint."""
    plan = plan or VerificationPlan()
    bundle = (program, tuple(range(orders)))
    cells = basic_cells(program, universe)
    checked, failures, best = _sweep("order", bundle, universe, cells, plan, states)
    return CheckResult(label or "order", checked, failures, best)


def lint_polarity(program: AxiomProgram) -> list:
    """Occurrence references for every negative derived occurrence."""
    derived = [p.name for p in program.derived_predicates]
    return negative_occurrences(program, derived)


def check_polarity(
    program: AxiomProgram,
    *,
    optimize_aux: bool = False,
    label: Optional[str] = None,
) -> CheckResult:
    """Static check: transform, then lint polarity and stratification of
    both the transformed and the merged program."""
    transformed, _ = eliminate_negative_occurrences(program, optimize_aux=optimize_aux)
    notes = []
    occurrences = lint_polarity(transformed)
    for ref in occurrences:
        notes.append(f"negative derived occurrence at {ref.to_json()}")
    violations = check_stratified(transformed)
    try:
        merged = merge_to_single_stratum(transformed)
        violations += check_stratified(merged)
    except LogicError as exc:
        notes.append(f"merge refused: {exc}")
        violations += [None]
    for v in violations:
        if v is not None:
            notes.append(f"stratification: {v.message}")
    failures = len(occurrences) + len(violations)
    return CheckResult(label or "polarity", 0, failures, None, tuple(notes))


def run_checks(program: AxiomProgram, plan: Optional[VerificationPlan] = None) -> VerificationResult:
    """Run the planned checks over every planned universe size."""
    plan = plan or VerificationPlan()
    results: list[CheckResult] = []
    if "polarity" in plan.checks:
        results.append(check_polarity(program))
    transformed, _ = eliminate_negative_occurrences(program)
    strata_with_members = [
        index for index, stratum in enumerate(program.strata) if stratum
    ]
    for size in plan.universe_sizes:
        universe = universe_for(program, size)
        for check in plan.checks:
            if check == "polarity":
                continue
            if check == "theorem1":
                for index in strata_with_members:
                    results.append(
                        verify_theorem1(
                            program,
                            index,
                            universe,
                            plan,
                            label=f"theorem1[n={size},stratum={index}]",
                        )
                    )
            elif check == "theorem2":
                for index in strata_with_members:
                    results.append(
                        verify_theorem2(
                            program,
                            index,
                            universe,
                            plan,
                            label=f"theorem2[n={size},stratum={index}]",
                        )
                    )
            elif check == "equivalence":
                results.append(
                    verify_equivalence(
                        program,
                        universe,
                        plan,
                        transformed=transformed,
                        label=f"equivalence[n={size}]",
                    )
                )
            elif check == "aux":
                results.append(
                    verify_aux(program, universe, plan, label=f"aux[n={size}]")
                )
            elif check == "order":
                results.append(
                    verify_order_independence(
                        program, universe, plan, label=f"order[n={size}]"
                    )
                )
    return VerificationResult(tuple(results))


# ---------------------------------------------------------------------------
# Random programs

@dataclass(frozen=True)
class RandomProfile:
    """Shape of randomly generated programs; capped small so exhaustive
    sweeps stay cheap."""

    objects: int = 2
    basic_predicates: int = 2
    max_arity: int = 2
    strata: int = 2
    max_members: int = 2
    max_axioms: int = 1
    max_depth: int = 3
    negation_rate: float = 0.35
    constant_rate: float = 0.1

    def __post_init__(self) -> None:
        if not 1 <= self.objects <= 3:
            raise VerifyError("objects must be 1..3")
        if not 0 <= self.basic_predicates <= 4:
            raise VerifyError("basic_predicates must be 0..4")
        if not 0 <= self.max_arity <= 2:
            raise VerifyError("max_arity must be 0..2")
        if not 1 <= self.strata <= 4:
            raise VerifyError("strata must be 1..4")
        if not 1 <= self.max_members <= 3:
            raise VerifyError("max_members must be 1..3")
        if not 1 <= self.max_axioms <= 2:
            raise VerifyError("max_axioms must be 1..2")
        if not 1 <= self.max_depth <= 5:
            raise VerifyError("max_depth must be 1..5")
        if not 0.0 <= self.negation_rate <= 0.9:
            raise VerifyError("negation_rate must be in [0, 0.9]")
        if self.negation_rate > 0 and self.basic_predicates == 0 and self.strata == 1:
            raise VerifyError(
                "profile cannot honor negations: a single stratum with no basic "
                "predicates leaves nothing a negation may apply to"
            )


def generate_random_program(seed: int | str, profile: Optional[RandomProfile] = None) -> AxiomProgram:
    """A random well-stratified program; same seed, same program.

    Same-stratum predicates are only offered to positive positions, so the
    result is stratified by construction (and checked)."""
    pf = profile or RandomProfile()
    rng = random.Random(seed)
    objects = ("a", "b", "c")[: pf.objects]
    predicates: list[Predicate] = []
    basics: list[Predicate] = []
    for n in range(pf.basic_predicates):
        pred = Predicate(f"B{n + 1}", rng.randint(0, pf.max_arity), "basic")
        basics.append(pred)
        predicates.append(pred)

    strata = []
    earlier: list[Predicate] = []
    derived_counter = 0
    for _ in range(pf.strata):
        members = []
        for _ in range(rng.randint(1, pf.max_members)):
            derived_counter += 1
            pred = Predicate(f"D{derived_counter}", rng.randint(0, pf.max_arity), "derived")
            members.append(pred)
            predicates.append(pred)
        negatable = basics + earlier
        positive_pool = basics + earlier + members
        axioms = []
        for pred in members:
            for _ in range(rng.randint(1, pf.max_axioms)):
                head_vars = ("x", "y")[: pred.arity]
                quantifier_counter = [0]

                def args_for(arity: int, scope: tuple[str, ...]) -> tuple[Term, ...]:
                    out = []
                    for _ in range(arity):
                        if scope and rng.random() >= pf.constant_rate:
                            out.append(Var(rng.choice(scope)))
                        else:
                            out.append(Const(rng.choice(objects)))
                    return tuple(out)

                def atom(scope: tuple[str, ...], positive: bool):
                    pool = positive_pool if positive else negatable
                    roll = rng.random()
                    if roll < 0.04:
                        return Top()
                    if roll < 0.08:
                        return Bottom()
                    choice = rng.choice(pool)
                    return Atom(choice.name, args_for(choice.arity, scope))

                def gen(depth: int, scope: tuple[str, ...], positive: bool):
                    if depth <= 0:
                        return atom(scope, positive)
                    roll = rng.random()
                    if roll < pf.negation_rate and negatable:
                        return Not(gen(depth - 1, scope, not positive))
                    roll = rng.random()
                    if roll < 0.22:
                        quantifier_counter[0] += 1
                        name = f"q{quantifier_counter[0]}"
                        kind = Exists if rng.random() < 0.5 else Forall
                        return kind((name,), gen(depth - 1, scope + (name,), positive))
                    if roll < 0.55:
                        return And(
                            tuple(gen(depth - 1, scope, positive) for _ in range(2))
                        )
                    if roll < 0.85:
                        return Or(
                            tuple(gen(depth - 1, scope, positive) for _ in range(2))
                        )
                    return atom(scope, positive)

                body = gen(rng.randint(1, pf.max_depth), head_vars, True)
                axioms.append(Axiom(pred.name, head_vars, body))
        strata.append(tuple(axioms))
        earlier.extend(members)
    program = AxiomProgram(predicates, objects, tuple(strata))
    return program


def power_fit(pairs: Sequence[tuple[float, float]]) -> tuple[float, float]:
    """Least-squares slope and intercept of log y against log x."""
    if len(pairs) < 2:
        raise VerifyError("need at least two points to fit")
    if any(x <= 0 or y <= 0 for x, y in pairs):
        raise VerifyError("fit needs positive coordinates")
    xs = [log(x) for x, _ in pairs]
    ys = [log(y) for _, y in pairs]
    n = len(xs)
    mx = sum(xs) / n
    my = sum(ys) / n
    sxx = sum((x - mx) ** 2 for x in xs)
    if sxx == 0:
        raise VerifyError("fit needs at least two distinct sizes")
    slope = sum((x - mx) * (y - my) for x, y in zip(xs, ys)) / sxx
    return slope, my - slope * mx
