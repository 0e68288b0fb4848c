"""Evaluation over finite universes: formula truth, extensions, stages.

A TruthAssignment is a closed-world set of true ground atoms over a fixed
object universe.  ``extend`` computes the unique extension of a basic state
stratum by stratum.  Two interchangeable per-stratum engines exist:

 - a chaotic one that fires one applicable axiom instance at a time, in an
   order controlled by a caller-supplied RNG; any order reaches the same
   fixed point because same-stratum predicates only occur positively, and

 - a staged one that repeatedly applies all axioms in parallel against a
   frozen snapshot of the state and records, for every derived atom, the
   first snapshot in which it holds.

Stage convention: snapshot 0 is the state before anything is derived, and
round l (l = 1, 2, ...) adds every head instance whose body holds in
snapshot l-1.  stage(atom) is the least l whose snapshot contains the atom.
The fixpoint stage f is the number of productive rounds, so explicit stages
lie in 1..f and an underivable atom has implicit stage f+1.  With nothing
derivable at all, f = 0 and every atom of the stratum sits at stage 1 = f+1.

Formulas are compiled once into nested closures (short-circuiting And/Or,
early-exit quantifier loops); Engine keeps the compiled program around so
sweeps over many basic states pay compilation once.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Iterable, Mapping, Optional, Sequence

from .logic import (
    And,
    Atom,
    Axiom,
    AxiomProgram,
    Bottom,
    Const,
    Exists,
    Forall,
    Formula,
    LogicError,
    Not,
    Or,
    Predicate,
    Top,
    Var,
    affected_predicates,
    free_vars,
    iter_atoms,
)

GroundAtom = tuple[str, tuple[str, ...]]


class EvalError(LogicError):
    """Evaluation was asked something the inputs do not support."""


@dataclass(frozen=True)
class Universe:
    """Nonempty ordered object domain; the order fixes enumeration order."""

    objects: tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.objects:
            raise EvalError("universe must be nonempty")
        if len(set(self.objects)) != len(self.objects):
            raise EvalError("duplicate object in universe")


@dataclass(frozen=True)
class TruthAssignment:
    """True ground atoms over a universe, closed-world for ``covered``
    predicates.  A basic state covers exactly the basic predicates; an
    extension covers every predicate of its program."""

    universe: Universe
    true_atoms: frozenset[GroundAtom]
    covered: frozenset[str]

    def __post_init__(self) -> None:
        stray = {pred for pred, _ in self.true_atoms} - set(self.covered)
        if stray:
            raise EvalError(
                "true atoms outside the covered predicates: " + ", ".join(sorted(stray))
            )

    def holds(self, pred: str, args: Iterable[str] = ()) -> bool:
        if pred not in self.covered:
            raise EvalError(f"assignment does not cover predicate {pred}")
        return (pred, tuple(args)) in self.true_atoms


@dataclass(frozen=True)
class StageTable:
    """Stages of one stratum's staged run.

    ``stage`` holds every derived-true atom of the stratum's affected
    predicates; anything absent has implicit stage ``fixpoint_stage + 1``.
    """

    stratum_index: int
    universe: Universe
    stage: Mapping[GroundAtom, int]
    fixpoint_stage: int

    def stage_of(self, pred: str, args: tuple[str, ...]) -> int:
        return self.stage.get((pred, args), self.fixpoint_stage + 1)


RelationKey = tuple[str, int, int]
TuplePair = tuple[tuple[str, ...], tuple[str, ...]]

RELATION_NAMES = ("lt", "leq", "nlt", "nleq", "tri")


@dataclass(frozen=True)
class StageRelations:
    """The five stage-order relations for every member pair (i, j), 1-based."""

    member_count: int
    pairs: Mapping[RelationKey, frozenset[TuplePair]]

    def get(self, rel: str, i: int, j: int) -> frozenset[TuplePair]:
        if rel not in RELATION_NAMES:
            raise EvalError(f"unknown stage relation {rel!r}")
        if not (1 <= i <= self.member_count and 1 <= j <= self.member_count):
            raise EvalError(f"member index out of range 1..{self.member_count}")
        return self.pairs[(rel, i, j)]


# ---------------------------------------------------------------------------
# Formula compilation

_Compiled = Callable[[dict, frozenset], bool]


def check_no_shadowing(formula: Formula, bound: frozenset[str] | None = None) -> None:
    """Reject formulas where a quantifier rebinds an enclosing bound name
    or a free variable of the formula.

    Compiled evaluation shares one mutable environment, which is only sound
    when no variable is shadowed; the parser and the transformer keep bound
    names apart, but hand-built formulas must be checked."""
    if bound is None:
        bound = frozenset(free_vars(formula))
    if isinstance(formula, (Atom, Top, Bottom)):
        return
    if isinstance(formula, Not):
        check_no_shadowing(formula.sub, bound)
        return
    if isinstance(formula, (And, Or)):
        for sub in formula.subs:
            check_no_shadowing(sub, bound)
        return
    if isinstance(formula, (Exists, Forall)):
        clash = bound.intersection(formula.vars)
        if clash:
            raise EvalError(
                "cannot evaluate a formula that shadows bound variables: "
                + ", ".join(sorted(clash))
            )
        check_no_shadowing(formula.sub, bound | frozenset(formula.vars))
        return
    raise LogicError(f"unknown formula node {type(formula).__name__}")


def compile_formula(formula: Formula, objects: Sequence[str]) -> _Compiled:
    """Compile a formula to ``fn(env, atoms) -> bool``.

    ``env`` maps variable names to object names and may be mutated by
    quantifier loops; because the AST never shadows a bound variable, a
    binding is always written before any atom below reads it.
    """
    if isinstance(formula, Atom):
        pred = formula.pred
        if not formula.args:
            key = (pred, ())
            return lambda env, atoms: key in atoms
        parts = tuple((isinstance(t, Var), t.name) for t in formula.args)
        if all(not isv for isv, _ in parts):
            key = (pred, tuple(n for _, n in parts))
            return lambda env, atoms: key in atoms

        def ev_atom(env: dict, atoms: frozenset) -> bool:
            return (pred, tuple(env[n] if isv else n for isv, n in parts)) in atoms

        return ev_atom
    if isinstance(formula, Top):
        return lambda env, atoms: True
    if isinstance(formula, Bottom):
        return lambda env, atoms: False
    if isinstance(formula, Not):
        sub = compile_formula(formula.sub, objects)
        return lambda env, atoms: not sub(env, atoms)
    if isinstance(formula, (And, Or)):
        subs = tuple(compile_formula(s, objects) for s in formula.subs)
        if isinstance(formula, And):
            if len(subs) == 2:
                s0, s1 = subs
                return lambda env, atoms: s0(env, atoms) and s1(env, atoms)
            if len(subs) == 3:
                s0, s1, s2 = subs
                return lambda env, atoms: (
                    s0(env, atoms) and s1(env, atoms) and s2(env, atoms)
                )
            return lambda env, atoms: all(s(env, atoms) for s in subs)
        if len(subs) == 2:
            s0, s1 = subs
            return lambda env, atoms: s0(env, atoms) or s1(env, atoms)
        if len(subs) == 3:
            s0, s1, s2 = subs
            return lambda env, atoms: (
                s0(env, atoms) or s1(env, atoms) or s2(env, atoms)
            )
        return lambda env, atoms: any(s(env, atoms) for s in subs)
    if isinstance(formula, (Exists, Forall)):
        fn = compile_formula(formula.sub, objects)
        objs = tuple(objects)
        want = isinstance(formula, Exists)
        for var in reversed(formula.vars):
            fn = _quantifier_loop(var, fn, objs, want)
        return fn
    raise LogicError(f"unknown formula node {type(formula).__name__}")


def _quantifier_loop(var: str, fn: _Compiled, objs: tuple[str, ...], want: bool) -> _Compiled:
    def ev(env: dict, atoms: frozenset) -> bool:
        for o in objs:
            env[var] = o
            if fn(env, atoms) == want:
                return want
        return not want

    return ev


def eval_formula(
    formula: Formula, assignment: TruthAssignment, env: Mapping[str, str] | None = None
) -> bool:
    """Truth of a formula under an assignment and variable bindings."""
    env = dict(env or {})
    missing = free_vars(formula) - set(env)
    if missing:
        raise EvalError("env missing variables: " + ", ".join(sorted(missing)))
    objects = set(assignment.universe.objects)
    for name, value in env.items():
        if value not in objects:
            raise EvalError(f"env binds ?{name} to unknown object {value}")
    for _, atom, _ in iter_atoms(formula):
        if atom.pred not in assignment.covered:
            raise EvalError(f"assignment does not cover predicate {atom.pred}")
        for term in atom.args:
            if isinstance(term, Const) and term.name not in objects:
                raise EvalError(f"unknown object {term.name} in formula")
    check_no_shadowing(formula)
    fn = compile_formula(formula, assignment.universe.objects)
    return fn(env, assignment.true_atoms)


# ---------------------------------------------------------------------------
# Extension engine

_CompiledAxiom = tuple[str, tuple[str, ...], _Compiled]


class Engine:
    """A program compiled against one universe, for repeated extension runs."""

    def __init__(self, program: AxiomProgram, universe: Universe):
        self.program = program
        self.universe = universe
        objects = universe.objects
        obj_set = set(objects)
        for si, stratum in enumerate(program.strata):
            for axiom in stratum:
                check_no_shadowing(axiom.body)
                for _, atom, _ in iter_atoms(axiom.body):
                    for term in atom.args:
                        if isinstance(term, Const) and term.name not in obj_set:
                            raise EvalError(
                                f"program mentions object {term.name} outside the universe"
                            )
        self.compiled: list[list[_CompiledAxiom]] = [
            [
                (ax.head_pred, ax.head_vars, compile_formula(ax.body, objects))
                for ax in stratum
            ]
            for stratum in program.strata
        ]
        self.affected: list[tuple[str, ...]] = [
            affected_predicates(stratum) for stratum in program.strata
        ]
        self._combos: dict[int, tuple[tuple[str, ...], ...]] = {}

    def combos(self, arity: int) -> tuple[tuple[str, ...], ...]:
        got = self._combos.get(arity)
        if got is None:
            got = tuple(product(self.universe.objects, repeat=arity))
            self._combos[arity] = got
        return got

    def check_basic_state(self, basic_state: TruthAssignment) -> None:
        if basic_state.universe != self.universe:
            raise EvalError("basic state universe differs from the engine universe")
        basic = frozenset(p.name for p in self.program.basic_predicates)
        if basic_state.covered != basic:
            raise EvalError("basic state must cover exactly the basic predicates")
        for name, args in basic_state.true_atoms:
            pred = self.program.signature.get(name)
            if pred is None or pred.kind != "basic":
                raise EvalError(f"state assigns non-basic predicate {name}")
            if len(args) != pred.arity:
                raise EvalError(f"state atom {name} has wrong arity")
            for c in args:
                if c not in set(self.universe.objects):
                    raise EvalError(f"state mentions object {c} outside the universe")

    def run(
        self,
        basic_atoms: frozenset[GroundAtom],
        *,
        upto: Optional[int] = None,
        rng: Optional[random.Random] = None,
    ) -> frozenset[GroundAtom]:
        """Extend a basic state through the first ``upto`` strata (all by
        default); ``rng`` switches to chaotic order for order-independence
        experiments."""
        atoms = set(basic_atoms)
        strata = self.compiled if upto is None else self.compiled[:upto]
        for compiled in strata:
            if rng is None:
                self._run_staged(compiled, atoms)
            else:
                self._run_chaotic(compiled, atoms, rng)
        return frozenset(atoms)

    def run_with_stages(
        self, basic_atoms: frozenset[GroundAtom], *, upto: Optional[int] = None
    ) -> tuple[frozenset[GroundAtom], list[StageTable]]:
        atoms = set(basic_atoms)
        tables: list[StageTable] = []
        strata = self.compiled if upto is None else self.compiled[:upto]
        for si, compiled in enumerate(strata):
            stage, f = self._run_staged(compiled, atoms)
            tables.append(StageTable(si, self.universe, stage, f))
        return frozenset(atoms), tables

    def _run_staged(
        self, compiled: list[_CompiledAxiom], atoms: set[GroundAtom]
    ) -> tuple[dict[GroundAtom, int], int]:
        stage: dict[GroundAtom, int] = {}
        rounds = 0
        env: dict[str, str] = {}
        while True:
            snapshot = frozenset(atoms)
            added: list[GroundAtom] = []
            for head, head_vars, body in compiled:
                for combo in self.combos(len(head_vars)):
                    key = (head, combo)
                    if key in atoms:
                        continue
                    for v, o in zip(head_vars, combo):
                        env[v] = o
                    if body(env, snapshot):
                        added.append(key)
                        atoms.add(key)
            if not added:
                return stage, rounds
            rounds += 1
            for key in added:
                stage[key] = rounds

    def _run_chaotic(
        self, compiled: list[_CompiledAxiom], atoms: set[GroundAtom], rng: random.Random
    ) -> None:
        env: dict[str, str] = {}
        changed = True
        while changed:
            changed = False
            order = list(compiled)
            rng.shuffle(order)
            for head, head_vars, body in order:
                combos = list(self.combos(len(head_vars)))
                rng.shuffle(combos)
                for combo in combos:
                    key = (head, combo)
                    if key in atoms:
                        continue
                    for v, o in zip(head_vars, combo):
                        env[v] = o
                    if body(env, atoms):
                        atoms.add(key)
                        changed = True

    def full_cover(self) -> frozenset[str]:
        return frozenset(self.program.signature)


def extend(
    program: AxiomProgram,
    universe: Universe,
    basic_state: TruthAssignment,
    *,
    rng: Optional[random.Random] = None,
) -> TruthAssignment:
    """The extension of a basic state: all strata evaluated in order."""
    engine = Engine(program, universe)
    engine.check_basic_state(basic_state)
    atoms = engine.run(basic_state.true_atoms, rng=rng)
    return TruthAssignment(universe, atoms, engine.full_cover())


def extend_in_stages(
    program: AxiomProgram, universe: Universe, basic_state: TruthAssignment
) -> tuple[TruthAssignment, list[StageTable]]:
    """Like extend, also returning the per-stratum stage tables."""
    engine = Engine(program, universe)
    engine.check_basic_state(basic_state)
    atoms, tables = engine.run_with_stages(basic_state.true_atoms)
    return TruthAssignment(universe, atoms, engine.full_cover()), tables


def extend_stratum_in_stages(
    stratum: Sequence[Axiom],
    universe: Universe,
    state: TruthAssignment,
    *,
    stratum_index: int = 0,
    program: Optional[AxiomProgram] = None,
) -> tuple[TruthAssignment, StageTable]:
    """Run one stratum's staged fixpoint on a state already extended through
    every earlier stratum.  The state must not assign the stratum's own
    predicates yet.

    ``program`` supplies the signature for validation when available;
    without it the stratum is evaluated as-is.
    """
    affected = set(affected_predicates(stratum))
    for name, _ in state.true_atoms:
        if name in affected:
            raise EvalError(f"state already assigns stratum predicate {name}")
    atoms = set(state.true_atoms)
    stage: dict[GroundAtom, int] = {}
    env: dict[str, str] = {}
    objects = universe.objects
    for ax in stratum:
        check_no_shadowing(ax.body)
    compiled = [
        (ax.head_pred, ax.head_vars, compile_formula(ax.body, objects)) for ax in stratum
    ]
    combos_cache: dict[int, tuple[tuple[str, ...], ...]] = {}

    def combos(arity: int) -> tuple[tuple[str, ...], ...]:
        got = combos_cache.get(arity)
        if got is None:
            got = tuple(product(objects, repeat=arity))
            combos_cache[arity] = got
        return got

    rounds = 0
    while True:
        snapshot = frozenset(atoms)
        added: list[GroundAtom] = []
        for head, head_vars, body in compiled:
            for combo in combos(len(head_vars)):
                key = (head, combo)
                if key in atoms:
                    continue
                for v, o in zip(head_vars, combo):
                    env[v] = o
                if body(env, snapshot):
                    added.append(key)
                    atoms.add(key)
        if not added:
            break
        rounds += 1
        for key in added:
            stage[key] = rounds
    table = StageTable(stratum_index, universe, stage, rounds)
    covered = state.covered | affected
    return TruthAssignment(universe, frozenset(atoms), covered), table


def stage_relations(table: StageTable, preds: Sequence[Predicate]) -> StageRelations:
    """The five stage-order relations over all tuple pairs, from a stage table.

    For members i, j (1-based) and tuples a, b:

      lt    stage(a,i) <  stage(b,j)
      leq   stage(a,i) <= stage(b,j) and stage(a,i) <= f
      nlt   stage(a,i) >= stage(b,j)                      (complement of lt)
      nleq  stage(a,i) >  stage(b,j) or stage(a,i) = f+1  (complement of leq)
      tri   stage(a,i) + 1 = stage(b,j)
    """
    if not preds:
        return StageRelations(0, {})
    objs = table.universe.objects
    f = table.fixpoint_stage
    m = len(preds)
    tuples: dict[int, tuple[tuple[str, ...], ...]] = {
        i: tuple(product(objs, repeat=preds[i - 1].arity)) for i in range(1, m + 1)
    }
    stages: dict[int, dict[tuple[str, ...], int]] = {
        i: {a: table.stage_of(preds[i - 1].name, a) for a in tuples[i]}
        for i in range(1, m + 1)
    }
    pairs: dict[RelationKey, frozenset[TuplePair]] = {}
    for i in range(1, m + 1):
        for j in range(1, m + 1):
            lt, leq, nlt, nleq, tri = set(), set(), set(), set(), set()
            for a, sa in stages[i].items():
                for b, sb in stages[j].items():
                    if sa < sb:
                        lt.add((a, b))
                    if sa <= sb and sa <= f:
                        leq.add((a, b))
                    if sa >= sb:
                        nlt.add((a, b))
                    if sa > sb or sa == f + 1:
                        nleq.add((a, b))
                    if sa + 1 == sb:
                        tri.add((a, b))
            pairs[("lt", i, j)] = frozenset(lt)
            pairs[("leq", i, j)] = frozenset(leq)
            pairs[("nlt", i, j)] = frozenset(nlt)
            pairs[("nleq", i, j)] = frozenset(nleq)
            pairs[("tri", i, j)] = frozenset(tri)
    return StageRelations(m, pairs)
