"""Stage-ordering axiom generation and negative-occurrence elimination.

For one stratum with members P_1..P_m, ``generate_stage_axioms`` emits a
self-contained stratum defining five relation predicates per member pair,
capturing the order in which the staged fixpoint derives ground atoms
(stage f+1 standing for "never"):

  lt    stage(a, i) <  stage(b, j)
  leq   stage(a, i) <= stage(b, j), and a is actually derived
  nlt   stage(a, i) >= stage(b, j)           complement of lt
  nleq  stage(a, i) >  stage(b, j), or a is never derived
  tri   stage(a, i) + 1 = stage(b, j)

Every derived predicate occurs positively in the generated bodies, so a
negative occurrence of a member P_i(t) elsewhere can be replaced by the
positive-only test "not nleq_ii(t, t)", which holds exactly when P_i(t) is
derived.  ``eliminate_negative_occurrences`` applies this until no derived
predicate occurs negatively anywhere, generating at most one relation
family per stratum; families are always generated from the stratum's
original axioms, never from rewritten ones, which keeps the rewriting from
feeding on its own output.  ``merge_to_single_stratum`` then collapses the
result into an equivalent one-stratum program.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Iterable, Mapping, Optional, Sequence

from .evaluator import RELATION_NAMES
from .logic import (
    And,
    Atom,
    Axiom,
    AxiomProgram,
    Bottom,
    Exists,
    Forall,
    Formula,
    LogicError,
    NEGATIVE,
    Not,
    Or,
    Predicate,
    Stratum,
    Term,
    Top,
    Var,
    affected_predicates,
    free_vars,
    iter_atoms,
    make_conj,
    make_disj,
    make_exists,
    make_forall,
    negative_occurrences,
    node_count,
    prune_constants,
    substitute,
)


class TransformError(LogicError):
    """A transformation was asked for something it cannot do."""


MUTATIONS = ("eq1", "eq2", "eq3", "eq4", "eq5")


class StageMode(Enum):
    """How a member atom P_k(z) is replaced when a body copy is specialized
    to a stage bound with target member j and extra arguments y:

      LT        lt_kj(z, y)
      LEQ       leq_kj(z, y)
      NOT_NLT   not nlt_kj(z, y)
      NOT_NLEQ  not nleq_kj(z, y)
      BOTTOM    false
    """

    LT = "lt"
    LEQ = "leq"
    NOT_NLT = "not-nlt"
    NOT_NLEQ = "not-nleq"
    BOTTOM = "bottom"


_MODE_RELATION = {
    StageMode.LT: "lt",
    StageMode.LEQ: "leq",
    StageMode.NOT_NLT: "nlt",
    StageMode.NOT_NLEQ: "nleq",
}


def substitute_stage(
    formula: Formula,
    member_index: Mapping[str, int],
    names: Mapping[tuple[str, int, int], str],
    mode: StageMode,
    target: int = 0,
    extra: tuple[Term, ...] = (),
) -> Formula:
    """Replace every member atom in a formula per the given stage mode.

    ``member_index`` maps member predicate names to 1-based positions,
    ``names`` maps (relation, k, target) to generated predicate names.  No
    simplification happens here; callers prune the assembled bodies.  The
    extra arguments must not be captured by quantifiers in the formula.
    """
    extra_vars = {t.name for t in extra if isinstance(t, Var)}

    def walk(f: Formula) -> Formula:
        if isinstance(f, Atom):
            k = member_index.get(f.pred)
            if k is None:
                return f
            if mode is StageMode.BOTTOM:
                return Bottom()
            repl = Atom(names[(_MODE_RELATION[mode], k, target)], f.args + tuple(extra))
            if mode in (StageMode.NOT_NLT, StageMode.NOT_NLEQ):
                return Not(repl)
            return repl
        if isinstance(f, (Top, Bottom)):
            return f
        if isinstance(f, Not):
            return Not(walk(f.sub))
        if isinstance(f, And):
            return And(tuple(walk(s) for s in f.subs))
        if isinstance(f, Or):
            return Or(tuple(walk(s) for s in f.subs))
        if isinstance(f, (Exists, Forall)):
            caught = extra_vars.intersection(f.vars)
            if caught:
                raise TransformError(
                    "stage substitution would capture " + ", ".join(sorted(caught))
                )
            sub = walk(f.sub)
            return type(f)(f.vars, sub)
        raise LogicError(f"unknown formula node {type(f).__name__}")

    return walk(formula)


# ---------------------------------------------------------------------------
# Normalization

def _collect_var_names(formula: Formula) -> set[str]:
    out: set[str] = set()

    def walk(f: Formula) -> None:
        if isinstance(f, Atom):
            for t in f.args:
                if isinstance(t, Var):
                    out.add(t.name)
            return
        if isinstance(f, (Top, Bottom)):
            return
        if isinstance(f, Not):
            walk(f.sub)
        elif isinstance(f, (And, Or)):
            for s in f.subs:
                walk(s)
        elif isinstance(f, (Exists, Forall)):
            out.update(f.vars)
            walk(f.sub)

    walk(formula)
    return out


def _fresh_namer(avoid: set[str], prefix: str = "w") -> Callable[[], str]:
    counter = 0

    def fresh() -> str:
        nonlocal counter
        while True:
            counter += 1
            candidate = f"{prefix}{counter}"
            if candidate not in avoid:
                avoid.add(candidate)
                return candidate

    return fresh


def _freshen_bound(formula: Formula, fresh: Callable[[], str]) -> Formula:
    """Alpha-rename every bound variable to a fresh name."""
    if isinstance(formula, (Atom, Top, Bottom)):
        return formula
    if isinstance(formula, Not):
        return Not(_freshen_bound(formula.sub, fresh))
    if isinstance(formula, And):
        return And(tuple(_freshen_bound(s, fresh) for s in formula.subs))
    if isinstance(formula, Or):
        return Or(tuple(_freshen_bound(s, fresh) for s in formula.subs))
    if isinstance(formula, (Exists, Forall)):
        new_names = tuple(fresh() for _ in formula.vars)
        renamed = substitute(
            formula.sub,
            {old: Var(new) for old, new in zip(formula.vars, new_names)},
        )
        return type(formula)(new_names, _freshen_bound(renamed, fresh))
    raise LogicError(f"unknown formula node {type(formula).__name__}")


def normalize_stratum(stratum: Stratum) -> tuple[Axiom, ...]:
    """One axiom per member, canonical head variables v1.., bound variables
    alpha-renamed to be unique across the stratum, multiple axioms for the
    same head joined into a disjunction."""
    avoid: set[str] = set()
    for axiom in stratum:
        avoid.update(axiom.head_vars)
        avoid.update(_collect_var_names(axiom.body))
    fresh = _fresh_namer(avoid)
    out = []
    for pred in affected_predicates(stratum):
        group = [ax for ax in stratum if ax.head_pred == pred]
        arity = len(group[0].head_vars)
        head = tuple(f"v{n + 1}" for n in range(arity))
        bodies = []
        for ax in group:
            body = _freshen_bound(ax.body, fresh)
            body = substitute(
                body, {old: Var(new) for old, new in zip(ax.head_vars, head)}
            )
            bodies.append(body)
        out.append(Axiom(pred, head, make_disj(bodies)))
    return tuple(out)


# ---------------------------------------------------------------------------
# Family generation

@dataclass(frozen=True)
class StagePredicateFamily:
    """The generated stage-relation stratum for one source stratum.

    ``names`` maps (relation, i, j) with 1-based member positions to the
    generated predicate names; ``axioms`` is the complete new stratum in
    emission order, ``predicates`` the matching declarations.
    """

    stratum_index: int
    round_index: int
    members: tuple[str, ...]
    arities: tuple[int, ...]
    names: Mapping[tuple[str, int, int], str]
    predicates: tuple[Predicate, ...]
    axioms: tuple[Axiom, ...]
    aux_empty: Optional[str] = None
    aux_fix: Mapping[int, str] = field(default_factory=dict)
    mutation: Optional[str] = None

    def name(self, rel: str, i: int, j: int) -> str:
        return self.names[(rel, i, j)]


def _candidate_names(
    members: tuple[str, ...], round_index: int, optimize_aux: bool
) -> tuple[dict[tuple[str, int, int], str], Optional[str], dict[int, str]]:
    m = len(members)
    names = {
        (rel, i, j): f"{rel}__{members[i - 1]}__{members[j - 1]}__r{round_index}"
        for rel in RELATION_NAMES
        for i in range(1, m + 1)
        for j in range(1, m + 1)
    }
    if len(set(names.values())) < len(names):
        # member names that themselves contain the separator can make the
        # plain scheme ambiguous; fall back to position-tagged names
        names = {
            (rel, i, j): f"{rel}__m{i}_{members[i - 1]}__m{j}_{members[j - 1]}__r{round_index}"
            for rel in RELATION_NAMES
            for i in range(1, m + 1)
            for j in range(1, m + 1)
        }
    aux_empty = f"aux_empty__r{round_index}" if optimize_aux else None
    aux_fix = (
        {i: f"aux_fix__{members[i - 1]}__r{round_index}" for i in range(1, m + 1)}
        if optimize_aux
        else {}
    )
    return names, aux_empty, aux_fix


def generate_stage_axioms(
    program: AxiomProgram,
    stratum_index: int,
    *,
    round_index: int = 1,
    optimize_aux: bool = False,
    mutation: Optional[str] = None,
    avoid_names: frozenset[str] = frozenset(),
) -> StagePredicateFamily:
    """Generate the stage-relation stratum for one stratum of a program.

    ``round_index`` tags the generated names and is bumped automatically on
    a name collision with the program signature or ``avoid_names``.
    ``mutation`` deliberately miscompiles one defining equation (eq1..eq5)
    for sensitivity experiments.
    """
    if mutation is not None and mutation not in MUTATIONS:
        raise TransformError(f"unknown mutation {mutation!r}")
    if not 0 <= stratum_index < len(program.strata):
        raise TransformError(f"no stratum {stratum_index}")
    stratum = program.strata[stratum_index]
    normalized = normalize_stratum(stratum)
    if not normalized:
        raise TransformError("stratum has no affected predicates")
    members = tuple(ax.head_pred for ax in normalized)
    arities = tuple(len(ax.head_vars) for ax in normalized)
    m = len(members)
    member_index = {name: k + 1 for k, name in enumerate(members)}

    taken = set(program.signature) | set(avoid_names)
    rnd = round_index
    while True:
        names, aux_empty, aux_fix = _candidate_names(members, rnd, optimize_aux)
        generated = list(names.values())
        if aux_empty is not None:
            generated.append(aux_empty)
            generated.extend(aux_fix.values())
        if not taken.intersection(generated):
            break
        rnd += 1

    def xs(i: int) -> tuple[str, ...]:
        return tuple(f"x{n + 1}" for n in range(arities[i - 1]))

    def ys(j: int) -> tuple[str, ...]:
        return tuple(f"y{n + 1}" for n in range(arities[j - 1]))

    def zs(k: int) -> tuple[str, ...]:
        return tuple(f"z{n + 1}" for n in range(arities[k - 1]))

    def vt(vs: Iterable[str]) -> tuple[Term, ...]:
        return tuple(Var(v) for v in vs)

    def phi(
        k: int,
        roles: tuple[str, ...],
        mode: Optional[StageMode],
        target: int = 0,
        extra: tuple[str, ...] = (),
    ) -> Formula:
        ax = normalized[k - 1]
        body = substitute(ax.body, {v: Var(r) for v, r in zip(ax.head_vars, roles)})
        if mode is None:
            return body
        return substitute_stage(body, member_index, names, mode, target, vt(extra))

    def chain(rel_first: str, i: int, j: int) -> Formula:
        parts = [
            make_exists(
                zs(k),
                And(
                    (
                        Atom(names[(rel_first, i, k)], vt(xs(i)) + vt(zs(k))),
                        Atom(names[("tri", k, j)], vt(zs(k)) + vt(ys(j))),
                    )
                ),
            )
            for k in range(1, m + 1)
        ]
        return make_disj(parts)

    def never_derivable() -> Formula:
        return make_conj(
            [
                make_forall(zs(k), Not(phi(k, zs(k), StageMode.BOTTOM)))
                for k in range(1, m + 1)
            ]
        )

    def stage_is_last(i: int) -> Formula:
        return make_conj(
            [
                make_forall(
                    zs(k),
                    make_disj(
                        [
                            Not(phi(k, zs(k), StageMode.NOT_NLEQ, i, xs(i))),
                            phi(k, zs(k), StageMode.LT, i, xs(i)),
                        ]
                    ),
                )
                for k in range(1, m + 1)
            ]
        )

    axioms: list[Axiom] = []

    def emit(rel: str, i: int, j: int, body: Formula) -> None:
        axioms.append(
            Axiom(names[(rel, i, j)], xs(i) + ys(j), prune_constants(body))
        )

    for i in range(1, m + 1):
        for j in range(1, m + 1):
            emit("lt", i, j, chain("lt" if mutation == "eq1" else "leq", i, j))
    for i in range(1, m + 1):
        for j in range(1, m + 1):
            if mutation == "eq2":
                emit("leq", i, j, phi(i, xs(i), None))
            else:
                emit("leq", i, j, phi(i, xs(i), StageMode.LT, j, ys(j)))
    for i in range(1, m + 1):
        for j in range(1, m + 1):
            parts = [phi(j, ys(j), StageMode.BOTTOM), chain("nleq", i, j)]
            if mutation != "eq3":
                parts.append(
                    Atom(aux_empty) if optimize_aux else never_derivable()
                )
            emit("nlt", i, j, make_disj(parts))
    for i in range(1, m + 1):
        for j in range(1, m + 1):
            mode = StageMode.NOT_NLEQ if mutation == "eq4" else StageMode.NOT_NLT
            emit("nleq", i, j, Not(phi(i, xs(i), mode, j, ys(j))))
    for i in range(1, m + 1):
        for j in range(1, m + 1):
            settled = (
                Atom(aux_fix[i], vt(xs(i))) if optimize_aux else stage_is_last(i)
            )
            conjuncts = [phi(i, xs(i), StageMode.LT, i, xs(i))]
            if mutation != "eq5":
                conjuncts.append(Not(phi(j, ys(j), StageMode.NOT_NLT, i, xs(i))))
            conjuncts.append(
                make_disj([phi(j, ys(j), StageMode.LEQ, i, xs(i)), settled])
            )
            emit("tri", i, j, make_conj(conjuncts))

    predicates = [
        Predicate(names[(rel, i, j)], arities[i - 1] + arities[j - 1], "derived")
        for rel in RELATION_NAMES
        for i in range(1, m + 1)
        for j in range(1, m + 1)
    ]
    if optimize_aux:
        axioms.append(Axiom(aux_empty, (), prune_constants(never_derivable())))
        predicates.append(Predicate(aux_empty, 0, "derived"))
        for i in range(1, m + 1):
            axioms.append(
                Axiom(aux_fix[i], xs(i), prune_constants(stage_is_last(i)))
            )
            predicates.append(Predicate(aux_fix[i], arities[i - 1], "derived"))

    return StagePredicateFamily(
        stratum_index=stratum_index,
        round_index=rnd,
        members=members,
        arities=arities,
        names=names,
        predicates=tuple(predicates),
        axioms=tuple(axioms),
        aux_empty=aux_empty,
        aux_fix=aux_fix,
        mutation=mutation,
    )


# ---------------------------------------------------------------------------
# Elimination

@dataclass(frozen=True)
class Replacement:
    """One rewritten occurrence; indices refer to the transformed program."""

    pred: str
    stratum_index: int
    axiom_index: int
    path: tuple[int, ...]
    replacement_pred: Optional[str]
    kind: str = "stage"  # or "unaffected-false"

    def to_json(self) -> dict:
        return {
            "pred": self.pred,
            "stratum": self.stratum_index,
            "axiom": self.axiom_index,
            "path": list(self.path),
            "replacement": self.replacement_pred,
            "kind": self.kind,
        }


@dataclass(frozen=True)
class FamilyRecord:
    family: StagePredicateFamily
    origin_stratum: int
    stratum_index: int

    def to_json(self) -> dict:
        return {
            "origin_stratum": self.origin_stratum,
            "stratum": self.stratum_index,
            "round": self.family.round_index,
            "members": list(self.family.members),
            "predicates": [p.name for p in self.family.predicates],
            "axioms": len(self.family.axioms),
        }


@dataclass(frozen=True)
class StratumMetrics:
    members: int
    max_arity: int
    total_arity: int
    same_stratum_occurrences: int
    size: int

    def to_json(self) -> dict:
        return {
            "members": self.members,
            "max_arity": self.max_arity,
            "total_arity": self.total_arity,
            "same_stratum_occurrences": self.same_stratum_occurrences,
            "size": self.size,
        }


@dataclass(frozen=True)
class ProgramMetrics:
    strata: tuple[StratumMetrics, ...]
    signature_size: int
    total_size: int

    def to_json(self) -> dict:
        return {
            "strata": [s.to_json() for s in self.strata],
            "signature_size": self.signature_size,
            "total_size": self.total_size,
        }


@dataclass(frozen=True)
class TransformReport:
    algorithm: str
    iterations: int
    replacements: tuple[Replacement, ...]
    families: tuple[FamilyRecord, ...]
    metrics_before: ProgramMetrics
    metrics_after: ProgramMetrics

    def to_json(self) -> dict:
        return {
            "algorithm": self.algorithm,
            "iterations": self.iterations,
            "replacements": [r.to_json() for r in self.replacements],
            "families": [f.to_json() for f in self.families],
            "metrics_before": self.metrics_before.to_json(),
            "metrics_after": self.metrics_after.to_json(),
        }


def compute_metrics(program: AxiomProgram) -> ProgramMetrics:
    """Per-stratum size measures plus a whole-program size.

    The stratum size counts head atoms and body nodes; the program size adds
    one entry of 1 + arity per declared predicate, so growth in both axioms
    and signature is visible."""
    per = []
    for stratum in program.strata:
        members = affected_predicates(stratum)
        member_set = set(members)
        arities = [program.signature[p].arity for p in members]
        occurrences = 0
        size = 0
        for ax in stratum:
            size += 1 + len(ax.head_vars) + node_count(ax.body)
            for _, atom, _ in iter_atoms(ax.body):
                if atom.pred in member_set:
                    occurrences += 1
        per.append(
            StratumMetrics(
                members=len(members),
                max_arity=max(arities, default=0),
                total_arity=sum(arities),
                same_stratum_occurrences=occurrences,
                size=size,
            )
        )
    signature_size = sum(1 + p.arity for p in program.signature.values())
    return ProgramMetrics(
        strata=tuple(per),
        signature_size=signature_size,
        total_size=signature_size + sum(s.size for s in per),
    )


def _replace_negative(
    formula: Formula, targets: Mapping[str, Optional[str]]
) -> tuple[Formula, list[tuple[tuple[int, ...], str]]]:
    """Replace negative occurrences of target predicates.

    A target mapped to a name becomes "not name(args ++ args)"; a target
    mapped to None becomes false (sound only for never-derivable
    predicates).  Returns the new formula and the replaced paths.
    """
    hits: list[tuple[tuple[int, ...], str]] = []

    def walk(f: Formula, negative: bool, path: tuple[int, ...]) -> Formula:
        if isinstance(f, Atom):
            repl = targets.get(f.pred)
            if negative and f.pred in targets:
                hits.append((path, f.pred))
                if repl is None:
                    return Bottom()
                return Not(Atom(repl, f.args + f.args))
            return f
        if isinstance(f, (Top, Bottom)):
            return f
        if isinstance(f, Not):
            return Not(walk(f.sub, not negative, path + (0,)))
        if isinstance(f, And):
            return And(
                tuple(walk(s, negative, path + (n,)) for n, s in enumerate(f.subs))
            )
        if isinstance(f, Or):
            return Or(
                tuple(walk(s, negative, path + (n,)) for n, s in enumerate(f.subs))
            )
        if isinstance(f, (Exists, Forall)):
            return type(f)(f.vars, walk(f.sub, negative, path + (0,)))
        raise LogicError(f"unknown formula node {type(f).__name__}")

    return walk(formula, False, ()), hits


def eliminate_negative_occurrences(
    program: AxiomProgram,
    *,
    optimize_aux: bool = False,
    mutation: Optional[str] = None,
) -> tuple[AxiomProgram, TransformReport]:
    """Rewrite a program so no derived predicate occurs negatively.

    Worklist over strata: while some derived predicate occurs negatively,
    take the earliest stratum defining such a predicate, generate its stage
    relation family once (from the stratum's original axioms), insert the
    family right after that stratum, and rewrite every negative occurrence
    of its members into a double negation of the member's own nleq
    predicate.  Families themselves may carry negative occurrences of
    predicates from earlier strata (copied from the original bodies), which
    later passes pick up; each pass removes every negative occurrence of
    the chosen stratum's members, so the loop ends after at most one family
    plus a handful of rewrite passes per stratum.

    A negative occurrence of a derived predicate that no stratum defines is
    replaced by false, which is what the predicate evaluates to.
    """
    metrics_before = compute_metrics(program)
    working: list[list[Axiom]] = [list(s) for s in program.strata]
    origin: list[Optional[int]] = list(range(len(working)))
    signature = dict(program.signature)
    family_by_origin: dict[int, StagePredicateFamily] = {}
    family_records: list[list] = []  # [family, origin, position]
    replacement_records: list[list] = []  # [pred, stratum, axiom, path, repl, kind]
    round_counter = 1
    iterations = 0
    budget = (len(working) + 2) * (len(working) + 2) + 4

    def apply_targets(targets: Mapping[str, Optional[str]], kind: str) -> None:
        for si, stratum in enumerate(working):
            for ai, ax in enumerate(stratum):
                new_body, hits = _replace_negative(ax.body, targets)
                if hits:
                    stratum[ai] = Axiom(ax.head_pred, ax.head_vars, new_body, span=ax.span)
                    for path, pred in hits:
                        replacement_records.append(
                            [pred, si, ai, path, targets[pred], kind]
                        )

    while True:
        if iterations > budget:
            raise TransformError(
                "internal error: negative-occurrence elimination did not settle"
            )
        affected_at: list[set[str]] = [
            set(affected_predicates(s)) for s in working
        ]
        defined_at: dict[str, int] = {}
        for si, preds in enumerate(affected_at):
            for p in preds:
                defined_at.setdefault(p, si)
        negative_preds: set[str] = set()
        for stratum in working:
            for ax in stratum:
                for _, atom, pol in iter_atoms(ax.body):
                    if pol == NEGATIVE and signature[atom.pred].kind == "derived":
                        negative_preds.add(atom.pred)
        if not negative_preds:
            break
        iterations += 1
        unaffected = {p for p in negative_preds if p not in defined_at}
        if unaffected:
            apply_targets({p: None for p in unaffected}, "unaffected-false")
            continue
        target = min(defined_at[p] for p in negative_preds)
        o = origin[target]
        if o is None:
            raise TransformError(
                "internal error: generated stage predicate occurs negatively"
            )
        family = family_by_origin.get(o)
        if family is None:
            family = generate_stage_axioms(
                program,
                o,
                round_index=round_counter,
                optimize_aux=optimize_aux,
                mutation=mutation,
                avoid_names=frozenset(signature),
            )
            round_counter = family.round_index + 1
            family_by_origin[o] = family
            position = target + 1
            working.insert(position, list(family.axioms))
            origin.insert(position, None)
            for rec in replacement_records:
                if rec[1] >= position:
                    rec[1] += 1
            for rec in family_records:
                if rec[2] >= position:
                    rec[2] += 1
            family_records.append([family, o, position])
            for pred in family.predicates:
                signature[pred.name] = pred
        members = family.members
        targets = {
            member: family.names[("nleq", k + 1, k + 1)]
            for k, member in enumerate(members)
            if member in negative_preds
        }
        apply_targets(targets, "stage")

    result = AxiomProgram(
        signature.values(),
        program.universe_hint,
        tuple(tuple(s) for s in working),
    )
    report = TransformReport(
        algorithm="iterated-worklist",
        iterations=iterations,
        replacements=tuple(
            Replacement(p, si, ai, tuple(path), repl, kind)
            for p, si, ai, path, repl, kind in replacement_records
        ),
        families=tuple(
            FamilyRecord(fam, orig, pos) for fam, orig, pos in family_records
        ),
        metrics_before=metrics_before,
        metrics_after=compute_metrics(result),
    )
    return result, report


def merge_to_single_stratum(program: AxiomProgram) -> AxiomProgram:
    """Collapse a program with no negative derived occurrences into one
    stratum; the joint fixpoint then coincides with the stratified one."""
    derived = [p.name for p in program.derived_predicates]
    negs = negative_occurrences(program, derived)
    if negs:
        first = negs[0]
        raise TransformError(
            "cannot merge: derived predicate occurs negatively at "
            f"stratum {first.stratum_index}, axiom {first.axiom_index}"
        )
    axioms = tuple(ax for stratum in program.strata for ax in stratum)
    strata = (axioms,) if axioms else ()
    return AxiomProgram(program.signature.values(), program.universe_hint, strata)
