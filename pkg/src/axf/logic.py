"""Core syntax for stratified axiom programs.

Terms, first order formulas, axioms, and whole programs, plus the purely
syntactic operations everything else builds on: free variables, polarity of
atom occurrences, substitution, stratification checking, and size counting.

A program owns a signature of basic and derived predicates, an ordered list
of object constants, and a sequence of strata; each stratum is a tuple of
axioms ``head <- body``.  Heads are atoms of derived predicates applied to
pairwise distinct variables.  Evaluation and transformation live in sibling
modules and treat everything here as immutable.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Literal, Mapping, Optional, Union

Kind = Literal["basic", "derived"]
Polarity = Literal["positive", "negative"]

POSITIVE: Polarity = "positive"
NEGATIVE: Polarity = "negative"


class LogicError(Exception):
    """Structural error in a formula, axiom, or program."""


class SignatureError(LogicError):
    """Predicate or constant usage disagrees with the declaration."""


@dataclass(frozen=True)
class Violation:
    """One failed stratification condition.

    ``bullet`` names the condition: (a) a predicate is affected by more than
    one stratum, (b) a predicate occurs before the stratum that affects it,
    (c) a positively occurring derived predicate is affected only later,
    (d) a negatively occurring derived predicate is not affected strictly
    earlier.  ``occurrence`` is set for body occurrences, None for
    head-level violations.
    """

    bullet: Literal["a", "b", "c", "d"]
    stratum_index: int
    axiom_index: int
    occurrence: Optional["OccurrenceRef"]
    message: str


class StratificationError(LogicError):
    def __init__(self, violations: Iterable[Violation]):
        self.violations = list(violations)
        head = "; ".join(v.message for v in self.violations[:3])
        more = len(self.violations) - 3
        if more > 0:
            head += f" (+{more} more)"
        super().__init__(f"program is not stratified: {head}")


@dataclass(frozen=True)
class SourceSpan:
    """Byte range in an input text; line and column are 1-based for the start."""

    filename: str
    start: int
    end: int
    line: int
    column: int

    def __str__(self) -> str:
        return f"{self.filename}:{self.line}:{self.column}"


@dataclass(frozen=True)
class Predicate:
    name: str
    arity: int
    kind: Kind

    def __post_init__(self) -> None:
        if self.arity < 0:
            raise LogicError(f"negative arity for predicate {self.name}")
        if self.kind not in ("basic", "derived"):
            raise LogicError(f"bad predicate kind {self.kind!r}")


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Const:
    name: str


Term = Union[Var, Const]


@dataclass(frozen=True)
class Formula:
    """Base class; ``span`` records source provenance and never affects equality."""

    span: Optional[SourceSpan] = field(default=None, compare=False, repr=False, kw_only=True)


@dataclass(frozen=True)
class Atom(Formula):
    pred: str
    args: tuple[Term, ...] = ()


@dataclass(frozen=True)
class Top(Formula):
    pass


@dataclass(frozen=True)
class Bottom(Formula):
    pass


@dataclass(frozen=True)
class Not(Formula):
    sub: Formula


@dataclass(frozen=True)
class And(Formula):
    subs: tuple[Formula, ...]

    def __post_init__(self) -> None:
        if len(self.subs) < 2:
            raise LogicError("And needs at least two conjuncts")


@dataclass(frozen=True)
class Or(Formula):
    subs: tuple[Formula, ...]

    def __post_init__(self) -> None:
        if len(self.subs) < 2:
            raise LogicError("Or needs at least two disjuncts")


@dataclass(frozen=True)
class Exists(Formula):
    vars: tuple[str, ...]
    sub: Formula

    def __post_init__(self) -> None:
        if not self.vars:
            raise LogicError("Exists needs at least one variable")
        if len(set(self.vars)) != len(self.vars):
            raise LogicError("duplicate variable in quantifier")


@dataclass(frozen=True)
class Forall(Formula):
    vars: tuple[str, ...]
    sub: Formula

    def __post_init__(self) -> None:
        if not self.vars:
            raise LogicError("Forall needs at least one variable")
        if len(set(self.vars)) != len(self.vars):
            raise LogicError("duplicate variable in quantifier")


def make_conj(parts: Iterable[Formula]) -> Formula:
    """And over ``parts``; a single part collapses to itself, none to Top."""
    parts = tuple(parts)
    if not parts:
        return Top()
    if len(parts) == 1:
        return parts[0]
    return And(parts)


def make_disj(parts: Iterable[Formula]) -> Formula:
    """Or over ``parts``; a single part collapses to itself, none to Bottom."""
    parts = tuple(parts)
    if not parts:
        return Bottom()
    if len(parts) == 1:
        return parts[0]
    return Or(parts)


def make_exists(vars: Iterable[str], sub: Formula) -> Formula:
    vars = tuple(vars)
    return Exists(vars, sub) if vars else sub


def make_forall(vars: Iterable[str], sub: Formula) -> Formula:
    vars = tuple(vars)
    return Forall(vars, sub) if vars else sub


def children(formula: Formula) -> tuple[Formula, ...]:
    """Subformulas in child-index order, matching occurrence paths."""
    if isinstance(formula, Not):
        return (formula.sub,)
    if isinstance(formula, (And, Or)):
        return formula.subs
    if isinstance(formula, (Exists, Forall)):
        return (formula.sub,)
    return ()


def free_vars(formula: Formula) -> frozenset[str]:
    if isinstance(formula, Atom):
        return frozenset(t.name for t in formula.args if isinstance(t, Var))
    if isinstance(formula, (Exists, Forall)):
        return free_vars(formula.sub) - frozenset(formula.vars)
    out: frozenset[str] = frozenset()
    for sub in children(formula):
        out |= free_vars(sub)
    return out


def node_count(formula: Formula) -> int:
    """Size of a formula: one per connective, quantifier, atom, term, and
    quantified variable."""
    if isinstance(formula, Atom):
        return 1 + len(formula.args)
    if isinstance(formula, (Top, Bottom)):
        return 1
    if isinstance(formula, (Exists, Forall)):
        return 1 + len(formula.vars) + node_count(formula.sub)
    return 1 + sum(node_count(sub) for sub in children(formula))


def iter_atoms(formula: Formula) -> Iterator[tuple[tuple[int, ...], Atom, Polarity]]:
    """Yield (path, atom, polarity) for every atom occurrence, in preorder.

    The path is the sequence of child indices from the root; polarity is
    negative iff the atom sits under an odd number of Not nodes.
    """

    def walk(f: Formula, path: tuple[int, ...], negations: int) -> Iterator:
        if isinstance(f, Atom):
            yield path, f, (NEGATIVE if negations % 2 else POSITIVE)
            return
        if isinstance(f, Not):
            yield from walk(f.sub, path + (0,), negations + 1)
            return
        for i, sub in enumerate(children(f)):
            yield from walk(sub, path + (i,), negations)

    yield from walk(formula, (), 0)


def formula_at(formula: Formula, path: Iterable[int]) -> Formula:
    node = formula
    for step in path:
        subs = children(node)
        if not 0 <= step < len(subs):
            raise LogicError(f"invalid path step {step} at {type(node).__name__}")
        node = subs[step]
    return node


def polarity_of(body: Formula, path: Iterable[int]) -> Polarity:
    """Polarity of the atom at ``path`` in ``body``.

    Only Not nodes flip polarity; implication is desugared before it ever
    reaches this representation.
    """
    path = tuple(path)
    node = body
    negations = 0
    for step in path:
        if isinstance(node, Not):
            negations += 1
        subs = children(node)
        if not 0 <= step < len(subs):
            raise LogicError(f"invalid occurrence path {path!r}")
        node = subs[step]
    if not isinstance(node, Atom):
        raise LogicError(f"path {path!r} does not lead to an atom")
    return NEGATIVE if negations % 2 else POSITIVE


def substitute(formula: Formula, binding: Mapping[str, Term]) -> Formula:
    """Replace free variables per ``binding``; bound variables are untouched.

    Quantified programs here keep bound names disjoint from anything a caller
    substitutes (the parser renames shadowing binders), so capture is treated
    as a caller bug and raised, not repaired.
    """
    if not binding:
        return formula
    if isinstance(formula, Atom):
        args = tuple(
            binding.get(t.name, t) if isinstance(t, Var) else t for t in formula.args
        )
        return Atom(formula.pred, args, span=formula.span)
    if isinstance(formula, (Top, Bottom)):
        return formula
    if isinstance(formula, Not):
        return Not(substitute(formula.sub, binding), span=formula.span)
    if isinstance(formula, And):
        return And(tuple(substitute(s, binding) for s in formula.subs), span=formula.span)
    if isinstance(formula, Or):
        return Or(tuple(substitute(s, binding) for s in formula.subs), span=formula.span)
    if isinstance(formula, (Exists, Forall)):
        inner = {v: t for v, t in binding.items() if v not in formula.vars}
        for t in inner.values():
            if isinstance(t, Var) and t.name in formula.vars:
                raise LogicError(
                    f"substitution would capture variable {t.name} under a quantifier"
                )
        cls = type(formula)
        return cls(formula.vars, substitute(formula.sub, inner), span=formula.span)
    raise LogicError(f"unknown formula node {type(formula).__name__}")


def prune_constants(formula: Formula) -> Formula:
    """Fold Top and Bottom upward: absorb them in And/Or, collapse Not and
    quantifiers over constants.  Assumes a nonempty universe, so a quantifier
    over a constant body is that constant.  No other rewriting happens here;
    in particular double negations survive.
    """
    if isinstance(formula, (Atom, Top, Bottom)):
        return formula
    if isinstance(formula, Not):
        sub = prune_constants(formula.sub)
        if isinstance(sub, Top):
            return Bottom()
        if isinstance(sub, Bottom):
            return Top()
        return Not(sub, span=formula.span)
    if isinstance(formula, (And, Or)):
        absorber, unit = (Bottom, Top) if isinstance(formula, And) else (Top, Bottom)
        kept: list[Formula] = []
        for sub in formula.subs:
            sub = prune_constants(sub)
            if isinstance(sub, absorber):
                return absorber()
            if isinstance(sub, unit):
                continue
            kept.append(sub)
        if not kept:
            return unit()
        if len(kept) == 1:
            return kept[0]
        return type(formula)(tuple(kept), span=formula.span)
    if isinstance(formula, (Exists, Forall)):
        sub = prune_constants(formula.sub)
        if isinstance(sub, (Top, Bottom)):
            return sub
        return type(formula)(formula.vars, sub, span=formula.span)
    raise LogicError(f"unknown formula node {type(formula).__name__}")


def collapse_double_negation(formula: Formula) -> Formula:
    """Rewrite every Not(Not(f)) to f, bottom-up."""
    if isinstance(formula, (Atom, Top, Bottom)):
        return formula
    if isinstance(formula, Not):
        sub = collapse_double_negation(formula.sub)
        if isinstance(sub, Not):
            return sub.sub
        return Not(sub, span=formula.span)
    if isinstance(formula, (And, Or)):
        return type(formula)(
            tuple(collapse_double_negation(s) for s in formula.subs), span=formula.span
        )
    if isinstance(formula, (Exists, Forall)):
        return type(formula)(
            formula.vars, collapse_double_negation(formula.sub), span=formula.span
        )
    raise LogicError(f"unknown formula node {type(formula).__name__}")


@dataclass(frozen=True)
class OccurrenceRef:
    """Pointer to one atom occurrence in an axiom body.

    ``stratum_index`` and ``axiom_index`` are 0-based; ``path`` is the child
    index sequence from the body root to the atom.
    """

    stratum_index: int
    axiom_index: int
    path: tuple[int, ...]
    polarity: Polarity

    def to_json(self) -> dict:
        return {
            "stratum": self.stratum_index,
            "axiom": self.axiom_index,
            "path": list(self.path),
            "polarity": self.polarity,
        }


@dataclass(frozen=True)
class Axiom:
    """One axiom ``head_pred(head_vars) <- body``.

    Head variables are pairwise distinct.  Every free variable of the body
    must be a head variable; the converse may fail (generated stage axioms
    can have head positions the body does not mention), in which case the
    unconstrained positions range over the whole universe.
    """

    head_pred: str
    head_vars: tuple[str, ...]
    body: Formula
    span: Optional[SourceSpan] = field(default=None, compare=False, repr=False, kw_only=True)

    def __post_init__(self) -> None:
        if len(set(self.head_vars)) != len(self.head_vars):
            raise LogicError(f"repeated head variable in axiom for {self.head_pred}")
        loose = free_vars(self.body) - set(self.head_vars)
        if loose:
            names = ", ".join(sorted(loose))
            raise LogicError(
                f"body of axiom for {self.head_pred} has free variables not in the head: {names}"
            )


Stratum = tuple[Axiom, ...]


def affected_predicates(stratum: Iterable[Axiom]) -> tuple[str, ...]:
    """Head predicates of a stratum, in first-appearance order, deduplicated."""
    seen: dict[str, None] = {}
    for axiom in stratum:
        seen.setdefault(axiom.head_pred, None)
    return tuple(seen)


class AxiomProgram:
    """A stratified axiom program: signature, object universe, strata.

    Construction validates the signature use (declared predicates, arities,
    derived heads, declared constants) and stratification; pass
    ``validate=False`` to build intermediate or deliberately broken programs,
    for instance while collecting parse diagnostics.
    """

    def __init__(
        self,
        predicates: Iterable[Predicate],
        universe_hint: Iterable[str] = (),
        strata: Iterable[Iterable[Axiom]] = (),
        *,
        validate: bool = True,
    ):
        self.signature: dict[str, Predicate] = {}
        for pred in predicates:
            if pred.name in self.signature:
                raise SignatureError(f"predicate {pred.name} declared twice")
            self.signature[pred.name] = pred
        self.universe_hint: tuple[str, ...] = tuple(universe_hint)
        if len(set(self.universe_hint)) != len(self.universe_hint):
            raise SignatureError("duplicate object in universe declaration")
        self.strata: tuple[Stratum, ...] = tuple(tuple(s) for s in strata)
        if validate:
            self.validate()

    def validate(self) -> None:
        check_signature_use(self)
        violations = check_stratified(self)
        if violations:
            raise StratificationError(violations)

    def predicate(self, name: str) -> Predicate:
        try:
            return self.signature[name]
        except KeyError:
            raise SignatureError(f"undeclared predicate {name}") from None

    @property
    def basic_predicates(self) -> tuple[Predicate, ...]:
        return tuple(p for p in self.signature.values() if p.kind == "basic")

    @property
    def derived_predicates(self) -> tuple[Predicate, ...]:
        return tuple(p for p in self.signature.values() if p.kind == "derived")

    def affected(self, stratum_index: int) -> tuple[str, ...]:
        return affected_predicates(self.strata[stratum_index])

    def defining_stratum(self, pred_name: str) -> Optional[int]:
        """Index of the stratum affecting ``pred_name``, None if unaffected."""
        for i, stratum in enumerate(self.strata):
            if any(ax.head_pred == pred_name for ax in stratum):
                return i
        return None

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AxiomProgram):
            return NotImplemented
        return (
            self.signature == other.signature
            and self.universe_hint == other.universe_hint
            and self.strata == other.strata
        )

    def __repr__(self) -> str:
        preds = len(self.signature)
        axioms = sum(len(s) for s in self.strata)
        return (
            f"AxiomProgram({preds} predicates, {len(self.universe_hint)} objects, "
            f"{len(self.strata)} strata, {axioms} axioms)"
        )


def check_signature_use(program: AxiomProgram) -> None:
    """Raise SignatureError unless every predicate, arity, head kind, and
    constant in the program matches the declarations."""
    objects = set(program.universe_hint)
    for si, stratum in enumerate(program.strata):
        for ai, axiom in enumerate(stratum):
            where = f"stratum {si + 1}, axiom {ai + 1}"
            head = program.signature.get(axiom.head_pred)
            if head is None:
                raise SignatureError(f"undeclared predicate {axiom.head_pred} ({where})")
            if head.kind != "derived":
                raise SignatureError(
                    f"head predicate {axiom.head_pred} is basic, not derived ({where})"
                )
            if head.arity != len(axiom.head_vars):
                raise SignatureError(
                    f"head of {axiom.head_pred} has {len(axiom.head_vars)} arguments, "
                    f"declared arity is {head.arity} ({where})"
                )
            for _, atom, _ in iter_atoms(axiom.body):
                pred = program.signature.get(atom.pred)
                if pred is None:
                    raise SignatureError(f"undeclared predicate {atom.pred} ({where})")
                if pred.arity != len(atom.args):
                    raise SignatureError(
                        f"atom {atom.pred} has {len(atom.args)} arguments, "
                        f"declared arity is {pred.arity} ({where})"
                    )
                for term in atom.args:
                    if isinstance(term, Const) and term.name not in objects:
                        raise SignatureError(
                            f"unknown object {term.name} in atom {atom.pred} ({where})"
                        )


def check_stratified(program: AxiomProgram) -> list[Violation]:
    """Check the four stratification conditions; an empty list means the
    program is stratified.

    A derived predicate that no axiom affects satisfies (c) and (d)
    vacuously: it is constantly false and imposes no ordering.
    """
    check_signature_use(program)

    affecting: dict[str, list[int]] = {}
    for si, stratum in enumerate(program.strata):
        for name in affected_predicates(stratum):
            affecting.setdefault(name, [])
            if si not in affecting[name]:
                affecting[name].append(si)

    violations: list[Violation] = []

    for name, strata_of in affecting.items():
        if len(strata_of) > 1:
            where = ", ".join(str(s + 1) for s in strata_of)
            first_extra = strata_of[1]
            ax_idx = next(
                ai
                for ai, ax in enumerate(program.strata[first_extra])
                if ax.head_pred == name
            )
            violations.append(
                Violation(
                    "a",
                    first_extra,
                    ax_idx,
                    None,
                    f"predicate {name} is affected by axioms in strata {where}",
                )
            )

    for si, stratum in enumerate(program.strata):
        for ai, axiom in enumerate(stratum):
            # (b) for the head: an earlier stratum must not mention this predicate.
            for earlier in range(si):
                for ei, eax in enumerate(program.strata[earlier]):
                    if eax.head_pred == axiom.head_pred:
                        continue  # reported under (a)
                    for path, atom, pol in iter_atoms(eax.body):
                        if atom.pred == axiom.head_pred:
                            violations.append(
                                Violation(
                                    "b",
                                    earlier,
                                    ei,
                                    OccurrenceRef(earlier, ei, path, pol),
                                    f"predicate {axiom.head_pred} is affected by stratum "
                                    f"{si + 1} but occurs in stratum {earlier + 1}",
                                )
                            )
            for path, atom, pol in iter_atoms(axiom.body):
                pred = program.signature[atom.pred]
                if pred.kind != "derived":
                    continue
                for di in affecting.get(atom.pred, ()):
                    ref = OccurrenceRef(si, ai, path, pol)
                    if pol == POSITIVE and di > si:
                        violations.append(
                            Violation(
                                "c",
                                si,
                                ai,
                                ref,
                                f"{atom.pred} occurs positively in stratum {si + 1} "
                                f"but is affected only in stratum {di + 1}",
                            )
                        )
                    if pol == NEGATIVE and di >= si:
                        violations.append(
                            Violation(
                                "d",
                                si,
                                ai,
                                ref,
                                f"{atom.pred} occurs negatively in stratum {si + 1} "
                                f"but is affected in stratum {di + 1}, not strictly earlier",
                            )
                        )
    return violations


def negative_occurrences(
    program: AxiomProgram, pred_names: Iterable[str]
) -> list[OccurrenceRef]:
    """All negative body occurrences of the named predicates, ordered by
    stratum, axiom, and preorder position."""
    wanted = set(pred_names)
    out: list[OccurrenceRef] = []
    for si, stratum in enumerate(program.strata):
        for ai, axiom in enumerate(stratum):
            for path, atom, pol in iter_atoms(axiom.body):
                if pol == NEGATIVE and atom.pred in wanted:
                    out.append(OccurrenceRef(si, ai, path, pol))
    return out
