"""Syntax trees for the object language and for temporal formulas.

Terms are immutable; every operation here is a pure function over them.
Variables bound by lambdas, lets and case patterns are distinct from
function names bound by ``where`` blocks: the former are ``Var`` nodes,
the latter ``Fun`` nodes, so substitution never touches function names.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping


# --- patterns ---------------------------------------------------------------

@dataclass(frozen=True)
class PCon:
    """Flat constructor pattern: a constructor name plus distinct variables."""

    con: str
    vars: tuple[str, ...] = ()


@dataclass(frozen=True)
class PWild:
    """Wildcard pattern, matching anything."""


Pattern = PCon | PWild
WILD = PWild()


# --- terms ------------------------------------------------------------------

class Term:
    """Base class for object-language expressions."""

    __slots__ = ()


@dataclass(frozen=True)
class Var(Term):
    name: str


@dataclass(frozen=True)
class Con(Term):
    """Saturated constructor application."""

    con: str
    args: tuple[Term, ...] = ()


@dataclass(frozen=True)
class Lam(Term):
    param: str
    body: Term


@dataclass(frozen=True)
class Fun(Term):
    """Reference to a function bound by an enclosing ``where``."""

    name: str


@dataclass(frozen=True)
class App(Term):
    fn: Term
    arg: Term


@dataclass(frozen=True)
class Alt:
    pattern: Pattern
    body: Term


@dataclass(frozen=True)
class Case(Term):
    scrutinee: Term
    alts: tuple[Alt, ...]


@dataclass(frozen=True)
class Let(Term):
    name: str
    bound: Term
    body: Term


@dataclass(frozen=True)
class Where(Term):
    body: Term
    defs: tuple[tuple[str, Term], ...]


def app(fn: Term, *args: Term) -> Term:
    """Left-associated application of ``fn`` to ``args``."""
    out = fn
    for a in args:
        out = App(out, a)
    return out


def spine(t: Term) -> tuple[Term, tuple[Term, ...]]:
    """Unwind left-nested applications into (head, args)."""
    args: list[Term] = []
    while isinstance(t, App):
        args.append(t.arg)
        t = t.fn
    return t, tuple(reversed(args))


# --- data declarations ------------------------------------------------------

@dataclass(frozen=True)
class DataDecl:
    """An algebraic datatype: a type name and its constructors with arities."""

    name: str
    constructors: tuple[tuple[str, int], ...]


# List and TruthVal are built in; True/False/Undefined and Nil/Cons are
# reserved and may only be redeclared verbatim.
BUILTIN_DECLS: tuple[DataDecl, ...] = (
    DataDecl("List", (("Nil", 0), ("Cons", 2))),
    DataDecl("TruthVal", (("True", 0), ("False", 0), ("Undefined", 0))),
)


def arity_table(decls: Iterable[DataDecl] = ()) -> dict[str, int]:
    """Constructor-name to arity map for the builtins plus ``decls``."""
    table: dict[str, int] = {}
    for decl in (*BUILTIN_DECLS, *decls):
        for con, arity in decl.constructors:
            table[con] = arity
    return table


# --- formulas ---------------------------------------------------------------

class Formula:
    """Base class for temporal formulas over observable states."""

    __slots__ = ()


@dataclass(frozen=True)
class Atom(Formula):
    """State predicate: a term whose only free variable is ``s``."""

    term: Term


@dataclass(frozen=True)
class Not(Formula):
    sub: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Always(Formula):
    sub: Formula


@dataclass(frozen=True)
class Eventually(Formula):
    sub: Formula


@dataclass(frozen=True)
class Next(Formula):
    sub: Formula


STATE_VAR = "s"


# --- free variables ---------------------------------------------------------

def free_vars(t: Term) -> frozenset[str]:
    """Variables of ``t`` not bound by a lambda, let or case pattern.

    Memoized on the node: terms are immutable and shared heavily during
    reduction, so the set is computed once per subterm.
    """
    cached = getattr(t, "_fv", None)
    if cached is None:
        cached = _free_vars(t)
        object.__setattr__(t, "_fv", cached)
    return cached


def _free_vars(t: Term) -> frozenset[str]:
    match t:
        case Var(name):
            return frozenset((name,))
        case Con(_, args):
            out: frozenset[str] = frozenset()
            for a in args:
                out |= free_vars(a)
            return out
        case Lam(param, body):
            return free_vars(body) - {param}
        case Fun(_):
            return frozenset()
        case App(fn, arg):
            return free_vars(fn) | free_vars(arg)
        case Case(scrutinee, alts):
            out = free_vars(scrutinee)
            for alt in alts:
                bound = set(alt.pattern.vars) if isinstance(alt.pattern, PCon) else set()
                out |= free_vars(alt.body) - bound
            return out
        case Let(name, bound, body):
            return free_vars(bound) | (free_vars(body) - {name})
        case Where(body, defs):
            out = free_vars(body)
            for _, d in defs:
                out |= free_vars(d)
            return out
    raise TypeError(f"not a term: {t!r}")


def fun_names(t: Term) -> frozenset[str]:
    """Function names referenced in ``t`` and not bound by an inner where."""
    match t:
        case Fun(name):
            return frozenset((name,))
        case Var(_):
            return frozenset()
        case Con(_, args):
            out: frozenset[str] = frozenset()
            for a in args:
                out |= fun_names(a)
            return out
        case Lam(_, body):
            return fun_names(body)
        case App(fn, arg):
            return fun_names(fn) | fun_names(arg)
        case Case(scrutinee, alts):
            out = fun_names(scrutinee)
            for alt in alts:
                out |= fun_names(alt.body)
            return out
        case Let(_, bound, body):
            return fun_names(bound) | fun_names(body)
        case Where(body, defs):
            names = {f for f, _ in defs}
            out = fun_names(body)
            for _, d in defs:
                out |= fun_names(d)
            return out - names
    raise TypeError(f"not a term: {t!r}")


# --- substitution -----------------------------------------------------------

def fresh_name(base: str, avoid: set[str]) -> str:
    """Smallest numeric suffix on ``base`` that avoids every name in scope."""
    k = 1
    while f"{base}{k}" in avoid:
        k += 1
    return f"{base}{k}"


def substitute(t: Term, bindings: Mapping[str, Term]) -> Term:
    """Capture-avoiding simultaneous substitution of variables in ``t``.

    Bound variables are renamed (smallest fresh numeric suffix) exactly when
    a binding would otherwise capture a free variable of a substituted term.
    """
    sub = {x: e for x, e in bindings.items()}
    return _subst(t, sub)


def _subst(t: Term, sub: dict[str, Term]) -> Term:
    # hot path during reduction: dispatch on type, skip untouched subtrees
    if not sub or not (free_vars(t) & sub.keys()):
        return t
    tt = type(t)
    if tt is Var:
        return sub.get(t.name, t)
    if tt is Con:
        return Con(t.con, tuple(_subst(a, sub) for a in t.args))
    if tt is App:
        return App(_subst(t.fn, sub), _subst(t.arg, sub))
    if tt is Case:
        new_alts = []
        for alt in t.alts:
            if isinstance(alt.pattern, PCon) and alt.pattern.vars:
                pvars, body = _under_binders(alt.pattern.vars, alt.body, sub)
                new_alts.append(Alt(PCon(alt.pattern.con, pvars), body))
            else:
                new_alts.append(Alt(alt.pattern, _subst(alt.body, sub)))
        return Case(_subst(t.scrutinee, sub), tuple(new_alts))
    if tt is Lam:
        (param,), body = _under_binders((t.param,), t.body, sub)
        return Lam(param, body)
    if tt is Let:
        new_bound = _subst(t.bound, sub)
        (name,), body = _under_binders((t.name,), t.body, sub)
        return Let(name, new_bound, body)
    if tt is Where:
        return Where(_subst(t.body, sub),
                     tuple((f, _subst(d, sub)) for f, d in t.defs))
    if tt is Fun:
        return t
    raise TypeError(f"not a term: {t!r}")


def _under_binders(binders: tuple[str, ...], body: Term,
                   sub: dict[str, Term]) -> tuple[tuple[str, ...], Term]:
    body_fv = free_vars(body)
    live = {x: e for x, e in sub.items() if x not in binders and x in body_fv}
    if not live:
        return binders, body
    incoming = set()
    for e in live.values():
        incoming |= free_vars(e)
    renames: dict[str, Term] = {}
    new_binders = []
    # one growing avoid set keeps sibling binders from colliding
    avoid = set(body_fv) | incoming | set(binders) | set(live)
    for b in binders:
        if b in incoming:
            nb = fresh_name(b, avoid)
            avoid.add(nb)
            renames[b] = Var(nb)
            new_binders.append(nb)
        else:
            new_binders.append(b)
    if renames:
        body = _subst(body, renames)
    return tuple(new_binders), _subst(body, live)


# --- alpha equivalence ------------------------------------------------------

def alpha_equal(a: Term, b: Term) -> bool:
    """Structural equality up to renaming of bound variables."""
    return _alpha(a, b, {}, {})


def _alpha(a: Term, b: Term, la: dict[str, int], lb: dict[str, int]) -> bool:
    match a, b:
        case Var(x), Var(y):
            if x in la or y in lb:
                return la.get(x) == lb.get(y)
            return x == y
        case Con(ca, aa), Con(cb, ab):
            return ca == cb and len(aa) == len(ab) and all(
                _alpha(p, q, la, lb) for p, q in zip(aa, ab))
        case Fun(fa), Fun(fb):
            return fa == fb
        case Lam(xa, ba), Lam(xb, bb):
            lvl = len(la)
            return _alpha(ba, bb, {**la, xa: lvl}, {**lb, xb: lvl})
        case App(fa, xa), App(fb, xb):
            return _alpha(fa, fb, la, lb) and _alpha(xa, xb, la, lb)
        case Case(sa, alts_a), Case(sb, alts_b):
            if len(alts_a) != len(alts_b) or not _alpha(sa, sb, la, lb):
                return False
            for pa, pb in zip(alts_a, alts_b):
                if isinstance(pa.pattern, PWild) != isinstance(pb.pattern, PWild):
                    return False
                if isinstance(pa.pattern, PCon):
                    assert isinstance(pb.pattern, PCon)
                    if pa.pattern.con != pb.pattern.con:
                        return False
                    if len(pa.pattern.vars) != len(pb.pattern.vars):
                        return False
                    lvl = len(la)
                    ea = {**la, **{v: lvl + i for i, v in enumerate(pa.pattern.vars)}}
                    eb = {**lb, **{v: lvl + i for i, v in enumerate(pb.pattern.vars)}}
                    if not _alpha(pa.body, pb.body, ea, eb):
                        return False
                elif not _alpha(pa.body, pb.body, la, lb):
                    return False
            return True
        case Let(xa, ba, ca), Let(xb, bb, cb):
            if not _alpha(ba, bb, la, lb):
                return False
            lvl = len(la)
            return _alpha(ca, cb, {**la, xa: lvl}, {**lb, xb: lvl})
        case Where(ba, da), Where(bb, db):
            if len(da) != len(db):
                return False
            if any(fa != fb for (fa, _), (fb, _) in zip(da, db)):
                return False
            return _alpha(ba, bb, la, lb) and all(
                _alpha(ta, tb, la, lb) for (_, ta), (_, tb) in zip(da, db))
    return False


# --- well-formedness --------------------------------------------------------

def check_term(t: Term, arities: Mapping[str, int]) -> list[str]:
    """Problems with ``t`` against the term invariants, empty when well formed.

    Checks constructor arities against the declaration table and the case
    alternative rules: at least one alternative, at most one wildcard and
    only in last position, no constructor in two patterns of one case, no
    repeated variable inside one pattern.
    """
    problems: list[str] = []
    _check(t, arities, problems)
    return problems


def _check(t: Term, arities: Mapping[str, int], out: list[str]) -> None:
    match t:
        case Var(_) | Fun(_):
            pass
        case Con(con, args):
            if con not in arities:
                out.append(f"unknown constructor {con}")
            elif arities[con] != len(args):
                out.append(f"constructor arity: {con} expects {arities[con]} "
                           f"arguments, got {len(args)}")
            for a in args:
                _check(a, arities, out)
        case Lam(_, body):
            _check(body, arities, out)
        case App(fn, arg):
            _check(fn, arities, out)
            _check(arg, arities, out)
        case Case(scrutinee, alts):
            _check(scrutinee, arities, out)
            if not alts:
                out.append("case with no alternatives")
            seen: set[str] = set()
            for i, alt in enumerate(alts):
                if isinstance(alt.pattern, PWild):
                    if i != len(alts) - 1:
                        out.append("wildcard pattern must be the last alternative")
                else:
                    con, pvars = alt.pattern.con, alt.pattern.vars
                    if con in seen:
                        out.append(f"constructor {con} appears in two patterns "
                                   "of the same case")
                    seen.add(con)
                    if len(set(pvars)) != len(pvars):
                        out.append(f"repeated pattern variable in {con} pattern")
                    if con in arities and arities[con] != len(pvars):
                        out.append(f"pattern arity: {con} expects {arities[con]} "
                                   f"variables, got {len(pvars)}")
                    elif con not in arities:
                        out.append(f"unknown constructor {con} in pattern")
                _check(alt.body, arities, out)
        case Let(_, bound, body):
            _check(bound, arities, out)
            _check(body, arities, out)
        case Where(body, defs):
            _check(body, arities, out)
            for _, d in defs:
                _check(d, arities, out)
        case _:
            out.append(f"not a term: {t!r}")


def check_formula(f: Formula) -> list[str]:
    """Problems with formula ``f``: every atom may close over ``s`` only."""
    problems: list[str] = []
    for atom in atoms(f):
        extra = free_vars(atom.term) - {STATE_VAR}
        for name in sorted(extra):
            problems.append(f"free variable {name} in atom")
    return problems


def atoms(f: Formula) -> list[Atom]:
    match f:
        case Atom(_):
            return [f]
        case Not(sub) | Always(sub) | Eventually(sub) | Next(sub):
            return atoms(sub)
        case And(l, r) | Or(l, r) | Implies(l, r):
            return atoms(l) + atoms(r)
    raise TypeError(f"not a formula: {f!r}")
