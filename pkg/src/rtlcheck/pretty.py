"""Concrete-syntax rendering of terms and formulas.

Output always reparses to an alpha-equivalent tree; nested constructs are
parenthesized whenever they sit in argument position or inside a case
alternative that is not the last one.
"""

from __future__ import annotations

from .terms import (
    Always, And, App, Atom, Case, Con, Eventually, Formula, Fun, Implies,
    Lam, Let, Next, Not, Or, PCon, PWild, Term, Var, Where, spine,
)

# precedence contexts for terms
_TOP = 0     # body positions: may be any construct without parens
_OPERAND = 1  # argument positions: applications and binders need parens


def pretty_term(t: Term, prec: int = _TOP) -> str:
    match t:
        case Var(name) | Fun(name):
            return name
        case Con(con, ()):
            return con
        case Con(con, args):
            body = " ".join([con, *(pretty_term(a, _OPERAND) for a in args)])
            return f"({body})" if prec >= _OPERAND else body
        case App(_, _):
            head, args = spine(t)
            body = " ".join(pretty_term(x, _OPERAND) for x in (head, *args))
            return f"({body})" if prec >= _OPERAND else body
        case Lam(param, body):
            out = f"\\{param} -> {pretty_term(body)}"
            return f"({out})" if prec >= _OPERAND else out
        case Case(scrut, alts):
            rendered = []
            for i, alt in enumerate(alts):
                last = i == len(alts) - 1
                rendered.append(
                    f"{_pretty_pattern(alt.pattern)} -> "
                    f"{pretty_term(alt.body, _TOP if last else _OPERAND)}")
            out = f"case {pretty_term(scrut, _OPERAND)} of " + " | ".join(rendered)
            return f"({out})" if prec >= _OPERAND else out
        case Let(name, bound, body):
            out = f"let {name} = {pretty_term(bound)} in {pretty_term(body)}"
            return f"({out})" if prec >= _OPERAND else out
        case Where(body, defs):
            lines = [f"{pretty_term(body, _OPERAND)} where"]
            for fname, d in defs:
                lines.append(f"  {fname} = {pretty_term(d)}")
            out = "\n".join(lines)
            return f"({out})" if prec >= _OPERAND else out
    raise TypeError(f"not a term: {t!r}")


def _pretty_pattern(p) -> str:
    match p:
        case PWild():
            return "_"
        case PCon(con, ()):
            return con
        case PCon(con, names):
            return " ".join([con, *names])
    raise TypeError(f"not a pattern: {p!r}")


# formula precedence: => (1, right) < || (2) < && (3) < prefix operators (4)

def pretty_formula(f: Formula, prec: int = 0) -> str:
    match f:
        case Atom(term):
            return "{ " + pretty_term(term) + " }"
        case Not(sub):
            return "!" + pretty_formula(sub, 4)
        case Always(sub):
            return "G " + pretty_formula(sub, 4)
        case Eventually(sub):
            return "F " + pretty_formula(sub, 4)
        case Next(sub):
            return "X " + pretty_formula(sub, 4)
        case And(l, r):
            out = f"{pretty_formula(l, 3)} && {pretty_formula(r, 4)}"
            return f"({out})" if prec > 3 else out
        case Or(l, r):
            out = f"{pretty_formula(l, 2)} || {pretty_formula(r, 3)}"
            return f"({out})" if prec > 2 else out
        case Implies(l, r):
            out = f"{pretty_formula(l, 2)} => {pretty_formula(r, 1)}"
            return f"({out})" if prec > 1 else out
    raise TypeError(f"not a formula: {f!r}")
