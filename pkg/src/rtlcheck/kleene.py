"""Three-valued truth values, their connectives, and the verdict algebra.

A verdict pairs a truth value with the trace of observable states that
evidences it. When a connective combines two verdicts, the result keeps the
trace of the single operand that produced the result truth; when both
operands carry it, the choice depends on what the evidence must cover:

* an annihilator result (``and`` giving False, ``or`` giving True) is fully
  explained by one operand, so the shortest trace wins;
* an identity result (``and`` giving True, ``or`` giving False) needed both
  operands, and since one trace extends the other along a rule-application
  path, the longest subsumes it;
* Undefined carries no semantic claim, so the shortest trace wins.

Ties go to the left operand. This selection is pinned byte-exactly by the
golden counterexample traces in the test suite.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable, Iterable, Optional

from .terms import Term

Trace = tuple[Term, ...]


class TruthVal(enum.Enum):
    TRUE = "True"
    FALSE = "False"
    UNDEFINED = "Undefined"

    def __str__(self) -> str:
        return self.value


TRUE = TruthVal.TRUE
FALSE = TruthVal.FALSE
UNDEFINED = TruthVal.UNDEFINED

_BY_NAME = {v.value: v for v in TruthVal}


def truthval_from_name(name: str) -> Optional[TruthVal]:
    return _BY_NAME.get(name)


# --- strong Kleene connectives ------------------------------------------------

def not3(a: TruthVal) -> TruthVal:
    if a is TRUE:
        return FALSE
    if a is FALSE:
        return TRUE
    return UNDEFINED


def and3(a: TruthVal, b: TruthVal) -> TruthVal:
    if a is FALSE or b is FALSE:
        return FALSE
    if a is UNDEFINED or b is UNDEFINED:
        return UNDEFINED
    return TRUE


def or3(a: TruthVal, b: TruthVal) -> TruthVal:
    if a is TRUE or b is TRUE:
        return TRUE
    if a is UNDEFINED or b is UNDEFINED:
        return UNDEFINED
    return FALSE


def imp3(a: TruthVal, b: TruthVal) -> TruthVal:
    return or3(not3(a), b)


# --- verdicts -----------------------------------------------------------------

@dataclass(frozen=True)
class Verdict:
    truth: TruthVal
    trace: Trace


# Observer hook for instrumenting binary verdict combinations (tests only).
# Called as observer(op_name, left, right, result) when set.
TRACE_OBSERVER: Optional[Callable[[str, Verdict, Verdict, Verdict], None]] = None


def _pick_trace(op: str, b: TruthVal, v1: Verdict, v2: Verdict) -> Trace:
    matching = [v.trace for v in (v1, v2) if v.truth is b]
    if len(matching) == 1:
        return matching[0]
    prefer_long = (op == "and" and b is TRUE) or (op == "or" and b is FALSE)
    if prefer_long:
        return matching[1] if len(matching[1]) > len(matching[0]) else matching[0]
    return matching[1] if len(matching[1]) < len(matching[0]) else matching[0]


def _combine(op: str, f3, v1: Verdict, v2: Verdict) -> Verdict:
    b = f3(v1.truth, v2.truth)
    out = Verdict(b, _pick_trace(op, b, v1, v2))
    if TRACE_OBSERVER is not None:
        TRACE_OBSERVER(op, v1, v2, out)
    return out


def and_v(v1: Verdict, v2: Verdict) -> Verdict:
    return _combine("and", and3, v1, v2)


def or_v(v1: Verdict, v2: Verdict) -> Verdict:
    return _combine("or", or3, v1, v2)


def not_v(v: Verdict) -> Verdict:
    return Verdict(not3(v.truth), v.trace)


def imp_v(v1: Verdict, v2: Verdict) -> Verdict:
    return or_v(not_v(v1), v2)


def and_v_all(verdicts: Iterable[Verdict]) -> Verdict:
    """Left fold of ``and_v`` over at least one verdict."""
    out = None
    for v in verdicts:
        out = v if out is None else and_v(out, v)
    if out is None:
        raise ValueError("empty verdict conjunction")
    return out


def or_v_all(verdicts: Iterable[Verdict]) -> Verdict:
    """Left fold of ``or_v`` over at least one verdict."""
    out = None
    for v in verdicts:
        out = v if out is None else or_v(out, v)
    if out is None:
        raise ValueError("empty verdict disjunction")
    return out
