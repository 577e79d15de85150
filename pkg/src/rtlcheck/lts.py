"""Labelled transition system extraction from reactive-shaped programs.

A reactive program is a where block whose body emits an initial state and
calls a first handler; every handler cases on the head of the event list
and then on the event, each branch emitting a state and calling the next
handler. Nodes are the handlers, labelled with the state every incoming
transition emits for them; edges carry event names, with "_" for the
wildcard branch and its residual event set kept alongside.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional, Sequence

from .terms import (
    Case, Con, Fun, Lam, PCon, PWild, Term, Var, Where, spine,
)


class LtsError(Exception):
    pass


class NotReactiveShape(LtsError):
    """Simplified form but not the event-handler idiom this module reads."""


class InconsistentNodeState(LtsError):
    """Two transitions into one handler emit different states."""


@dataclass(frozen=True)
class LtsNode:
    id: int
    fun: str
    state: Term


@dataclass(frozen=True)
class LtsEdge:
    src: int
    label: str  # event constructor, or "_" for the wildcard branch
    dst: int
    residual: Optional[tuple[str, ...]] = None  # events a wildcard stands for


@dataclass(frozen=True)
class Lts:
    initial: int
    nodes: tuple[LtsNode, ...]
    edges: tuple[LtsEdge, ...]

    def node_by_fun(self, fun: str) -> LtsNode:
        for node in self.nodes:
            if node.fun == fun:
                return node
        raise KeyError(fun)


def _dest_call(t: Term) -> tuple[Term, str]:
    """Split a branch body ``Cons state (f es)`` into (state, callee)."""
    match t:
        case Con("Cons", (state, tail)):
            head, args = spine(tail)
            if isinstance(head, Fun) and all(isinstance(a, Var) for a in args):
                return state, head.name
    raise NotReactiveShape(
        "branch body must emit one state and call the next handler")


def extract_lts(program: Term,
                event_names: Sequence[str] | None = None) -> Lts:
    """Read the transition system off a reactive-shaped program.

    ``event_names`` fixes the full event alphabet used for wildcard
    residuals; when omitted it is inferred from the patterns the program
    matches on.
    """
    match program:
        case Where(body, defs):
            pass
        case _:
            raise NotReactiveShape("program must be a where block")
    initial_state, initial_fun = _dest_call(body)

    order = {fname: i for i, (fname, _) in enumerate(defs)}
    if initial_fun not in order:
        raise NotReactiveShape(f"initial handler {initial_fun} is not defined")

    branches: dict[str, list[tuple[str | None, set[str], Term, str]]] = {}
    for fname, d in defs:
        branches[fname] = _handler_branches(fname, d)

    if event_names is None:
        inferred: set[str] = set()
        for alts in branches.values():
            for label, _, _, _ in alts:
                if label is not None:
                    inferred.add(label)
        alphabet = tuple(sorted(inferred))
    else:
        alphabet = tuple(event_names)

    states: dict[str, Term] = {initial_fun: initial_state}
    edges: list[LtsEdge] = []
    for fname, alts in branches.items():
        for label, preceding, state, target in alts:
            if target not in order:
                raise NotReactiveShape(f"handler {fname} calls undefined {target}")
            if target in states:
                if states[target] != state:
                    raise InconsistentNodeState(
                        f"transitions into {target} emit different states")
            else:
                states[target] = state
            if label is None:
                residual = tuple(e for e in alphabet if e not in preceding)
                edges.append(LtsEdge(order[fname], "_", order[target], residual))
            else:
                edges.append(LtsEdge(order[fname], label, order[target]))

    missing = [f for f in order if f not in states]
    if missing:
        raise NotReactiveShape(
            f"no transition ever enters handler {missing[0]}")
    nodes = tuple(LtsNode(order[f], f, states[f]) for f, _ in defs)
    return Lts(order[initial_fun], nodes, tuple(edges))


def _handler_branches(fname: str, d: Term):
    """Branches of one handler as (label or None, preceding, state, target)."""
    match d:
        case Lam(_, Case(Var(_), (outer_alt,))):
            pass
        case _:
            raise NotReactiveShape(
                f"handler {fname} must case on the head of its event list")
    match outer_alt.pattern:
        case PCon("Cons", (_, _)):
            pass
        case _:
            raise NotReactiveShape(
                f"handler {fname} must split its event list with a Cons pattern")
    match outer_alt.body:
        case Case(Var(_), alts):
            pass
        case _:
            raise NotReactiveShape(f"handler {fname} must case on the event")

    out = []
    preceding: set[str] = set()
    for alt in alts:
        state, target = _dest_call(alt.body)
        match alt.pattern:
            case PWild():
                out.append((None, set(preceding), state, target))
            case PCon(con, ()):
                out.append((con, set(preceding), state, target))
                preceding.add(con)
            case PCon(con, _):
                raise NotReactiveShape(
                    f"event pattern {con} in {fname} binds variables")
    return out


def walk(lts: Lts, events: Sequence[str]) -> list[Term]:
    """State sequence of driving the transition system with an event list."""
    by_id = {n.id: n for n in lts.nodes}
    here = lts.initial
    trace = [by_id[here].state]
    for event in events:
        wildcard = None
        target = None
        for edge in lts.edges:
            if edge.src != here:
                continue
            if edge.label == event:
                target = edge.dst
                break
            if edge.label == "_":
                wildcard = edge.dst
        if target is None:
            target = wildcard
        if target is None:
            raise LtsError(f"no transition from node {here} on {event}")
        here = target
        trace.append(by_id[here].state)
    return trace


def _state_label(state: Term) -> str:
    from .pretty import pretty_term
    match state:
        case Con(_, args) if args and all(
                isinstance(a, Con) and not a.args for a in args):
            return " ".join(f"s{i + 1}={a.con}" for i, a in enumerate(args))
    return pretty_term(state)


def to_dot(lts: Lts, include_self_loops: bool = False) -> str:
    """Graphviz digraph text; self-loops are omitted unless asked for."""
    lines = ["digraph lts {"]
    for node in sorted(lts.nodes, key=lambda n: n.id):
        label = f"{node.fun}\\n{_state_label(node.state)}"
        shape = "doublecircle" if node.id == lts.initial else "box"
        lines.append(f'  n{node.id} [shape={shape} label="{label}"];')
    for edge in lts.edges:
        if edge.src == edge.dst and not include_self_loops:
            continue
        lines.append(f'  n{edge.src} -> n{edge.dst} [label="{edge.label}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def state_to_json(state: Term):
    match state:
        case Con(con, args):
            return {"con": con, "args": [state_to_json(a) for a in args]}
        case Var(name):
            return {"var": name}
    from .pretty import pretty_term
    return {"term": pretty_term(state)}


def to_json(lts: Lts) -> str:
    """JSON document with the full edge data, self-loops included."""
    doc = {
        "initial": lts.initial,
        "nodes": [{"id": n.id, "fun": n.fun, "state": state_to_json(n.state)}
                  for n in lts.nodes],
        "edges": [
            {"from": e.src, "label": e.label, "to": e.dst,
             **({"residual": list(e.residual)} if e.residual is not None else {})}
            for e in lts.edges
        ],
    }
    return json.dumps(doc, indent=2) + "\n"
