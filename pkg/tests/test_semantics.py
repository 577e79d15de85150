import random

import pytest

from rtlcheck.corpus import obs
from rtlcheck.kleene import FALSE, TRUE
from rtlcheck.semantics import (
    FuelExhausted, FunEnv, NonConsOutput, StuckError,
    atom_truth, deep_eval, eval_whnf, run_trace, step,
)
from rtlcheck.terms import (
    Alt, App, Case, Con, Fun, Lam, Let, PCon, Var, WILD,
)

EVENTS = ("Request1", "Request2", "Take1", "Take2", "Release1", "Release2")


def test_step_beta():
    red = step(App(Lam("x", Var("x")), Con("A")), FunEnv.empty())
    assert red.kind == "beta"
    assert red.term == Con("A")


def test_step_let_is_beta():
    red = step(Let("x", Con("A"), Var("x")), FunEnv.empty())
    assert red.kind == "beta"
    assert red.term == Con("A")


def test_step_case_elimination():
    t = Case(Con("Cons", (Con("A"), Con("Nil"))),
             (Alt(PCon("Cons", ("h", "t")), Var("h")),))
    red = step(t, FunEnv.empty())
    assert red.kind == "conelim"
    assert red.term == Con("A")


def test_step_unfold_example1(corpus_by_name):
    _, source, _ = corpus_by_name["example1"]
    program = source.term
    env = FunEnv.empty().extend(program.defs)
    red = step(Fun("f1"), env)
    assert red.kind == "unfold" and red.name == "f1"
    assert isinstance(red.term, Lam)
    assert red.term == dict(program.defs)["f1"]


def test_step_is_deterministic_and_progresses(corpus_by_name):
    # walk a corpus evaluation; every configuration is a value or steps one way
    _, source, _ = corpus_by_name["example1"]
    t = source.term
    from rtlcheck.terms import substitute, free_vars
    t = substitute(t, {"es": Con("Cons", (Con("Take1"), Con("Nil")))})
    env = FunEnv.empty()
    for _ in range(50):
        red = step(t, env)
        again = step(t, env)
        assert (red is None) == (again is None)
        if red is None:
            break
        assert red.term == again.term and red.kind == again.kind
        t, env = red.term, red.env


def test_step_preserves_closedness_and_wellformedness(corpus_by_name):
    from rtlcheck.terms import check_term, free_vars, substitute
    _, source, _ = corpus_by_name["example1"]
    arities = source.arities()
    events = Con("Cons", (Con("Request1"),
                          Con("Cons", (Con("Take2"), Con("Nil")))))
    t = substitute(source.term, {"es": events})
    env = FunEnv.empty()
    steps, cells = 0, 0
    while cells < 3:  # initial state plus one cell per event
        assert free_vars(t) == frozenset()
        assert check_term(t, arities) == []
        red = step(t, env)
        if red is None:
            assert isinstance(t, Con) and t.con == "Cons"
            cells += 1
            t = t.args[1]  # keep walking down the stream
            continue
        steps += 1
        t, env = red.term, red.env
    # where-open plus unfold/beta/two eliminations per consumed event
    assert steps == 9


def test_values_do_not_step():
    assert step(Con("A"), FunEnv.empty()) is None
    assert step(Lam("x", Var("x")), FunEnv.empty()) is None
    assert eval_whnf(Con("A"), fuel=0) == Con("A")


def test_stuck_configurations():
    with pytest.raises(StuckError):
        step(Var("x"), FunEnv.empty())
    with pytest.raises(StuckError):
        step(Case(Lam("x", Var("x")), (Alt(WILD, Con("A")),)), FunEnv.empty())
    with pytest.raises(StuckError):
        eval_whnf(Fun("nowhere"))


def test_fuel_exhaustion_on_divergence():
    env = FunEnv.empty().extend([("loop", Fun("loop"))])
    with pytest.raises(FuelExhausted):
        eval_whnf(Fun("loop"), env, fuel=100)


def _mutex_atom(corpus_by_name):
    _, _, props = corpus_by_name["example1"]
    return props.get("mutex").sub.term


def test_atom_truth_false_at_contested_state(corpus_by_name):
    assert atom_truth(_mutex_atom(corpus_by_name), obs("U", "U")) is FALSE


def test_atom_truth_true_via_wildcard(corpus_by_name):
    assert atom_truth(_mutex_atom(corpus_by_name), obs("T", "T")) is TRUE


def test_run_trace_cycled_example1(corpus_by_name):
    # hand-walk of the first handler chain, cross-checked by the lts walker
    _, source, _ = corpus_by_name["example1"]
    trace = run_trace(source.term, ["Request1", "Take1", "Release1"],
                      cycle=True, max_states=4)
    assert trace == [obs("T", "T"), obs("W", "T"), obs("U", "T"), obs("T", "T")]


def test_run_trace_wildcard_branch(corpus_by_name):
    _, source, _ = corpus_by_name["example1"]
    trace = run_trace(source.term, ["Take1"], max_states=2)
    assert trace == [obs("T", "T"), obs("T", "T")]


def test_run_trace_initial_state_only(corpus):
    for _, source, _ in corpus:
        assert run_trace(source.term, [], max_states=1) == [obs("T", "T")]


def test_run_trace_one_state_per_event(corpus):
    rng = random.Random(7)
    for _, source, _ in corpus:
        for _ in range(10):
            k = rng.randint(0, 6)
            events = [rng.choice(EVENTS) for _ in range(k)]
            trace = run_trace(source.term, events, max_states=99)
            assert len(trace) == k + 1


def test_run_trace_rejects_non_stream():
    bad = Con("ObsState", (Var("es"), Var("es")))
    with pytest.raises(NonConsOutput):
        run_trace(bad, ["x"], max_states=2)


def test_run_trace_refuses_empty_cycle(corpus_by_name):
    _, source, _ = corpus_by_name["example1"]
    with pytest.raises(ValueError):
        run_trace(source.term, [], cycle=True, max_states=2)


def test_deep_eval_normalizes_under_constructors():
    t = Con("Pair2", (App(Lam("x", Var("x")), Con("A")), Con("B")))
    assert deep_eval(t) == Con("Pair2", (Con("A"), Con("B")))
