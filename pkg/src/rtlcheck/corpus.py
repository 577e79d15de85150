"""Bundled example systems with their expected verdicts and traces.

The three programs model two processes sharing a critical resource; the
property file defines mutual exclusion plus one non-starvation property per
process. Expected verdicts and the two counterexample traces are the golden
values the test suite reproduces exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from typing import Mapping

from .kleene import FALSE, TRUE, Trace, TruthVal
from .parser import PropertyFile, SourceFile, parse_program, parse_properties
from .terms import Con, Term


class CorpusError(Exception):
    pass


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    program_file: str
    property_file: str
    expected_verdicts: Mapping[str, TruthVal]
    expected_traces: Mapping[str, Trace]


def obs(p1: str, p2: str) -> Term:
    """Shorthand for an observable state of the two-process systems."""
    return Con("ObsState", (Con(p1), Con(p2)))


def _trace(*pairs: tuple[str, str]) -> Trace:
    return tuple(obs(a, b) for a, b in pairs)


ENTRIES: tuple[CorpusEntry, ...] = (
    CorpusEntry(
        name="example1",
        program_file="example1.rsl",
        property_file="mutex.ltl",
        expected_verdicts={"mutex": FALSE, "nonstarve1": TRUE,
                           "nonstarve2": TRUE},
        expected_traces={
            "mutex": _trace(("T", "T"), ("W", "T"), ("W", "W"),
                            ("U", "W"), ("U", "U")),
        },
    ),
    CorpusEntry(
        name="example2",
        program_file="example2.rsl",
        property_file="mutex.ltl",
        expected_verdicts={"mutex": TRUE, "nonstarve1": FALSE,
                           "nonstarve2": FALSE},
        expected_traces={
            "nonstarve1": _trace(("T", "T"), ("W", "T"), ("W", "W"),
                                 ("W", "W")),
        },
    ),
    CorpusEntry(
        name="example3",
        program_file="example3.rsl",
        property_file="mutex.ltl",
        expected_verdicts={"mutex": TRUE, "nonstarve1": TRUE,
                           "nonstarve2": TRUE},
        expected_traces={},
    ),
)


def load_corpus() -> list[CorpusEntry]:
    """The bundled entries, after checking the data files are present."""
    for entry in ENTRIES:
        for fname in (entry.program_file, entry.property_file):
            if not resources.files(__package__).joinpath("corpus", fname).is_file():
                raise CorpusError(f"missing corpus file {fname}")
    return list(ENTRIES)


def read_text(fname: str) -> str:
    return resources.files(__package__).joinpath("corpus", fname).read_text()


def load_program(entry: CorpusEntry) -> SourceFile:
    source = parse_program(read_text(entry.program_file))
    if source.term is None:
        raise CorpusError(f"{entry.program_file} failed to parse: "
                          f"{source.diagnostics[0]}")
    return source


def load_properties(entry: CorpusEntry) -> PropertyFile:
    source = load_program(entry)
    props = parse_properties(read_text(entry.property_file), source.arities())
    if props.diagnostics:
        raise CorpusError(f"{entry.property_file} failed to parse: "
                          f"{props.diagnostics[0]}")
    return props
