"""Plain-text machine format, shared by world files and agent files.

Grammar (one machine per file; ``#`` starts a comment line, blank lines
are ignored)::

    states N start qI sigma <names...> omega <names...> [service <names...>] [cap K]
    q a -> q' b D

* States are implicitly named ``q0 .. qN-1``; ``start`` picks one.
* The first three sigma names are the final percepts, in the order
  victory, loss, draw.
* The blank letter is always written ``_`` and is not declared.
* Each following line is one transition: in state ``q`` reading letter
  ``a``, go to ``q'``, write ``b``, move ``D`` (``L`` or ``R``).
* World files may repeat a ``q a`` source (a nondeterminism group);
  agent files may not.  ``service`` and ``cap`` are agent-only.

Parsing errors carry 1-based line numbers.
"""

from __future__ import annotations

import hashlib

from .alphabet import AlphabetConfig
from .errors import MissingStart, ParseError
from .machines import (
    AgentMachine,
    Transition,
    WorldMachine,
    new_agent_machine,
    new_world_machine,
)

_DIRECTIONS = ("L", "R")


def _content_lines(text: str):
    for i, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        yield i, line


def _parse_header(line_no: int, line: str):
    tokens = line.split()
    fields = {}
    key = None
    order = []
    for tok in tokens:
        if tok in ("states", "start", "sigma", "omega", "service", "cap"):
            if tok in fields:
                raise ParseError(line_no, f"duplicate header section {tok!r}")
            key = tok
            fields[key] = []
            order.append(key)
        elif key is None:
            raise ParseError(line_no, f"header must begin with 'states', got {tok!r}")
        else:
            fields[key].append(tok)
    for required in ("states", "start", "sigma", "omega"):
        if required not in fields:
            raise ParseError(line_no, f"header is missing the {required!r} section")
    if len(fields["states"]) != 1 or not fields["states"][0].isdigit():
        raise ParseError(line_no, "'states' needs exactly one integer")
    if len(fields["start"]) != 1:
        raise ParseError(line_no, "'start' needs exactly one state name")
    n_states = int(fields["states"][0])
    if n_states < 1:
        raise ParseError(line_no, "a machine needs at least one state")
    if len(fields["sigma"]) < 5:
        raise ParseError(line_no, "sigma needs at least 5 letters (3 finals + 2 percepts)")
    cap = None
    if "cap" in fields:
        if len(fields["cap"]) != 1 or not fields["cap"][0].isdigit():
            raise ParseError(line_no, "'cap' needs exactly one integer")
        cap = int(fields["cap"][0])
    sigma = fields["sigma"]
    try:
        alphabet = AlphabetConfig(("victory", "loss", "draw") + tuple(sigma[3:]),
                                  tuple(fields["omega"]))
    except Exception as exc:
        raise ParseError(line_no, str(exc)) from None
    if tuple(sigma[:3]) != ("victory", "loss", "draw"):
        raise ParseError(line_no, "the first three sigma letters must be "
                                  "'victory loss draw'")
    service = tuple(fields.get("service", ()))
    start = _state_index(line_no, fields["start"][0], n_states, strict=False)
    return n_states, start, alphabet, service, cap


def _state_index(line_no: int, token: str, n_states: int, strict: bool = True) -> int:
    if not (token.startswith("q") and token[1:].isdigit()):
        raise ParseError(line_no, f"state names look like q0..q{n_states - 1}, "
                                  f"got {token!r}")
    idx = int(token[1:])
    if idx >= n_states:
        if strict:
            raise ParseError(line_no, f"state {token} not among {n_states} states")
        raise MissingStart(f"start state {token} not among {n_states} states")
    return idx


def _letter_index(line_no: int, token: str, alphabet: AlphabetConfig,
                  service: tuple[str, ...]) -> int:
    names = alphabet.sigma_names + alphabet.omega_names + (alphabet.blank_name,) + service
    try:
        return names.index(token)
    except ValueError:
        raise ParseError(line_no, f"unknown letter {token!r}") from None


def _parse_rule(line_no: int, line: str, n_states: int, alphabet, service):
    parts = line.split()
    if len(parts) != 6 or parts[2] != "->":
        raise ParseError(line_no, "transitions look like 'q a -> q' b D'")
    state = _state_index(line_no, parts[0], n_states)
    letter = _letter_index(line_no, parts[1], alphabet, service)
    nxt = _state_index(line_no, parts[3], n_states)
    write = _letter_index(line_no, parts[4], alphabet, service)
    if parts[5] not in _DIRECTIONS:
        raise ParseError(line_no, f"direction must be L or R, got {parts[5]!r}")
    return (state, letter), Transition(nxt, write, parts[5])


def _parse_machine(text: str, allow_groups: bool, allow_service: bool):
    header = None
    rules = []
    for line_no, line in _content_lines(text):
        if header is None:
            header = _parse_header(line_no, line)
            if not allow_service and (header[3] or header[4] is not None):
                raise ParseError(line_no, "'service' and 'cap' apply to agent files only")
            continue
        n_states, _, alphabet, service, _ = header
        key, tr = _parse_rule(line_no, line, n_states, alphabet, service)
        if not allow_groups:
            if any(k == key for k, _ in rules):
                raise ParseError(line_no, "agent tables allow one rule per "
                                          "(state, letter)")
        rules.append((key, tr))
    if header is None:
        raise ParseError(1, "empty machine file")
    return header, rules


def parse_world_text(text: str) -> WorldMachine:
    (n_states, start, alphabet, _, _), rules = _parse_machine(
        text, allow_groups=True, allow_service=False)
    rows: dict[tuple, list] = {}
    for key, tr in rules:
        rows.setdefault(key, []).append(tr)
    return new_world_machine(n_states, start, rows, alphabet)


def parse_agent_text(text: str) -> AgentMachine:
    (n_states, start, alphabet, service, cap), rules = _parse_machine(
        text, allow_groups=False, allow_service=True)
    table = dict(rules)
    if cap is None:
        return new_agent_machine(n_states, start, table, alphabet, service)
    return new_agent_machine(n_states, start, table, alphabet, service, cap)


def _header_text(n_states, start, alphabet, service=(), cap=None) -> str:
    parts = [f"states {n_states}", f"start q{start}",
             "sigma " + " ".join(alphabet.sigma_names),
             "omega " + " ".join(alphabet.omega_names)]
    if service:
        parts.append("service " + " ".join(service))
    if cap is not None:
        parts.append(f"cap {cap}")
    return " ".join(parts)


def world_to_text(machine: WorldMachine) -> str:
    """Canonical serialization: header, then rows in (state, letter) order."""
    ab = machine.alphabet
    lines = [_header_text(machine.n_states, machine.start, ab)]
    for (state, letter) in sorted(machine.rows):
        for tr in machine.rows[(state, letter)]:
            lines.append(f"q{state} {ab.name(letter)} -> "
                         f"q{tr.next_state} {ab.name(tr.write)} {tr.move}")
    return "\n".join(lines) + "\n"


def agent_to_text(machine: AgentMachine) -> str:
    lines = [_header_text(machine.n_states, machine.start, machine.alphabet,
                          machine.service_names, machine.small_step_cap)]
    for (state, letter) in sorted(machine.table):
        tr = machine.table[(state, letter)]
        lines.append(f"q{state} {machine.letter_name(letter)} -> "
                     f"q{tr.next_state} {machine.letter_name(tr.write)} {tr.move}")
    return "\n".join(lines) + "\n"


def world_hash(machine: WorldMachine) -> str:
    """Content identity of a world machine: sha256 of its canonical text."""
    return hashlib.sha256(world_to_text(machine).encode()).hexdigest()
