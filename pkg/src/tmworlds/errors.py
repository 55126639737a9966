"""Exception hierarchy shared by all tmworlds modules."""


class TmWorldsError(Exception):
    """Base class for all library errors."""


class MachineSpecError(TmWorldsError):
    """A machine description violates a structural invariant."""


class MissingStart(MachineSpecError):
    pass


class UnknownState(MachineSpecError):
    pass


class BadLetter(MachineSpecError):
    pass


class NotTotal(MachineSpecError):
    """Some (state, letter) pair of a world machine has no transition."""


class NonSigmaOutput(MachineSpecError):
    """An output transition of a world machine writes a non-percept letter."""


class IllegalNondeterminism(MachineSpecError):
    """Two transitions share (state, letter) but are not both output transitions."""


class DirectionOnlyDuplicate(MachineSpecError):
    """Two transitions differ only in head direction."""


class AgentFailure(TmWorldsError):
    """An agent machine failed to complete a big step."""


class AgentHalted(AgentFailure):
    """The agent's transition table is undefined at the current (state, letter)."""


class SmallStepCapExceeded(AgentFailure):
    """The agent ran past its small-step cap without completing a big step."""


class NonActionOutput(AgentFailure):
    """The agent emitted a letter outside the action alphabet."""


class EmptyLife(TmWorldsError):
    """Success is undefined for a life of zero games."""


class TreeTooLarge(TmWorldsError):
    """A game tree or strategy enumeration exceeded its node budget."""


class BranchExplosion(TmWorldsError):
    """More branches arose in one big step than the defensive bound allows."""


class StrategyMismatch(TmWorldsError):
    """A strategy does not embed into the tree it is applied to."""


class BudgetExceeded(TmWorldsError):
    """A stream produced more items than its configured cap."""


class ParseError(TmWorldsError):
    """A machine or transcript file failed to parse."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no
