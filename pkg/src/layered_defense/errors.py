"""Exception types.

Everything a caller can trigger with bad input derives from ``InputError``;
the CLI maps those to exit code 1 and anything else to exit code 2.
"""


class LayeredDefenseError(Exception):
    pass


class InputError(LayeredDefenseError, ValueError):
    pass


# curves
class EmptyLines(InputError):
    pass


class InvalidCurve(InputError):
    pass


class NotConcaveRepresentable(InvalidCurve):
    pass


class NegativeAtZero(InvalidCurve):
    pass


class OutOfDomain(InputError):
    pass


# objective
class InfeasibleAllocation(InputError):
    pass


class MissingSensorEntry(InputError):
    pass


class AtBreakpoint(InputError):
    pass


# meshes and tables
class NonDivisibleBudget(InputError):
    pass


class NonpositiveStep(InputError):
    pass


class DomainExceeded(InputError):
    pass


class MeshMismatch(InputError):
    pass


class BranchMismatch(InputError):
    pass


# oracle
class EnumerationTooLarge(InputError):
    pass


# scenario files
class ScenarioSyntaxError(InputError):
    def __init__(self, message, line=None, field=None):
        self.line = line
        self.field = field
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field!r}")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(prefix + message)


class UnknownField(ScenarioSyntaxError):
    def __init__(self, name, line=None):
        super().__init__(f"unknown field {name!r}", line=line, field=name)


class SemanticError(InputError):
    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(str(v) for v in self.violations))


class SinkFailure(LayeredDefenseError):
    pass
