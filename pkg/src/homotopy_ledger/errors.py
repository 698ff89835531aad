"""Exception types shared across the package."""


class LedgerError(Exception):
    """Base class for all package errors."""


class LocalityError(LedgerError):
    """Operands live at incompatible prime localities."""


class NotWellDefined(LedgerError):
    """A generator matrix does not respect the domain relations.

    Signals a transcription error in a derivation script.
    """


class EnumerationBound(LedgerError):
    """A brute-force enumeration was asked to exceed its configured bound."""


class AmbiguousExtension(LedgerError):
    """Witness filters left more than one candidate middle group."""

    def __init__(self, survivors):
        self.survivors = list(survivors)
        names = ", ".join(str(g) for g in self.survivors)
        super().__init__(f"ambiguous extension, survivors: {names}")


class ContradictoryWitnesses(LedgerError):
    """Witness filters eliminated every candidate middle group."""

    def __init__(self, filters):
        self.filters = list(filters)
        super().__init__(f"no candidate survives witnesses: {self.filters}")


class TableError(LedgerError):
    """Base class for table-store problems."""


class ParseError(TableError):
    """A data file failed to parse; carries position information."""

    def __init__(self, where, message):
        self.where = where
        super().__init__(f"{where}: {message}")


class ValidationError(TableError):
    """A loaded table entry violates a store invariant."""

    def __init__(self, key, message):
        self.key = key
        super().__init__(f"{key}: {message}")


class MissingEntry(TableError):
    """A (space, degree) key is absent; the transcription is incomplete."""

    def __init__(self, space, n):
        self.space = space
        self.n = n
        super().__init__(f"no table entry for ({space}, n={n})")


class ScriptError(LedgerError):
    """Base class for derivation-script problems."""


class DanglingReference(ScriptError):
    pass


class CyclicReference(ScriptError):
    pass


class StepFailure(ScriptError):
    """A derivation step failed; the report is still produced up to here."""

    def __init__(self, step_id, detail):
        self.step_id = step_id
        self.detail = detail
        super().__init__(f"step '{step_id}': {detail}")


class DescriptorError(LedgerError):
    """A group descriptor string failed to parse."""
