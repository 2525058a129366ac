"""Exception hierarchy. Every library error is a ``ValueError``."""


class MetricExtError(ValueError):
    pass


class NotCharacteristic(MetricExtError):
    """The value set has no nonzero members below some positive threshold."""


class NotUnbounded(MetricExtError):
    pass


class MembershipError(MetricExtError):
    """A value lies outside the value set it was claimed to belong to."""


class MissingWitness(MetricExtError):
    pass


class EmptySubset(MetricExtError):
    pass


class FiniteSubset(MetricExtError):
    pass


class NoProperTarget(MetricExtError):
    pass


class RosterMismatch(MetricExtError):
    pass


class AxiomError(MetricExtError):
    """An input table fails the axioms required by an operation."""


class ScanLimitError(MetricExtError):
    """A witness-driven scan ran past the safety cap; the witness is bogus."""


class SchemaError(MetricExtError):
    def __init__(self, field, message):
        self.field = field
        super().__init__(f"{field}: {message}")
