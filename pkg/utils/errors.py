"""Exception types shared by every simulator package."""


class BanditError(Exception):
    """Base class; `component` names the package that raised it."""

    component = "core"


class InvalidArmError(BanditError, ValueError):
    component = "env"


class InvalidStrategyError(BanditError, ValueError):
    component = "env"


class DegenerateEnvironmentError(BanditError, ValueError):
    component = "env"


class InvalidObservationError(BanditError, ValueError):
    component = "policy"


class NoFeasibleStrategyError(BanditError):
    component = "oracle"


class UnsupportedInstanceError(BanditError):
    component = "oracle"


class InstanceTooLargeError(BanditError):
    component = "oracle"


class InvalidGraphError(BanditError, ValueError):
    component = "oracle"


class SequencingError(BanditError, ValueError):
    component = "regret"


class BoundDomainError(BanditError, ValueError):
    component = "regret"


class ConfigError(BanditError, ValueError):
    """Invalid run configuration; `field` is the JSON path of the offending value."""

    component = "harness"

    def __init__(self, field, message):
        self.field = field
        super().__init__(f"{field}: {message}")


class SimulationError(BanditError):
    """A replication aborted; carries where it happened."""

    component = "harness"

    def __init__(self, replication, round_index, cause):
        self.replication = replication
        self.round = round_index
        self.cause = cause
        self.component = getattr(cause, "component", "harness")
        super().__init__(
            f"replication {replication}, round {round_index} [{self.component}]: {cause}"
        )
