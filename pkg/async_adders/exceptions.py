class CliError(Exception):
    """Base exception for CLI errors"""
    exit_code = 1


class UsageError(CliError):
    """Invalid parameters or flag combinations"""
    exit_code = 2


class ParseError(CliError):
    """A netlist, delay table or vector file could not be read"""
    exit_code = 3


class VerificationFailure(CliError):
    """A functional or property check did not hold"""
    exit_code = 4


class DeadlockError(CliError):
    """The handshake went quiescent without the expected ackout change"""
    exit_code = 5

    def __init__(self, message: str, blocking: list[str] | None = None):
        super().__init__(message)
        self.blocking = blocking or []


class SimulationError(CliError):
    """Runaway event count"""
    pass
