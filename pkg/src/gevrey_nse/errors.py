"""
Exception hierarchy shared by all gevrey_nse modules
"""


class GevreyNseError(Exception):
    """Base class of every error raised by gevrey_nse"""


class ConfigurationError(GevreyNseError, ValueError):
    """Invalid run configuration, constants file or mismatched field parameters"""


class ArgumentError(GevreyNseError, ValueError):
    """Invalid argument passed to an operation"""


class DomainError(GevreyNseError, ValueError):
    """Argument outside the mathematical domain of an estimate"""


class SaturationError(GevreyNseError, OverflowError):
    """
    Gevrey weight overflow.

    :param shell: euclidean norm |k| of the offending lattice shell
    :type shell: float
    """

    def __init__(self, message, shell):
        super().__init__(message)
        self.shell = shell


class EstimationError(GevreyNseError, RuntimeError):
    """Not enough usable data for an estimator or a fit"""


class NonConvergenceError(GevreyNseError, RuntimeError):
    """
    Picard iteration diverged.

    :param ratios: contraction ratios observed so far
    :type ratios: list
    """

    def __init__(self, message, ratios):
        super().__init__(message)
        self.ratios = list(ratios)


class NumericalAbort(GevreyNseError, RuntimeError):
    """
    Time stepping produced a non finite state.

    :param last_good_state: last finite state reached
    :type last_good_state: gevrey_nse.spectral.SpectralField
    :param time: time of last_good_state
    :type time: float
    """

    def __init__(self, message, last_good_state, time):
        super().__init__(message)
        self.last_good_state = last_good_state
        self.time = time
