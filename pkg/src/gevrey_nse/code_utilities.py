"""
Provides a set of utilities aimed at developers
"""
import logging
import os
from functools import wraps
from time import time

import numpy as np

from gevrey_nse.datastore import THREADS_ENV_VAR
from gevrey_nse.errors import ConfigurationError


def summarize(value):
    """
    Renders a value for log output without dumping large payloads.

    numpy arrays are rendered as shape and dtype, objects exposing a ``summary()`` method
    (fields, trajectories) as the result of that method.

    :param value: any value
    :return: a short string describing value
    :rtype: str
    """
    if isinstance(value, np.ndarray):
        if value.size <= 4:
            return repr(value.tolist())
        return f"ndarray(shape={value.shape}, dtype={value.dtype})"
    summary = getattr(value, "summary", None)
    if callable(summary):
        return summary()
    if isinstance(value, (list, tuple)) and len(value) > 6:
        return f"{type(value).__name__}(len={len(value)})"
    return repr(value)


def log(func):
    """
    Decorates a function to add logging.

    A log entry (DEBUG level) is printed with decorated function's qualified name and all its params.

    If the decorated function returns anything, a log entry (DEBUG level) is printed with decorated
    function's qualified name and return value(s).

    Logs are issued using the logger named after the decorated function's enclosing module. Params and
    return values are only rendered when that logger is enabled for DEBUG.

    :param func: The function to decorate
    :return: The decorated function
    """

    @wraps(func)
    def wrapped(*args, **kwargs):
        function_name = func.__qualname__
        logger = logging.getLogger(func.__module__)
        debug = logger.isEnabledFor(logging.DEBUG)
        if debug:
            logger.debug("%s() called with : %s - %s",
                         function_name,
                         ", ".join(summarize(arg) for arg in args),
                         {key: summarize(value) for key, value in kwargs.items()})
        start_time = time()
        result = func(*args, **kwargs)
        end_time = time()
        if debug:
            logger.debug("%s() returned %s in %0.3f ms",
                         function_name,
                         summarize(result),
                         (end_time - start_time) * 1000)
        return result
    return wrapped


def get_thread_count(environment=None):
    """
    Reads the internal parallelism cap from the environment.

    :param environment: mapping to read from, defaults to os.environ
    :type environment: dict

    :return: the configured thread count, or None when unset
    :rtype: int or None

    :raises ConfigurationError: if the variable is set but is not a positive integer
    """
    environment = os.environ if environment is None else environment
    raw_value = environment.get(THREADS_ENV_VAR)
    if raw_value is None or raw_value.strip() == "":
        return None
    try:
        count = int(raw_value)
    except ValueError as error:
        raise ConfigurationError(f"{THREADS_ENV_VAR}={raw_value!r} is not an integer") from error
    if count < 1:
        raise ConfigurationError(f"{THREADS_ENV_VAR}={count} must be >= 1")
    return count
