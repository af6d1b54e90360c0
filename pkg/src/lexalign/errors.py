class LexalignError(Exception):
    """Base class for data and protocol errors raised by this package.

    The CLI maps any subclass to exit code 2 (data error), keeping exit
    code 1 for usage mistakes.
    """
