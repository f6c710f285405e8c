"""
Error hierarchy for omvals, the precision-restart wrapper and the command
wrapper mapping errors to exit codes.

Error handling follows a hybrid pattern:
- Technical failures (bad input, lost precision, broken invariants) raise an
  ``OmvalsError`` subclass.
- Valid mathematical outcomes are returned as values: a tripped bound guard
  yields ``math.inf`` and an exact factor carries ``h = inf``.
"""

import logging
from functools import wraps
from typing import Callable, Optional, TypeVar

import click

from omvals import config

logger = logging.getLogger(__name__)

T = TypeVar("T")


class OmvalsError(Exception):
    """Base class of every error raised by omvals."""


class PolynomialParseError(OmvalsError, ValueError):
    """The polynomial text or JSON could not be parsed."""


class NotPrime(OmvalsError, ValueError):
    """The modulus given as p is not a rational prime."""


class NotMonic(OmvalsError, ValueError):
    """A polynomial required to be monic is not."""


class ZeroPolynomial(OmvalsError, ValueError):
    """An operation received the zero polynomial."""


class ZeroLeadingCoefficient(OmvalsError, ValueError):
    """A polynomial was declared with a vanishing leading coefficient."""


class ReduciblePsi(OmvalsError, ValueError):
    """A tower extension polynomial factors over the current top level."""


class PsiIsY(OmvalsError, ValueError):
    """The residual factor y is only allowed at level zero."""


class ChainDegreeMismatch(OmvalsError, ValueError):
    """The degrees of a multiadic chain are not strictly increasing divisors."""


class IncompleteType(OmvalsError, ValueError):
    """Okutsu invariants were requested for a type that is not complete."""


class ParamOutOfRange(OmvalsError, ValueError):
    """Example generator parameters are outside their validity range."""


class ExactFactor(OmvalsError):
    """The approximation divides the polynomial exactly over the integers."""


class InsufficientPrecision(OmvalsError):
    """A valuation hit the working precision ceiling; retry with a larger one."""


class PrecisionCapExceeded(OmvalsError):
    """The precision doubling loop reached the configured maximum."""


class InvariantViolation(OmvalsError, AssertionError):
    """An internal identity failed; this signals a bug, never a user error."""


def double_precision(nu: int, error: InsufficientPrecision, where: str) -> int:
    """
    Next working precision after ``error``.

    Raises:
        PrecisionCapExceeded: 2 nu is above the configured maximum
    """
    cap = config.max_precision()
    if 2 * nu > cap:
        raise PrecisionCapExceeded(
            f"{where}: precision {2 * nu} exceeds the cap {cap} ({error})"
        ) from error
    logger.debug(f"{where}: {error}; precision {nu} -> {2 * nu}")
    return 2 * nu


def with_precision_restart(func: Callable[..., T]) -> Callable[..., T]:
    """
    Decorator running a driver under the adaptive precision loop.

    The wrapped function must accept a keyword argument ``precision``. It is
    first called with the caller's precision (or the configured start value);
    every ``InsufficientPrecision`` that escapes it doubles the precision until
    the configured maximum is exceeded, at which point ``PrecisionCapExceeded``
    is raised.
    """
    @wraps(func)
    def wrapper(*args, precision: Optional[int] = None, **kwargs) -> T:
        nu = precision or config.start_precision()
        while True:
            try:
                return func(*args, precision=nu, **kwargs)
            except InsufficientPrecision as e:
                nu = double_precision(nu, e, func.__name__)

    return wrapper


def _exit_code_for(error: OmvalsError) -> int:
    if isinstance(error, (PolynomialParseError, NotPrime, ParamOutOfRange)):
        return config.ExitCode.PARSE_ERROR
    if isinstance(error, (NotMonic, ZeroLeadingCoefficient)):
        return config.ExitCode.NOT_MONIC
    return config.ExitCode.FAILURE


def cli_command(error_prefix: str = "Error"):
    """
    Decorator for click commands mapping errors to exit codes.

    The wrapped command returns an exit code (None means OK). Library errors
    print ``error: <prefix>: <message>`` to stderr and exit with the code of
    their class; anything unexpected is logged with its traceback and exits 1.

    Args:
        error_prefix: Prefix for error messages (default: "Error")

    Returns:
        Decorated command function
    """
    def decorator(func: Callable[..., Optional[int]]) -> Callable[..., None]:
        @wraps(func)
        def wrapper(*args, **kwargs) -> None:
            ctx = click.get_current_context()
            try:
                code = func(*args, **kwargs)
            except (click.exceptions.Exit, click.ClickException):
                raise
            except OmvalsError as e:
                code = _exit_code_for(e)
                hint = " (try --normalize)" if code == config.ExitCode.NOT_MONIC else ""
                click.echo(f"error: {error_prefix}: {e}{hint}", err=True)
                logger.debug(f"{func.__name__} failed with {type(e).__name__}")
            except Exception as e:
                logger.exception(f"{error_prefix}: unexpected {type(e).__name__}")
                click.echo(f"error: {error_prefix}: {e}", err=True)
                code = config.ExitCode.FAILURE
            ctx.exit(code or config.ExitCode.OK)

        return wrapper

    return decorator
