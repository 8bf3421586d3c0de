import enum
import logging
from concurrent.futures import ThreadPoolExecutor

import mpmath
import numpy as np

from resonpy.compat import tqdm

logger = logging.getLogger(__name__)

DECIMAL_DIGITS = 17

_max_workers = None
_show_progress = False


class StrEnum(str, enum.Enum):
    def __new__(cls, *args):
        for arg in args:
            if not isinstance(arg, (str, enum.auto)):
                raise TypeError(
                    "Values of StrEnums must be strings: {} is a {}".format(
                        repr(arg), type(arg)
                    )
                )
        return super().__new__(cls, *args)

    def __str__(self):
        return self.value

    # pylint: disable=no-self-argument
    def _generate_next_value_(name, *_):
        return name


def set_max_workers(n):
    """Cap the number of worker threads used by every partitioned operation.

    ``None`` restores the executor default.
    """
    global _max_workers
    if n is not None and n < 1:
        raise ValueError("Worker count must be positive, got {}".format(n))
    _max_workers = n


def get_max_workers():
    return _max_workers


def set_progress(enabled):
    global _show_progress
    _show_progress = bool(enabled)


def progress(iterable, **kwargs):
    """Wrap ``iterable`` in a progress bar if progress display is enabled"""
    if not _show_progress:
        return iterable
    return tqdm(iterable, **kwargs)


def ordered_map(fn, items, threads=None):
    """
    Apply ``fn`` to every item, possibly on a thread pool, returning results in input order.

    Parameters
    ----------
    fn : callable
    items : sequence
    threads : int, optional
        Maximum worker count; defaults to the global cap set by ``set_max_workers``.
        1 runs serially in the calling thread.

    Returns
    -------
    list
    """
    items = list(items)
    threads = threads or _max_workers
    if threads == 1 or len(items) <= 1:
        return [fn(item) for item in progress(items)]
    with ThreadPoolExecutor(max_workers=threads) as executor:
        return list(progress(executor.map(fn, items), total=len(items)))


def decimal_string(value, digits=DECIMAL_DIGITS):
    """
    Serialise a number as a decimal string.

    Floats (and numpy floats) use ``digits`` significant digits, mpmath numbers keep their
    own precision up to ``max(digits, mp.dps)`` digits, integers are written exactly.

    Parameters
    ----------
    value : int or float or mpmath.mpf
    digits : int

    Returns
    -------
    str
    """
    if isinstance(value, (bool, np.bool_)):
        raise TypeError("Booleans are not serialised as decimal strings")
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, mpmath.mpf):
        return mpmath.nstr(value, max(digits, mpmath.mp.dps), strip_zeros=False)
    return "{:.{}g}".format(float(value), digits)


def parse_decimal(s):
    """Inverse of ``decimal_string`` for floats"""
    return float(s)


def is_uniform(grid, rtol=1e-9):
    """Whether an ascending 1D array has constant spacing within ``rtol``"""
    grid = np.asarray(grid, dtype=float)
    if grid.size < 3:
        return True
    steps = np.diff(grid)
    step = (grid[-1] - grid[0]) / (grid.size - 1)
    scale = max(abs(step), np.finfo(float).eps * max(abs(grid[0]), abs(grid[-1])))
    return bool(np.all(np.abs(steps - step) <= rtol * scale + 4 * np.spacing(grid[-1])))
