"""Exception hierarchy shared across the package.

The CLI maps these onto exit codes: input problems exit 1, solver or
diagnostic failures exit 2.
"""


class ScribbleSegError(Exception):
    """Base class for all package errors."""


class InputError(ScribbleSegError):
    """Bad user input: unreadable files, malformed scribbles, bad config."""


class ConvergenceError(ScribbleSegError):
    """A numerical routine exceeded its iteration budget."""


class SeedCoverageError(ScribbleSegError):
    """Peeling stopped before every seed vertex was covered."""


class EmptySeedsError(ScribbleSegError):
    """A scribbled class lost all of its superpixels to other classes."""
