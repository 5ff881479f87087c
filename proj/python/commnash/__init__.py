"""Communication-bounded approximate Nash equilibria for bimatrix games."""

from ._commnash import *  # noqa: F401,F403
from ._commnash import __doc__  # noqa: F401

__version__ = "0.1.0"
