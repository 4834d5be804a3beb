"""Back-and-forth systems, flat structures and subgroup codes on finite structures."""

from ._core import *  # noqa: F401,F403
from ._core import __doc__  # noqa: F401
