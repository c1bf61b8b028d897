"""c-map metrics, their reductions, and numerical geometry checks."""

from _cmaplab import *  # noqa: F401,F403
from _cmaplab import __doc__  # noqa: F401
