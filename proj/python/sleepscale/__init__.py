"""Energy-optimal speed scaling with a sleep state.

Builds scheduling instances from partition instances, certifies the
construction numerically, computes exact minimum-energy schedules via the
gap-allocation structure, and speed-scales arbitrary instances with the
max-density scheduler.
"""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
