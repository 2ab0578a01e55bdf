"""Streaming z-score anomaly detection on appliance RMS current."""

from ._core import *  # noqa: F401,F403
from ._core import __doc__  # noqa: F401
