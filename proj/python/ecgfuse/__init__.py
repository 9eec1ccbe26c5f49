"""Late-fusion evaluation of ECG embeddings."""

from ecgfuse._core import *  # noqa: F401,F403
from ecgfuse._core import __doc__  # noqa: F401

__version__ = "0.1.0"
