from rahbo._core import *  # noqa: F401,F403
from rahbo._core import __version__  # noqa: F401
