from ._pinlab import *  # noqa: F401,F403
from ._pinlab import __version__  # noqa: F401
