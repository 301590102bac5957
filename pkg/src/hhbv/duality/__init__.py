from .resolution import *  # noqa: F401,F403
from .comparison import *  # noqa: F401,F403
from .pipeline import *  # noqa: F401,F403
