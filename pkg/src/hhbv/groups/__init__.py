"""Group algebras of ``Z^d``: Laurent arithmetic, Koszul resolutions, weight slices."""

from .koszul import *  # noqa: F401,F403
from .laurent import *  # noqa: F401,F403
from .slice import *  # noqa: F401,F403
