"""Exotic (nu-deformed) oscillator algebras over truncated Fock spaces."""
from .modes import *  # noqa: F401,F403
from .params import *  # noqa: F401,F403
from .presets import *  # noqa: F401,F403
from .evaluation import *  # noqa: F401,F403
from .taylor import *  # noqa: F401,F403
