"""Turn-based multi-agent cyber attacker vs. defender battle simulator.

The heavy lifting lives in the compiled ``_mcas`` extension; this package
re-exports its surface: scenario loading/saving/validation, the bundled
scenarios, the environment loop, behaviors, search and training.
"""

try:
    from ._mcas import *  # noqa: F401,F403
except ImportError:  # development layout: extension directly on sys.path
    from _mcas import *  # noqa: F401,F403

__version__ = "0.1.0"
