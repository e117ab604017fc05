"""Random normed modules over finite atomic probability spaces.

The heavy lifting lives in the compiled `_core` extension; this package
re-exports its public surface.
"""

from rnmkit._core import *  # noqa: F401,F403
from rnmkit._core import __version__  # noqa: F401
