# Copyright (c) 2026 the tilesim authors
# SPDX-License-Identifier: Apache-2.0
"""Python interface to the tilesim SoC simulator.

The heavy lifting lives in the `_tilesim` extension module; this package
just re-exports it so `import tilesim` works both from an installed wheel
(where `_tilesim` sits inside the package) and from a development build
(where it sits on PYTHONPATH next to the build tree).
"""

try:
    from ._tilesim import *  # noqa: F401,F403
    from ._tilesim import __doc__  # noqa: F401
except ImportError:  # development tree
    from _tilesim import *  # noqa: F401,F403
    from _tilesim import __doc__  # noqa: F401

__version__ = "0.1.0"
