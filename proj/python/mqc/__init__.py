"""MQC fluorescence spectra of two dipole-coupled atoms (C++ core)."""

try:
    from ._mqc import *  # noqa: F401,F403
    from ._mqc import __version__  # noqa: F401
except ImportError:  # in-tree build: the extension sits next to the build products
    from _mqc import *  # noqa: F401,F403
    from _mqc import __version__  # noqa: F401
