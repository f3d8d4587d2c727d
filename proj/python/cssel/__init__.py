"""Column subset selection for partially observed matrices.

Thin wrapper over the compiled core. The extension lives inside the package
when installed as a wheel and next to it on PYTHONPATH in development builds.
"""

try:
    from ._cssel import *  # noqa: F401,F403
    from ._cssel import __doc__ as _core_doc
except ImportError:  # pragma: no cover - development layout
    from _cssel import *  # noqa: F401,F403
    from _cssel import __doc__ as _core_doc

__doc__ = _core_doc or __doc__
__version__ = "0.1.0"
