"""2D acoustic scattering: data synthesis and orthogonality-sampling imaging.

The compiled core lives in ``_osm2d``; installed wheels place it inside this
package, while in-tree builds put it on ``PYTHONPATH`` next to it.
"""

try:
    from ._osm2d import *  # noqa: F401,F403
    from ._osm2d import __doc__ as _core_doc
except ImportError:  # build-tree layout
    from _osm2d import *  # noqa: F401,F403
    from _osm2d import __doc__ as _core_doc

__version__ = "0.1.0"
__doc__ = _core_doc or __doc__
