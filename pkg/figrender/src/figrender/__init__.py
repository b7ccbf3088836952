"""Figure rendering for kerrheat output files.

Every script in this package consumes the delimited files written by the
kerrheat command line (CSV tables with ``#``-prefixed metadata lines, plus
strict-JSON sidecars) and renders one figure kind to SVG or PNG.  No physics
is recomputed here: every number that appears on a figure is read verbatim
from an input file.
"""

__version__ = "0.1.0"

__all__ = ["__version__"]
