"""Select the shortest-path backend at import time.

The compiled extension is used when it was built; setting the environment
variable ``RPP_PSAKS_PURE_PYTHON=1`` forces the pure-Python fallback.
"""
import os

from . import _dijkstra_py

BACKEND = "python"
sssp_many = _dijkstra_py.sssp_many

if os.environ.get("RPP_PSAKS_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _dijkstra
    except ImportError:
        pass
    else:
        BACKEND = "compiled"
        sssp_many = _dijkstra.sssp_many

python_sssp_many = _dijkstra_py.sssp_many
