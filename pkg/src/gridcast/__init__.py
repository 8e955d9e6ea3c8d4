"""gridcast: spatiotemporal occupancy forecasting and risk-aware planning.

Pipeline stages: simulate 2D sessions (`sim`), self-supervised labeling
(`annotate`), SOGM generation (`sogm`), convolutional forecasting (`net`),
risk maps (`risk`), elastic-band planning (`planner`), metrics
(`evaluation`), all wired by the `gridcast` CLI.
"""

from ._kernels import get_backend

__version__ = "0.1.0"

__all__ = ["get_backend", "__version__"]
