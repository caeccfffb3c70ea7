"""Hot-loop kernels: the compiled extension is preferred, the pure-Python
twin is the fallback. Both produce bit-identical event records for a given
random stream."""

try:
    from ._event_loop import thinning_chunk

    USING_COMPILED = True
except ImportError:  # extension not built; fall back to the Python twin
    from ._pure import thinning_chunk

    USING_COMPILED = False

from . import _pure

__all__ = ["thinning_chunk", "USING_COMPILED", "_pure"]
