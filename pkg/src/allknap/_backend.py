"""Selects the compiled kernels when available, else the pure-Python ones."""
from . import _pure

try:
    from . import _ext as kernels
except ImportError:  # extension not built
    kernels = _pure

NAME = kernels.NAME


def available():
    """Names of the kernel backends importable in this environment."""
    names = ["python"]
    if kernels is not _pure:
        names.insert(0, "cython")
    return names


def get(name=None):
    if name is None:
        return kernels
    if name == "python":
        return _pure
    if name == "cython":
        if kernels is _pure:
            raise ImportError("compiled extension allknap._ext is not built")
        return kernels
    raise ValueError(f"unknown backend {name!r}")
