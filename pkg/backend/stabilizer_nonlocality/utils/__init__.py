"""
Input and output helpers for the command line.

Module Structure:
    - parsers: `.stab`, `.graph` and CSV readers with file/line error locations
    - emitters: deterministic JSON and CSV writers

Usage example:
    from stabilizer_nonlocality.utils import parsers

    stab = parsers.load_stab("fixtures/five_qubit.stab")
"""

from importlib import import_module
from types import ModuleType

__all__ = ["parsers", "emitters"]

# parsers pulls in nonlocality and qudit_graph; load on first access only
_modules: dict[str, ModuleType] = {}


def __getattr__(name: str) -> ModuleType:
    if name not in __all__:
        raise AttributeError(f"module {__name__!r} has no attribute {name!r}")
    if name not in _modules:
        _modules[name] = import_module(f".{name}", __name__)
    return _modules[name]
