"""Core syntax, pretty-printer and kernel checker."""

from importlib import import_module

_LAZY = {
    "check_signature": "kernel",
    "check_telescope": "kernel",
    "check_term": "kernel",
    "check_type": "kernel",
    "infer_term": "kernel",
    "load_signature": "kernel",
    "print_signature": "printer",
    "print_term": "printer",
}


# the kernel depends on nbe, which depends on core.syntax; resolve lazily
def __getattr__(name):
    if name in _LAZY:
        return getattr(import_module(f"unfoldtt.core.{_LAZY[name]}"), name)
    raise AttributeError(name)
