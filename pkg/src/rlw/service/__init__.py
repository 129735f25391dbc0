"""HTTP service wrapping the lattice workbench."""

from .app import create_app

__all__ = ["create_app"]
