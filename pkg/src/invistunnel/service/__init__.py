"""HTTP service wrapping the scattering toolkit."""

from .app import app

__all__ = ["app"]
