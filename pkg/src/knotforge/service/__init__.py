"""HTTP service exposing the knotforge constructions."""

from .app import app

__all__ = ["app"]
