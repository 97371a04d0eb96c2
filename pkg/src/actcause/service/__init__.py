"""HTTP surface: a stateless FastAPI app over the engine."""

from .app import app

__all__ = ["app"]
