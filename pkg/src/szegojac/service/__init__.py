"""HTTP service: pydantic schemas and the FastAPI app."""

from .app import app

__all__ = ["app"]
