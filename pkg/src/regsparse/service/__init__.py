"""FastAPI service wrapping the decision procedures.

Run with: uvicorn regsparse.service:app
"""

from .app import app

__all__ = ["app"]
