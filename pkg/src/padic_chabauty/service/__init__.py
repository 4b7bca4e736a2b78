"""HTTP service wrapping the library; run with

    uvicorn padic_chabauty.service:app
"""

from .api import app

__all__ = ["app"]
