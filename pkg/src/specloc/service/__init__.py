"""HTTP service wrapping the specloc core: pydantic schemas, handlers, app."""

from . import handlers, schemas
from .handlers import ERROR_CODES, ServiceError

__all__ = ["handlers", "schemas", "ServiceError", "ERROR_CODES"]
