import logging
from typing import Optional
from fastapi import FastAPI
from app.core.config import settings

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


def configure_logging(level: Optional[str] = None) -> None:
    """Configure the root logger once: stream handler plus an optional file handler."""
    handlers = [logging.StreamHandler()]
    if settings.LOG_FILE:
        handlers.append(logging.FileHandler(settings.LOG_FILE))
    logging.basicConfig(
        level=(level or settings.LOG_LEVEL).upper(),
        format=LOG_FORMAT,
        handlers=handlers,
    )


def create_app() -> FastAPI:
    """Create and configure the FastAPI application."""
    configure_logging()
    return FastAPI(title="ESPART API", version=settings.VERSION)
