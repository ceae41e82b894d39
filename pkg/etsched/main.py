import logging
from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware
import uvicorn

from . import __version__
from .api_routes import router as api_router
from .config import config
from .logging_setup import configure_logging

logger = logging.getLogger(__name__)

# Create FastAPI app
app = FastAPI(
    title="etsched",
    description="Throughput maximization on a speed-scalable processor under an energy budget",
    version=__version__
)

# Add CORS middleware
app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)

app.include_router(api_router, prefix="")


def start():
    """Start the FastAPI server."""
    configure_logging()
    server_config = config.get_server_config()
    logger.info(f"Serving on {server_config['host']}:{server_config['port']}")
    uvicorn.run(
        "etsched.main:app",
        host=server_config['host'],
        port=server_config['port'],
        reload=server_config['reload']
    )


if __name__ == "__main__":
    start()
