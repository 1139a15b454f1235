from .config import ConfigLoader
from .log import setup_logging
