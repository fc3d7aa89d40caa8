"""
Logging configuration for chartsem.
"""

import logging
import os
from typing import Optional


def default_log_dir() -> str:
    data_home = os.environ.get('XDG_DATA_HOME', os.path.expanduser('~/.local/share'))
    return os.path.join(data_home, 'chartsem')


def setup_logging(verbose: bool = False, log_dir: Optional[str] = None):
    """
    Set up logging for chartsem.

    Logs go to:
    - ~/.local/share/chartsem/chartsem.log (or log_dir/chartsem.log)
    - Console (stderr)

    The log file never lives inside a pipeline output directory, so output
    trees stay byte-identical across runs.

    Args:
        verbose: Log at DEBUG instead of INFO.
        log_dir: Override for the log directory.
    """
    log_dir = log_dir or default_log_dir()
    os.makedirs(log_dir, exist_ok=True)

    log_file = os.path.join(log_dir, 'chartsem.log')

    # Configure root logger
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.INFO,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=[
            logging.FileHandler(log_file),
            logging.StreamHandler()
        ],
        force=True,
    )

    logger = logging.getLogger('chartsem')
    logger.info(f"Logging initialized. Log file: {log_file}")

    return logger
