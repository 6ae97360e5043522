"""
Configuration and logging setup for the mission planner.
"""

import os
import logging
import logging.handlers
from pathlib import Path
from typing import Any, Dict

import yaml
from dotenv import load_dotenv

load_dotenv()


def setup_logging(log_level: str = None, log_file: str = None, component: str = "planner"):
    """Setup logging for the planner CLI or a sweep worker.

    Args:
        log_level: Logging level (DEBUG, INFO, WARNING, ERROR, CRITICAL)
        log_file: Path to log file (optional)
        component: Tag written on every line (planner, worker, launcher)
    """
    level = (log_level or os.environ.get('LOG_LEVEL', 'INFO')).upper()
    numeric_level = getattr(logging, level, logging.INFO)

    if log_file:
        Path(log_file).parent.mkdir(parents=True, exist_ok=True)

    root_logger = logging.getLogger()
    root_logger.setLevel(numeric_level)

    for handler in root_logger.handlers[:]:
        root_logger.removeHandler(handler)

    formatter = logging.Formatter(
        f'%(asctime)s - mission-{component} - %(processName)s - %(levelname)s - %(message)s',
        datefmt='%Y-%m-%d %H:%M:%S'
    )

    console_handler = logging.StreamHandler()
    console_handler.setLevel(numeric_level)
    console_handler.setFormatter(formatter)
    root_logger.addHandler(console_handler)

    if log_file:
        file_handler = logging.handlers.RotatingFileHandler(
            log_file,
            maxBytes=10*1024*1024,  # 10MB
            backupCount=5
        )
        file_handler.setLevel(numeric_level)
        file_handler.setFormatter(formatter)
        root_logger.addHandler(file_handler)

    for noisy in ('celery', 'kombu', 'redis', 'shapely'):
        logging.getLogger(noisy).setLevel(logging.WARNING)

    logging.info(f"Mission planner {component} logging at {level}" + (f" to {log_file}" if log_file else ""))


def get_config() -> Dict[str, Any]:
    """Get application configuration from environment variables."""
    return {
        'CELERY_BROKER_URL': os.environ.get('CELERY_BROKER_URL', 'redis://localhost:6379/0'),
        'CELERY_RESULT_BACKEND': os.environ.get('CELERY_RESULT_BACKEND', 'redis://localhost:6379/0'),
        'MISSION_ASYNC': os.environ.get('MISSION_ASYNC', '0') == '1',
        'MISSION_JOBS': int(os.environ.get('MISSION_JOBS', '1')),
        'MISSION_OUTPUT_DIR': os.environ.get('MISSION_OUTPUT_DIR', 'output'),
        'MISSION_USER_CONFIG': os.environ.get('MISSION_USER_CONFIG', '.mission.yml'),
        'LOG_LEVEL': os.environ.get('LOG_LEVEL', 'INFO'),
        'LOG_FILE': os.environ.get('LOG_FILE', 'logs/mission_planner.log'),
        'WORKER_LOG_FILE': os.environ.get('WORKER_LOG_FILE', 'logs/mission_worker.log'),
        'WORKER_NAME': os.environ.get('WORKER_NAME', 'mission-planner@%h'),
    }


def load_user_config(path: str = None) -> Dict[str, Any]:
    """Load YAML overrides for the custom preset.

    A missing file yields an empty config; an unreadable one is logged and ignored.
    """
    config_path = Path(path or get_config()['MISSION_USER_CONFIG'])
    if not config_path.exists():
        return {}
    try:
        with open(config_path, 'r') as f:
            data = yaml.safe_load(f) or {}
        if not isinstance(data, dict):
            raise ValueError(f"top level must be a mapping, got {type(data).__name__}")
        logging.info(f"Loaded user config from {config_path}")
        return data
    except Exception as e:
        logging.warning(f"Failed to load user config: {e}")
        return {}
