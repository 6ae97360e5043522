"""
Celery tasks: one benchmark cell or one simulated trial per task.
"""

import logging
from typing import Any, Dict

from mission_planner.bench import run_bench_cell, run_trial_cell
from config import setup_logging, get_config

from celery_app import celery

config = get_config()
setup_logging(config['LOG_LEVEL'], config['WORKER_LOG_FILE'], component="worker")


@celery.task(name='mission.bench_cell')
def bench_cell(cell: Dict[str, Any]) -> Dict[str, Any]:
    """Plan one generated scenario and return its metrics row."""
    label = f"{cell['preset']} seed={cell['seed']} n={cell['n']} m={cell['m']}"
    logging.info(f"Starting bench cell {label}")
    try:
        row = run_bench_cell(cell)
        logging.info(f"Bench cell {label} finished with status {row['status']}")
        return row
    except Exception as e:
        logging.error(f"Bench cell {label} failed: {e}", exc_info=True)
        raise


@celery.task(name='mission.simulate_trial')
def simulate_trial(cell: Dict[str, Any]) -> Dict[str, Any]:
    """Execute a stored plan once with injected unknown obstacles."""
    logging.info(f"Starting simulation trial seed={cell['seed']} obstacles={cell['obstacles']}")
    try:
        return run_trial_cell(cell)
    except Exception as e:
        logging.error(f"Simulation trial seed={cell['seed']} failed: {e}", exc_info=True)
        raise
