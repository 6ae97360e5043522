#!/usr/bin/env python3
"""
Launcher for the Celery workers that run benchmark cells and simulated trials.
"""

import os
import sys
import subprocess
import argparse
from typing import List

ROOT = os.path.dirname(os.path.abspath(__file__))
sys.path.insert(0, ROOT)

from config import setup_logging, get_config


def check_sweep_broker(broker_url: str) -> bool:
    """Pings the Redis broker that carries sweep cells to the workers."""
    try:
        import redis
        redis.from_url(broker_url).ping()
        print(f"✓ Sweep broker reachable at {broker_url}")
        return True
    except Exception as e:
        print(f"✗ Sweep broker unreachable at {broker_url}: {e}")
        print("  Start Redis or point CELERY_BROKER_URL at a running instance.")
        return False


def worker_command(pool: str, concurrency: int, node_name: str, log_level: str = "INFO") -> List[str]:
    """Celery worker command line consuming the mission.* tasks."""
    return [sys.executable, "-m", "celery", "-A", "tasks", "worker",
            f"--loglevel={log_level}", "-n", node_name, "-P", pool, "--concurrency", str(concurrency)]


def launch_worker(command: List[str]) -> subprocess.Popen:
    """Starts the worker with the repository root importable."""
    env = os.environ.copy()
    env['PYTHONPATH'] = os.pathsep.join(p for p in (ROOT, env.get('PYTHONPATH', '')) if p)
    return subprocess.Popen(command, env=env, cwd=ROOT)


def main():
    parser = argparse.ArgumentParser(description="Start a mission planner sweep worker")
    parser.add_argument("--check-broker", action="store_true", help="Only check the Redis broker")
    parser.add_argument("--pool", default="prefork", choices=["prefork", "solo", "threads"],
                        help="Celery pool implementation (use solo on Windows)")
    parser.add_argument("--concurrency", type=int, help="Worker processes (defaults to MISSION_JOBS)")
    parser.add_argument("--name", help="Worker node name (defaults to WORKER_NAME)")

    args = parser.parse_args()

    config = get_config()
    setup_logging(config['LOG_LEVEL'], config['WORKER_LOG_FILE'], component="launcher")

    reachable = check_sweep_broker(config['CELERY_BROKER_URL'])
    if args.check_broker or not reachable:
        sys.exit(0 if reachable else 1)

    concurrency = args.concurrency or config['MISSION_JOBS']
    node_name = args.name or config['WORKER_NAME']
    command = worker_command(args.pool, concurrency, node_name, config['LOG_LEVEL'])
    print(f"Starting sweep worker {node_name} (pool={args.pool}, concurrency={concurrency})...")
    worker = launch_worker(command)
    print("\n✓ Worker started. Run sweeps with MISSION_ASYNC=1 or `run.py bench --async`.")
    print("Press Ctrl+C to stop")

    try:
        worker.wait()
    except KeyboardInterrupt:
        print("\nShutting down...")
        worker.terminate()
        worker.wait()


if __name__ == "__main__":
    main()
