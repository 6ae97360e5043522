#!/usr/bin/env python3
"""
Command-line entry point for the mission planner.

    python run.py gen --preset table3 --n 25 --m 1 --seed 7
    python run.py plan output/scenario_table3_n25_m1_s7.json
"""

import os
import sys

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from mission_planner.cli import main

if __name__ == '__main__':
    sys.exit(main())
