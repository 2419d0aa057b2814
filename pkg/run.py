"""
Command-line entry point for elastic_clust.

Usage:
    python run.py experiment --train Beef_TRAIN.ts --test Beef_TEST.ts --metric msm
    python run.py rank --metric clacc results/

The environment configuration is chosen with ``ELASTIC_CLUST_ENV``
(production, development or testing); see ``config.py``.
"""

import sys

from elastic_clust.cli import cli_main

if __name__ == "__main__":
    sys.exit(cli_main())
