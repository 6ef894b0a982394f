#!/usr/bin/env python3
"""
associahedra - Startup Script
Runs the command-line interface with configured logging
"""

import sys

from associahedra.cli import run

if __name__ == '__main__':
    sys.exit(run(sys.argv[1:]))
