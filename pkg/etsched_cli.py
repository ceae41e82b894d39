#!/usr/bin/env python3
"""
etsched command line launcher
Sets up the Python path and runs the etsched CLI.
"""

import sys
import os

# Add the current directory to Python path so the etsched package can be imported
current_dir = os.path.dirname(os.path.abspath(__file__))
sys.path.insert(0, current_dir)

from etsched.cli import main

if __name__ == "__main__":
    sys.exit(main())
