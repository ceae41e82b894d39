#!/usr/bin/env python3
"""
etsched HTTP server startup script
This script sets up the Python path and starts the JSON API.
"""

import sys
import os

# Add the current directory to Python path so the etsched package can be imported
current_dir = os.path.dirname(os.path.abspath(__file__))
sys.path.insert(0, current_dir)

from etsched.main import start

if __name__ == "__main__":
    print("Starting etsched API server...")
    start()
