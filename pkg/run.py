#!/usr/bin/env python3
"""Run the aquakern command-line experiment runner."""

import sys

from src.app import main

if __name__ == "__main__":
    sys.exit(main())
