#!/usr/bin/env python3
"""
Main entry point for the DFBasis command-line tool.
"""
import sys

from cli.commands import main

if __name__ == "__main__":
    sys.exit(main())
