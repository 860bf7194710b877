# GmainSL.py
"""
Main entry point for ShallitLab CLI commands.
"""
import os
import sys

# Ensure Modules directory is in path
current_dir = os.path.dirname(os.path.abspath(__file__))
if current_dir not in sys.path:
    sys.path.append(current_dir)

import GcliSL

if __name__ == "__main__":
    sys.exit(GcliSL.main())

# === End of GmainSL.py ===
