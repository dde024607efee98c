#!/usr/bin/env python3
"""
q-Series Toolkit - CLI Entry Point

Usage:
    python qseries_cli.py expand "psi(-q^2,q)" --trunc 26
    python qseries_cli.py verify all --json
    python qseries_cli.py --seed-acceptance --quick
"""

import sys

from app.cli import main

if __name__ == "__main__":
    sys.exit(main())
