"""
Command-line entry point: python hamnet.py <validate|search|unfold|nets|verify|demo> ...

Examples:
    python hamnet.py search cube
    python hamnet.py unfold cube --cycle 15623784 --edge 1,5 --format svg --out cube.svg
    python hamnet.py demo
"""

import sys

from src.cli import main

if __name__ == '__main__':
    sys.exit(main())
