"""
Main application entry point

Runs the geocube command line.
"""

import sys
from pathlib import Path

# Add src directory to path
sys.path.insert(0, str(Path(__file__).parent))

from cli.commands import run


def main():
    """Main application entry point"""
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
