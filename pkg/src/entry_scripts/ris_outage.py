"""
Entry point for the ris-outage command
"""
import sys

from src.adapters.cli.app import run


def main():
    """Run one ris-outage command and exit with its code"""
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
