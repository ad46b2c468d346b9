"""ChaosComp entry point for python -m chaoscomp"""

import sys

from chaoscomp.cli import dispatch

if __name__ == "__main__":
    sys.exit(dispatch())
