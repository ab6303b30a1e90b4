"""Allow ``python -m semslice`` as an alias for the console script."""

import sys

from semslice.cli import main

if __name__ == "__main__":
    sys.exit(main())
