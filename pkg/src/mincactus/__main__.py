"""Entry point for ``python -m mincactus``."""

import sys

from .cli import main

sys.exit(main())
