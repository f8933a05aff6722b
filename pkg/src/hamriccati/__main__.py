"""Module entry point: ``python -m hamriccati``."""

import sys

from .cli import main

sys.exit(main())
