"""Entry point for ``python -m superprolong``."""

import sys

from .cli import main

sys.exit(main())
