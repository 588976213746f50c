"""Entry point for python -m caloronkit."""

import sys

from .main import main

sys.exit(main())
