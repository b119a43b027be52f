import sys

from .flowctl.cli import main

sys.exit(main())
