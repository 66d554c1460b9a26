import sys

from .sweeprun.cli import main

sys.exit(main())
