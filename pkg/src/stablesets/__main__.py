import sys

from stablesets.cli import main

sys.exit(main())
