import sys

from ramseymin.cli import main

sys.exit(main())
