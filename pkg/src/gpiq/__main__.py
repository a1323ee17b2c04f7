import sys

from gpiq.cli import main

sys.exit(main())
