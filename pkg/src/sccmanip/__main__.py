import sys

from sccmanip.cli import main

sys.exit(main())
