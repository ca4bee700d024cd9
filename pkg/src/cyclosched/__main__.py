import sys

from cyclosched.cli import main

sys.exit(main())
