import sys

from fisher_kinetic.cli import main

sys.exit(main())
