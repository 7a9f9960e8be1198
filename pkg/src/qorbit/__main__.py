import sys

from qorbit.cli import main

sys.exit(main())
