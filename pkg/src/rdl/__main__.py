import sys

from rdl.cli import main

sys.exit(main())
