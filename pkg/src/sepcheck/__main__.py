import sys

from sepcheck.cli import main

sys.exit(main())
