import sys

from unfoldtt.cli import main

sys.exit(main())
