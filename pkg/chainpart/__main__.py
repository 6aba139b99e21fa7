"""Allow `python -m chainpart`."""
import sys

from chainpart.cli import main

sys.exit(main())
