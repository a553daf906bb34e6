import sys

from flightdae.cli import main

sys.exit(main())
