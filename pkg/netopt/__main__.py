import sys

from netopt.main import main

sys.exit(main())
