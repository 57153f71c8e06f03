import sys

from onto2cdm.cli import main

sys.exit(main())
