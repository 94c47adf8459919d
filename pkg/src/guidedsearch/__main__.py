import sys

from guidedsearch.cli import main

sys.exit(main())
