import sys

from impatient_queue.cli import main

sys.exit(main())
