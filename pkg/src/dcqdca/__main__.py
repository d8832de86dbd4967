import sys

from dcqdca.cli import main

sys.exit(main())
