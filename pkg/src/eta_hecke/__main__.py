import sys

from eta_hecke.cli import main

sys.exit(main())
