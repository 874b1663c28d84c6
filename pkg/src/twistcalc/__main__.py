import sys

from twistcalc.cli import main

sys.exit(main())
