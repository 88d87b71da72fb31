#!/usr/bin/env python3
"""Run the worked-example regression catalog and print a pass/fail table."""

import sys

from gbs.cli import main

if __name__ == "__main__":
    sys.exit(main(["catalog"] + sys.argv[1:]))
